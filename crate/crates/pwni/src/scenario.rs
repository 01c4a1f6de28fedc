//! Operating scenarios: source profiles, the driven → closed-loop
//! transition, and external AC field excitation.

use crate::chain::Affine;
use crate::coil::CoilSpec;
use crate::error::{Error, Result};
use crate::kernel::{loop_field, loop_potential};

/// Piecewise-linear source current.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveProfile {
    /// `(time s, current A)` breakpoints with strictly increasing times.
    pub points: Vec<(f64, f64)>,
}

impl DriveProfile {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Config("drive profile needs at least one breakpoint".into()));
        }
        if self.points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("drive profile times must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Linear interpolation between breakpoints, held constant outside them.
    pub fn current_at(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        if t >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let idx = pts.partition_point(|p| p.0 <= t);
        let (t0, i0) = pts[idx - 1];
        let (t1, i1) = pts[idx];
        i0 + (i1 - i0) * (t - t0) / (t1 - t0)
    }

    pub fn breakpoint_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }
}

/// Driven → closed-loop switching parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoopConfig {
    /// Switching time t₀ (s).
    pub t0: f64,
    /// Short-circuit resistance during closed-loop operation (Ω).
    pub r_cl: f64,
}

/// Exact unit step: 1 for `x ≥ 0`, else 0.
pub fn step_fn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Whether the closed loop is active at time `t`.
pub fn switched(closed_loop: Option<&ClosedLoopConfig>, t: f64) -> bool {
    matches!(closed_loop, Some(cfg) if t >= cfg.t0)
}

/// Operating-mode constraint: while driven the coil current tracks the
/// source; once switched, the terminal voltage closes through the
/// short-circuit resistance. One equation, one extra unknown.
///
/// `(1 − ε(t−t₀))·(I_coil − I_source(t)) + ε(t−t₀)·(V_coil + I_coil·R_cl)`
pub fn mode_residual(
    i_coil: &Affine,
    v_coil: &Affine,
    t: f64,
    closed_loop: Option<&ClosedLoopConfig>,
    profile: &DriveProfile,
) -> Affine {
    match closed_loop {
        Some(cfg) if step_fn(t - cfg.t0) > 0.0 => {
            let mut row = v_coil.clone();
            row.axpy(cfg.r_cl, i_coil);
            row
        }
        _ => {
            let mut row = i_coil.clone();
            row.axpy(-1.0, &Affine::constant(profile.current_at(t)));
            row
        }
    }
}

/// Terminal voltage of the coil along the innermost tape's path:
/// input joint drop, the per-turn voltage drops, and the output joint drop.
pub fn coil_voltage(
    u_first_tape: &[Affine],
    i_in_first: &Affine,
    i_az_last_first: &Affine,
    r_in_first: f64,
    r_out_first: f64,
) -> Affine {
    let mut v = Affine::zero();
    for u in u_first_tape {
        v.axpy(1.0, u);
    }
    v.axpy(r_in_first, i_in_first);
    v.axpy(r_out_first, i_az_last_first);
    v
}

/// A pair of anti-series excitation coils above and below the pancake,
/// driven sinusoidally. Axial fields cancel on the midplane, leaving a
/// predominantly radial disturbance over the winding. One-way coupled: the
/// pancake's reaction on the excitation coils is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundField {
    /// Excitation loop radius (m).
    pub radius: f64,
    /// Loops sit at `axial_center ± z_offset` (m).
    pub z_offset: f64,
    /// Effective turns of each loop (ampere-turn multiplier).
    pub turns: f64,
    /// Drive amplitude (A).
    pub amplitude: f64,
    /// Drive frequency (Hz).
    pub frequency: f64,
    /// Excitation start time (s).
    pub t_start: f64,
}

impl BackgroundField {
    /// Geometry rule of thumb for a coil without a specified excitation
    /// set-up: loops at 1.5× the winding outer radius, offset ±1.5 tape
    /// widths. `turns` still needs calibration.
    pub fn default_geometry(spec: &CoilSpec) -> BackgroundField {
        BackgroundField {
            radius: 1.5 * spec.outer_radius(),
            z_offset: 1.5 * spec.tape_width,
            turns: 1.0,
            amplitude: 50.0,
            frequency: 1.0,
            t_start: 0.0,
        }
    }

    /// Instantaneous ampere-turns of the (positive) upper loop.
    pub fn ampere_turns_at(&self, t: f64) -> f64 {
        if t < self.t_start {
            return 0.0;
        }
        self.turns
            * self.amplitude
            * (2.0 * std::f64::consts::PI * self.frequency * (t - self.t_start)).sin()
    }

    /// (B_r, B_z) per unit ampere-turn of the anti-series pair at a point.
    pub fn unit_field_at(&self, axial_center: f64, r: f64, z: f64) -> (f64, f64) {
        let up = loop_field(self.radius, axial_center + self.z_offset, r, z).unwrap();
        let dn = loop_field(self.radius, axial_center - self.z_offset, r, z).unwrap();
        (up.0 - dn.0, up.1 - dn.1)
    }

    /// A_φ per unit ampere-turn of the pair at a point.
    pub fn unit_potential_at(&self, axial_center: f64, r: f64, z: f64) -> f64 {
        let up = loop_potential(self.radius, axial_center + self.z_offset, r, z).unwrap();
        let dn = loop_potential(self.radius, axial_center - self.z_offset, r, z).unwrap();
        up - dn
    }

    /// Effective turns needed for a target peak |B_r| at the winding's mean
    /// radius on the midplane.
    pub fn calibrate_turns(&self, spec: &CoilSpec, target_peak_br: f64) -> f64 {
        let r_probe = 0.5 * (spec.inner_radius + spec.outer_radius());
        let (br_unit, _) = self.unit_field_at(spec.axial_center, r_probe, spec.axial_center);
        target_peak_br / (br_unit.abs() * self.amplitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cycle_profile() -> DriveProfile {
        // 5 s ramp to 100 A, 15 s hold, 0.5 s ramp-down, 15 s plateau at zero.
        DriveProfile {
            points: vec![(0.0, 0.0), (5.0, 100.0), (20.0, 100.0), (20.5, 0.0), (35.5, 0.0)],
        }
    }

    #[test]
    fn profile_reference_points() {
        let p = cycle_profile();
        p.validate().unwrap();
        assert_relative_eq!(p.current_at(5.0), 100.0);
        assert_relative_eq!(p.current_at(20.5), 0.0);
        assert_abs_diff_eq!(p.current_at(0.0), 0.0);
        assert_relative_eq!(p.current_at(2.5), 50.0);
        assert_relative_eq!(p.current_at(20.25), 50.0);
    }

    #[test]
    fn profile_rejects_unordered_times() {
        let p = DriveProfile { points: vec![(0.0, 0.0), (0.0, 1.0)] };
        assert!(p.validate().is_err());
    }

    #[test]
    fn mode_residual_switches_exactly_at_t0() {
        let profile = cycle_profile();
        let cl = ClosedLoopConfig { t0: 15.0, r_cl: 500e-9 };
        let i = Affine::constant(80.0);
        let v = Affine::constant(2.0e-3);
        // Driven side: residual = I_coil − I_source(t).
        let r = mode_residual(&i, &v, 10.0, Some(&cl), &profile);
        assert_relative_eq!(r.value, 80.0 - 100.0);
        // Closed side (t = t0 included): residual = V_coil + I_coil·R_cl.
        let r = mode_residual(&i, &v, 15.0, Some(&cl), &profile);
        assert_relative_eq!(r.value, 2.0e-3 + 80.0 * 500e-9);
        // No closed-loop config: always driven.
        let r = mode_residual(&i, &v, 30.0, None, &profile);
        assert_relative_eq!(r.value, 80.0 - 100.0);
    }

    #[test]
    fn coil_voltage_zero_state() {
        let u = vec![Affine::zero(); 4];
        let v = coil_voltage(&u, &Affine::zero(), &Affine::zero(), 250e-9, 584e-9);
        assert_abs_diff_eq!(v.value, 0.0);
    }

    #[test]
    fn coil_voltage_accumulates_drops() {
        let u = vec![Affine::constant(1e-5), Affine::constant(2e-5)];
        let v = coil_voltage(
            &u,
            &Affine::constant(50.0),
            &Affine::constant(40.0),
            250e-9,
            584e-9,
        );
        assert_relative_eq!(v.value, 3e-5 + 50.0 * 250e-9 + 40.0 * 584e-9);
    }

    #[test]
    fn background_field_is_zero_before_start_and_radial_on_midplane() {
        let spec = presets::dual_tape_decay_30();
        let mut bf = BackgroundField::default_geometry(&spec);
        bf.t_start = 30.0;
        assert_abs_diff_eq!(bf.ampere_turns_at(29.9), 0.0);
        // Axial field cancels on the midplane by anti-symmetry.
        let (br, bz) = bf.unit_field_at(0.0, 0.033, 0.0);
        assert_abs_diff_eq!(bz, 0.0, epsilon = 1e-16);
        assert!(br.abs() > 0.0);
    }

    #[test]
    fn background_calibration_hits_target_peak() {
        let spec = presets::dual_tape_decay_30();
        let mut bf = BackgroundField::default_geometry(&spec);
        bf.turns = bf.calibrate_turns(&spec, 16.7e-3);
        let r_probe = 0.5 * (spec.inner_radius + spec.outer_radius());
        let (br_unit, _) = bf.unit_field_at(0.0, r_probe, 0.0);
        let peak = (br_unit * bf.turns * bf.amplitude).abs();
        assert_relative_eq!(peak, 16.7e-3, max_relative = 1e-10);
    }
}
