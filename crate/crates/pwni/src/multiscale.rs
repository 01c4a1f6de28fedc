//! Multi-scale acceleration: solve a subset of turns in full, interpolate
//! the rest.
//!
//! Turns are split into analyzed and non-analyzed sets. Analyzed turns keep
//! their own terminal-voltage unknowns and boundary condition; non-analyzed
//! turns get their terminal voltage and target current by linear-in-radius
//! interpolation between the nearest analyzed neighbors, with the current
//! target imposed on the strip through a penalty term.

use serde::Deserialize;

use crate::coil::MaterialParams;
use crate::error::{Error, Result};

/// How the interpolated current target is imposed on a non-analyzed strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyMode {
    /// Penalize `T − I/d` over the whole strip (the literal weak form).
    #[default]
    Distributed,
    /// Penalize only the outer-edge node, which pins the net current while
    /// leaving the interior current profile to the physics.
    EdgePinned,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiscaleConfig {
    /// Fully analyzed turns at each radial edge of the winding.
    pub boundary_turns: usize,
    /// Sampling interval among the middle turns (1 = analyze everything).
    pub interior_stride: usize,
    /// Elements per width for non-analyzed strips.
    pub coarse_elements: usize,
    /// Penalty weight; `None` uses the built-in scale.
    #[serde(default)]
    pub penalty: Option<f64>,
    #[serde(default)]
    pub penalty_mode: PenaltyMode,
}

impl Default for MultiscaleConfig {
    fn default() -> Self {
        MultiscaleConfig {
            boundary_turns: 5,
            interior_stride: 5,
            coarse_elements: 20,
            penalty: None,
            penalty_mode: PenaltyMode::Distributed,
        }
    }
}

impl MultiscaleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.boundary_turns < 1 {
            return Err(Error::Config("multiscale.boundary_turns ≥ 1".into()));
        }
        if self.interior_stride < 1 {
            return Err(Error::Config("multiscale.interior_stride ≥ 1".into()));
        }
        if self.coarse_elements < 2 {
            return Err(Error::Config("multiscale.coarse_elements ≥ 2".into()));
        }
        if let Some(p) = self.penalty {
            if !(p > 0.0) {
                return Err(Error::Config("multiscale.penalty > 0".into()));
            }
        }
        Ok(())
    }
}

/// Sorted 0-based analyzed-turn set: dense bands at both radial edges plus
/// an equidistant sweep of the interior. Turn 0 and turn N−1 are always
/// included.
pub fn select_analyzed(cfg: &MultiscaleConfig, n_turns: usize) -> Vec<usize> {
    let b = cfg.boundary_turns.min(n_turns);
    let mut set: Vec<usize> = Vec::new();
    for t in 0..b.min(n_turns) {
        set.push(t);
    }
    let mut t = b;
    while t + b < n_turns {
        set.push(t);
        t += cfg.interior_stride;
    }
    for t in n_turns.saturating_sub(b)..n_turns {
        set.push(t);
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Linear interpolation weights in radius for a turn at `r_j` between
/// analyzed turns at `r_i < r_j < r_k`; the weights sum to one.
pub fn interp_weights(r_i: f64, r_j: f64, r_k: f64) -> (f64, f64) {
    let span = r_k - r_i;
    ((r_k - r_j) / span, (r_j - r_i) / span)
}

/// Interpolated terminal voltage and azimuthal current of a non-analyzed
/// turn from its analyzed neighbors.
pub fn interp_turn(
    u_i: f64,
    i_i: f64,
    u_k: f64,
    i_k: f64,
    weights: (f64, f64),
) -> (f64, f64) {
    (
        weights.0 * u_i + weights.1 * u_k,
        weights.0 * i_i + weights.1 * i_k,
    )
}

/// Nearest analyzed neighbors `(below, above)` of a non-analyzed turn.
pub fn bracketing_analyzed(analyzed: &[usize], turn: usize) -> (usize, usize) {
    debug_assert!(!analyzed.contains(&turn));
    let pos = analyzed.partition_point(|&a| a < turn);
    (analyzed[pos - 1], analyzed[pos])
}

/// Built-in penalty weight: chosen so the penalty's diagonal contribution is
/// `10³ · (E₀/Jc0) / Δz`, i.e. a fixed multiple of the strip stiffness scale.
pub fn default_penalty(mat: &MaterialParams, dz: f64, radius: f64) -> f64 {
    2.0e3 * mat.e0 / (mat.jc0 * 2.0 * std::f64::consts::PI * radius * dz * dz)
}

/// Adds the penalty virtual work `∫ β (T − I/d) 2πr T̃ dz` to a strip
/// residual, using the same one-point element quadrature as the field-rate
/// term. `out` holds the residual rows of the free nodes `1..=M`.
#[allow(clippy::too_many_arguments)]
pub fn penalty_residual(
    mode: PenaltyMode,
    beta: f64,
    t_nodes: &[f64],
    z_nodes: &[f64],
    radius: f64,
    d_tape: f64,
    i_target: f64,
    out: &mut [f64],
) {
    let m = t_nodes.len() - 1;
    let c = i_target / d_tape;
    let two_pi_r = 2.0 * std::f64::consts::PI * radius;
    match mode {
        PenaltyMode::Distributed => {
            for e in 0..m {
                let dz = z_nodes[e + 1] - z_nodes[e];
                let t_mid = 0.5 * (t_nodes[e] + t_nodes[e + 1]);
                let contrib = beta * two_pi_r * (t_mid - c) * 0.5 * dz;
                if e > 0 {
                    out[e - 1] += contrib;
                }
                out[e] += contrib;
            }
        }
        PenaltyMode::EdgePinned => {
            let dz = z_nodes[m] - z_nodes[m - 1];
            out[m - 1] += beta * two_pi_r * (t_nodes[m] - c) * 0.5 * dz;
        }
    }
}

/// Resamples a piecewise-constant per-element field from one strip grid to
/// another by midpoint lookup (overlap injection for nested grids).
pub fn resample_elementwise(values: &[f64], z_from: &[f64], z_to: &[f64]) -> Vec<f64> {
    let m_to = z_to.len() - 1;
    let mut out = Vec::with_capacity(m_to);
    for e in 0..m_to {
        let zm = 0.5 * (z_to[e] + z_to[e + 1]);
        // Locate the source element containing the midpoint.
        let mut idx = z_from.partition_point(|&z| z <= zm);
        idx = idx.clamp(1, z_from.len() - 1) - 1;
        out.push(values[idx.min(values.len() - 1)]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cfg(b: usize, s: usize) -> MultiscaleConfig {
        MultiscaleConfig {
            boundary_turns: b,
            interior_stride: s,
            coarse_elements: 20,
            penalty: None,
            penalty_mode: PenaltyMode::Distributed,
        }
    }

    #[test]
    fn analyzed_selection_matches_150_turn_reference() {
        // Dense 10-turn edge bands plus a stride-5 interior sweep: 46 turns.
        let set = select_analyzed(&cfg(10, 5), 150);
        assert_eq!(set.len(), 46);
        assert!(set.contains(&0) && set.contains(&149));
    }

    #[test]
    fn analyzed_selection_small_example() {
        // 10 turns, 3-turn bands, stride 5 → bands plus one interior sample.
        let set = select_analyzed(&cfg(3, 5), 10);
        assert_eq!(set, vec![0, 1, 2, 3, 7, 8, 9]);
    }

    #[test]
    fn stride_one_analyzes_everything() {
        let set = select_analyzed(&cfg(2, 1), 12);
        assert_eq!(set, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn weights_reference_values() {
        assert_eq!(interp_weights(1.0, 1.0, 2.0), (1.0, 0.0));
        assert_eq!(interp_weights(0.0, 0.5, 1.0), (0.5, 0.5));
        let (wi, wk) = interp_weights(0.010, 0.012, 0.020);
        assert_relative_eq!(wi, 0.8, max_relative = 1e-12);
        assert_relative_eq!(wk, 0.2, max_relative = 1e-12);
        assert_relative_eq!(wi + wk, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn interpolation_reference_values() {
        // Constant profiles are preserved.
        let (u, _) = interp_turn(4.2e-6, 0.0, 4.2e-6, 0.0, (0.3, 0.7));
        assert_relative_eq!(u, 4.2e-6);
        // Weighted current example.
        let (_, i) = interp_turn(0.0, 100.0, 0.0, 50.0, (0.8, 0.2));
        assert_relative_eq!(i, 90.0);
        // A linear-in-radius profile is reproduced exactly.
        let f = |r: f64| 3.0 * r - 0.5;
        let (ri, rj, rk) = (0.03, 0.037, 0.05);
        let w = interp_weights(ri, rj, rk);
        let (val, _) = interp_turn(f(ri), 0.0, f(rk), 0.0, w);
        assert_relative_eq!(val, f(rj), max_relative = 1e-12);
    }

    #[test]
    fn bracketing_picks_nearest_neighbors() {
        let analyzed = vec![0, 1, 2, 7, 12, 13];
        assert_eq!(bracketing_analyzed(&analyzed, 5), (2, 7));
        assert_eq!(bracketing_analyzed(&analyzed, 8), (7, 12));
    }

    #[test]
    fn penalty_vanishes_at_zero_weight_and_scales_linearly() {
        let z: Vec<f64> = (0..=4).map(|i| i as f64 * 1e-3).collect();
        let t = [0.0, 1e5, 2e5, 2.5e5, 3e5];
        let mut out0 = [0.0; 4];
        penalty_residual(PenaltyMode::Distributed, 0.0, &t, &z, 0.04, 1e-4, 20.0, &mut out0);
        assert!(out0.iter().all(|&v| v == 0.0));

        let mut out1 = [0.0; 4];
        let mut out3 = [0.0; 4];
        penalty_residual(PenaltyMode::Distributed, 2.0, &t, &z, 0.04, 1e-4, 20.0, &mut out1);
        penalty_residual(PenaltyMode::Distributed, 6.0, &t, &z, 0.04, 1e-4, 20.0, &mut out3);
        for n in 0..4 {
            assert_relative_eq!(out3[n], 3.0 * out1[n], max_relative = 1e-12);
        }
    }

    #[test]
    fn edge_pinned_touches_only_last_row() {
        let z: Vec<f64> = (0..=4).map(|i| i as f64 * 1e-3).collect();
        let t = [0.0, 1e5, 2e5, 2.5e5, 3e5];
        let mut out = [0.0; 4];
        penalty_residual(PenaltyMode::EdgePinned, 5.0, &t, &z, 0.04, 1e-4, 20.0, &mut out);
        assert!(out[..3].iter().all(|&v| v == 0.0));
        assert!(out[3] != 0.0);
        // Zero exactly when the strip already carries the target.
        let mut out2 = [0.0; 4];
        penalty_residual(
            PenaltyMode::EdgePinned,
            5.0,
            &t,
            &z,
            0.04,
            1e-4,
            3e5 * 1e-4,
            &mut out2,
        );
        assert_abs_diff_eq!(out2[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn resampling_nested_grids_is_injection() {
        let z_coarse: Vec<f64> = (0..=2).map(|i| i as f64).collect();
        let z_fine: Vec<f64> = (0..=4).map(|i| i as f64 * 0.5).collect();
        let fine = resample_elementwise(&[3.0, 7.0], &z_coarse, &z_fine);
        assert_eq!(fine, vec![3.0, 3.0, 7.0, 7.0]);
        // And identical grids round-trip.
        let same = resample_elementwise(&[3.0, 7.0], &z_coarse, &z_coarse);
        assert_eq!(same, vec![3.0, 7.0]);
    }
}
