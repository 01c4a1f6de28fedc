//! Thin-strip superconductor physics on one tape turn.
//!
//! Each strip solves the 1D balance `∂E_φ/∂z = ∂B_r/∂t` across the tape
//! width, written in weak form with linear elements and one quadrature point
//! per element. The state variable is the current potential `T` at the strip
//! nodes; the azimuthal current density is its slope, `J_φ = ∂T/∂z`.
//!
//! The node at the lower edge `z = a` is pinned to `T = 0` (gauge) and its
//! test equation dropped; the upper-edge test equation carries the boundary
//! electric field, which for a driven strip is
//! `E_b = −∂A_φ/∂t + U/(2πr)` with `U` the voltage drop across the turn.

use crate::coil::MaterialParams;

/// Field-dependent critical current density: the anisotropic Kim form
/// `Jc(B) = Jc0 / (1 + sqrt((m·B∥)² + B⊥²)/B0)^α`.
pub fn jc_kim(b_par: f64, b_perp: f64, mat: &MaterialParams) -> f64 {
    let b_eff = ((mat.kim_m * b_par).powi(2) + b_perp * b_perp).sqrt();
    mat.jc0 / (1.0 + b_eff / mat.kim_b0).powf(mat.kim_alpha)
}

/// E–J power law `E = (E0/Jc)·|J/Jc|^(n−1)·J`; odd in `J`, zero slope at
/// `J = 0` for `n > 1`.
pub fn ej_power_law(j: f64, jc: f64, mat: &MaterialParams) -> f64 {
    debug_assert!(jc > 0.0);
    let x = j / jc;
    mat.e0 * x.abs().powf(mat.n_value - 1.0) * x
}

/// Slope `dE/dJ = (E0·n/Jc)·|J/Jc|^(n−1)` of the power law.
pub fn dej_dj(j: f64, jc: f64, mat: &MaterialParams) -> f64 {
    let x = j / jc;
    mat.e0 * mat.n_value / jc * x.abs().powf(mat.n_value - 1.0)
}

/// Net transport current of a strip: `I = d_tape · (T(b) − T(a))`, the exact
/// telescoped value of `d_tape · ∫ J_φ dz` for linear elements.
pub fn tape_current(t_nodes: &[f64], d_tape: f64) -> f64 {
    d_tape * (t_nodes[t_nodes.len() - 1] - t_nodes[0])
}

/// Element current densities `J_e = (T[e+1] − T[e]) / Δz_e`.
pub fn current_densities(t_nodes: &[f64], z_nodes: &[f64], out: &mut [f64]) {
    for e in 0..out.len() {
        out[e] = (t_nodes[e + 1] - t_nodes[e]) / (z_nodes[e + 1] - z_nodes[e]);
    }
}

/// Geometry of one strip as seen by the weak form.
#[derive(Debug, Clone, Copy)]
pub struct StripGeometry<'a> {
    /// Node coordinates (m), length M+1.
    pub z_nodes: &'a [f64],
    /// Centerline radius of the turn (m).
    pub radius: f64,
}

/// Weak-form residual at the free nodes `1..=M`.
///
/// * `t_nodes` — full nodal T including the pinned first node, length M+1
/// * `jc_elems` — critical current density per element
/// * `dbr_dt` — `∂B_r/∂t` at the element quadrature points
/// * `da_dt_edge` — `∂A_φ/∂t` at the upper-edge node
/// * `voltage` — voltage drop `U` across this turn-tape
///
/// With the boundary condition folded in, a zero residual is the discrete
/// statement of `∂E/∂z = ∂B_r/∂t` plus `E(b) = −∂A_φ/∂t + U/(2πr)`.
#[allow(clippy::too_many_arguments)]
pub fn strip_residual(
    t_nodes: &[f64],
    jc_elems: &[f64],
    dbr_dt: &[f64],
    da_dt_edge: f64,
    voltage: f64,
    geom: &StripGeometry,
    mat: &MaterialParams,
    out: &mut [f64],
) {
    let m = t_nodes.len() - 1;
    debug_assert_eq!(out.len(), m);
    debug_assert_eq!(jc_elems.len(), m);
    debug_assert_eq!(dbr_dt.len(), m);

    let mut e_prev = 0.0;
    for e in 0..m {
        let dz = geom.z_nodes[e + 1] - geom.z_nodes[e];
        let j = (t_nodes[e + 1] - t_nodes[e]) / dz;
        let e_here = ej_power_law(j, jc_elems[e], mat);
        let half_rate = 0.5 * dz * dbr_dt[e];
        if e > 0 {
            // Row for node e: E_{e-1} − E_e + rate halves from both sides.
            out[e - 1] = e_prev - e_here + out[e - 1] + half_rate;
        }
        // Seed the row for node e+1 with this element's contributions.
        out[e] = half_rate;
        e_prev = e_here;
    }
    // Upper edge row: interior part plus the boundary electric field.
    let e_b = -da_dt_edge + voltage / (2.0 * std::f64::consts::PI * geom.radius);
    out[m - 1] += e_prev - e_b;
}

/// Per-element slopes `g_e = (dE/dJ)_e / Δz_e` of the E-part of
/// [`strip_residual`].
///
/// The caller assembles the tridiagonal local Jacobian from them:
/// interior row `n` gets `g_{n-1} + g_n` on the diagonal and `−g_{n-1}`,
/// `−g_n` on the neighbors; the edge row keeps only its left element.
pub fn element_conductances(
    t_nodes: &[f64],
    jc_elems: &[f64],
    z_nodes: &[f64],
    mat: &MaterialParams,
    out: &mut [f64],
) {
    for e in 0..out.len() {
        let dz = z_nodes[e + 1] - z_nodes[e];
        let j = (t_nodes[e + 1] - t_nodes[e]) / dz;
        out[e] = dej_dj(j, jc_elems[e], mat) / dz;
    }
}
