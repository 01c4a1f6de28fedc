//! Inter-tape potential chain: the bookkeeping that embeds current sharing
//! and radial bypass into the field solve without an external circuit model.
//!
//! Along the winding, the potential difference between radially adjacent
//! tapes at the end of each turn obeys a recursion in the per-turn voltage
//! drops. Those differences drive the intra-turn and inter-turn radial
//! currents through the contact resistance, and current continuity at every
//! tape-turn closes the system. For `p` parallel tapes there is one chain
//! per adjacent pair; the layout reduces to the familiar dual-tape equations
//! at `p = 2` and degenerates gracefully to a plain no-insulation coil at
//! `p = 1`.
//!
//! Every quantity here is an [`Affine`] scalar — a value plus its exact
//! gradient over the global solver unknowns — so the constraint rows land in
//! the Jacobian without hand-derived derivatives.

/// A scalar with a sparse gradient over the global unknown vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub value: f64,
    /// `(unknown index, ∂value/∂unknown)`, sorted by index.
    pub grad: Vec<(usize, f64)>,
}

impl Affine {
    pub fn constant(value: f64) -> Self {
        Affine { value, grad: Vec::new() }
    }

    pub fn var(value: f64, index: usize) -> Self {
        Affine { value, grad: vec![(index, 1.0)] }
    }

    pub fn zero() -> Self {
        Affine::constant(0.0)
    }

    /// `self += c · other`
    pub fn axpy(&mut self, c: f64, other: &Affine) {
        if c == 0.0 {
            return;
        }
        self.value += c * other.value;
        if other.grad.is_empty() {
            return;
        }
        let mut merged = Vec::with_capacity(self.grad.len() + other.grad.len());
        let (mut a, mut b) = (0, 0);
        while a < self.grad.len() || b < other.grad.len() {
            match (self.grad.get(a), other.grad.get(b)) {
                (Some(&(ia, va)), Some(&(ib, vb))) => {
                    if ia == ib {
                        merged.push((ia, va + c * vb));
                        a += 1;
                        b += 1;
                    } else if ia < ib {
                        merged.push((ia, va));
                        a += 1;
                    } else {
                        merged.push((ib, c * vb));
                        b += 1;
                    }
                }
                (Some(&(ia, va)), None) => {
                    merged.push((ia, va));
                    a += 1;
                }
                (None, Some(&(ib, vb))) => {
                    merged.push((ib, c * vb));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.grad = merged;
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn scale(&self, c: f64) -> Affine {
        Affine {
            value: c * self.value,
            grad: self.grad.iter().map(|&(i, v)| (i, c * v)).collect(),
        }
    }
}

/// Number of global scalar unknowns beyond the nodal field variables:
/// one voltage per (analyzed) tape-turn, `p − 1` inlet splits, and the
/// total coil current.
pub fn global_scalar_count(n_parallel: usize, n_voltage_turns: usize) -> usize {
    n_parallel * n_voltage_turns + (n_parallel - 1) + 1
}

/// Contact resistances of the winding per the area form
/// `R = ρ_ct / (2π r w)`, `r` being the inner layer of each interface.
#[derive(Debug, Clone)]
pub struct ContactLadder {
    /// `[pair k][turn t]`: interface between tape `k` and `k+1` inside turn `t`.
    pub r_tt: Vec<Vec<f64>>,
    /// `[turn t]`: interface between tape `p−1` of turn `t` and tape 0 of `t+1`.
    pub r_turn: Vec<f64>,
    pub insulated: bool,
}

impl ContactLadder {
    pub fn from_mesh(mesh: &crate::coil::TapeMesh) -> Self {
        let spec = &mesh.spec;
        let p = spec.n_parallel;
        let n = spec.n_turns;
        let w = spec.tape_width;
        let rho = spec.contact_resistivity;
        let insulated = spec.insulated();
        let area_r = |radius: f64| rho / (2.0 * std::f64::consts::PI * radius * w);
        let r_tt = (0..p.saturating_sub(1))
            .map(|k| (0..n).map(|t| area_r(spec.layer_radius(t, k))).collect())
            .collect();
        let r_turn = (0..n.saturating_sub(1))
            .map(|t| area_r(spec.layer_radius(t, p - 1)))
            .collect();
        ContactLadder { r_tt, r_turn, insulated }
    }

    /// Series sum of all interface resistances: the coil's equivalent
    /// radial ladder resistance.
    pub fn ladder_resistance(&self) -> f64 {
        self.r_tt.iter().flatten().sum::<f64>() + self.r_turn.iter().sum::<f64>()
    }
}

/// Inlet potential difference of pair `k`:
/// `ΔV₀ = I_in[k+1]·R_in[k+1] − I_in[k]·R_in[k]`.
pub fn inlet_dv(i_in: &[Affine], r_in: &[f64], k: usize) -> Affine {
    let mut dv = Affine::zero();
    dv.axpy(r_in[k + 1], &i_in[k + 1]);
    dv.axpy(-r_in[k], &i_in[k]);
    dv
}

/// Potential-difference chain of pair `k` over all turns:
/// `ΔV_i = ΔV_{i−1} − (U_{k,i} − U_{k+1,i})`. Returns `N + 1` entries
/// starting with `ΔV₀`.
pub fn dv_chain(dv0: Affine, u_upper: &[Affine], u_lower: &[Affine]) -> Vec<Affine> {
    let n = u_upper.len();
    let mut dv = Vec::with_capacity(n + 1);
    dv.push(dv0);
    for t in 0..n {
        let mut next = dv[t].clone();
        next.axpy(-1.0, &u_upper[t]);
        next.axpy(1.0, &u_lower[t]);
        dv.push(next);
    }
    dv
}

/// Intra-turn drive voltages of one pair: `ΔV_tt,i = ½(ΔV_i + ΔV_{i−1})`.
pub fn intra_turn_drives(dv: &[Affine]) -> Vec<Affine> {
    (0..dv.len() - 1)
        .map(|t| {
            let mut v = dv[t].scale(0.5);
            v.axpy(0.5, &dv[t + 1]);
            v
        })
        .collect()
}

/// Inter-turn drive voltages across turn boundaries:
/// `ΔV_turn,i = −D_i + ½(U_{first,i+1} + U_{last,i})`, where `D_i` is the
/// stacked potential difference between the innermost and outermost tape
/// (the sum of all pair chains; zero for a single tape).
pub fn inter_turn_drives(
    chains: &[Vec<Affine>],
    u_first: &[Affine],
    u_last: &[Affine],
) -> Vec<Affine> {
    let n = u_first.len();
    (0..n - 1)
        .map(|t| {
            let mut v = Affine::zero();
            for chain in chains {
                v.axpy(-1.0, &chain[t + 1]);
            }
            v.axpy(0.5, &u_first[t + 1]);
            v.axpy(0.5, &u_last[t]);
            v
        })
        .collect()
}

/// Radial currents from drive voltages; identically zero for an insulated
/// winding.
pub fn radial_currents(
    ladder: &ContactLadder,
    dv_tt: &[Vec<Affine>],
    dv_turn: &[Affine],
) -> (Vec<Vec<Affine>>, Vec<Affine>) {
    if ladder.insulated {
        let i_tt = dv_tt
            .iter()
            .map(|per_turn| per_turn.iter().map(|_| Affine::zero()).collect())
            .collect();
        let i_turn = dv_turn.iter().map(|_| Affine::zero()).collect();
        return (i_tt, i_turn);
    }
    let i_tt = dv_tt
        .iter()
        .enumerate()
        .map(|(k, per_turn)| {
            per_turn
                .iter()
                .enumerate()
                .map(|(t, v)| v.scale(1.0 / ladder.r_tt[k][t]))
                .collect()
        })
        .collect();
    let i_turn = dv_turn
        .iter()
        .enumerate()
        .map(|(t, v)| v.scale(1.0 / ladder.r_turn[t]))
        .collect();
    (i_tt, i_turn)
}

/// Current-continuity residual for tape `k` of turn `t` (0-based):
/// everything flowing in minus everything flowing out.
///
/// Inflow: the tape's own azimuthal current from the previous turn (the
/// inlet split at turn 0), the intra-turn current arriving from the tape
/// just inside, and — for the innermost tape — the inter-turn current from
/// the previous turn's outermost tape. Outflow: this turn's azimuthal
/// current, the intra-turn current leaving outward, and — for the outermost
/// tape before the last turn — the inter-turn current onward.
#[allow(clippy::too_many_arguments)]
pub fn node_row(
    k: usize,
    t: usize,
    n_parallel: usize,
    n_turns: usize,
    i_az: &[Vec<Affine>],
    i_in: &[Affine],
    i_tt: &[Vec<Affine>],
    i_turn: &[Affine],
) -> Affine {
    let mut row = Affine::zero();
    if t == 0 {
        row.axpy(1.0, &i_in[k]);
    } else {
        row.axpy(1.0, &i_az[k][t - 1]);
        if k == 0 {
            row.axpy(1.0, &i_turn[t - 1]);
        }
    }
    if k > 0 {
        row.axpy(1.0, &i_tt[k - 1][t]);
    }
    row.axpy(-1.0, &i_az[k][t]);
    if k + 1 < n_parallel {
        row.axpy(-1.0, &i_tt[k][t]);
    }
    if k + 1 == n_parallel && t + 1 < n_turns {
        row.axpy(-1.0, &i_turn[t]);
    }
    row
}

/// Output closure of pair `k`:
/// `ΔV_N − (I_{k,N}·R_out[k] − I_{k+1,N}·R_out[k+1]) = 0`.
pub fn closure_row(
    k: usize,
    chains: &[Vec<Affine>],
    i_az_last: &[Affine],
    r_out: &[f64],
) -> Affine {
    let mut row = chains[k].last().unwrap().clone();
    row.axpy(-r_out[k], &i_az_last[k]);
    row.axpy(r_out[k + 1], &i_az_last[k + 1]);
    row
}
