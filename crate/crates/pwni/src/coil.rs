//! Coil specification and tape-strip discretization.
//!
//! A parallel-wound pancake coil is described by [`CoilSpec`]; [`build_mesh`]
//! turns it into the 1D thin-strip discretization shared by the field kernels
//! and the transient solver. Every tape layer of every turn becomes one strip:
//! a circle of radius `r` carrying a sheet current, meshed along the tape
//! width (the axial direction `z`).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::math::fnv1a64_f64;

/// Vacuum permeability (T·m/A).
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Superconductor material parameters: E–J power law and field-dependent
/// critical current density.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    /// Critical current density at zero field (A/m²).
    pub jc0: f64,
    /// Power-law exponent n (dimensionless, > 1).
    pub n_value: f64,
    /// Characteristic electric field E₀ (V/m).
    pub e0: f64,
    /// Anisotropy factor m applied to the field component parallel to the tape.
    pub kim_m: f64,
    /// Field-dependence exponent α.
    pub kim_alpha: f64,
    /// Scale field B₀ (T).
    pub kim_b0: f64,
}

impl MaterialParams {
    /// Tabulated REBCO defaults; `jc0` derived from a per-tape critical
    /// current `ic` over the tape cross-section `width × thickness`.
    pub fn from_tape_ic(ic: f64, width: f64, thickness: f64) -> Self {
        MaterialParams {
            jc0: ic / (width * thickness),
            n_value: 30.0,
            e0: 1.0e-4,
            kim_m: 0.0605,
            kim_alpha: 0.7580,
            kim_b0: 0.103,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.n_value > 1.0) {
            return Err(Error::InvalidSpec("material.n_value > 1".into()));
        }
        if !(self.e0 > 0.0) {
            return Err(Error::InvalidSpec("material.e0 > 0".into()));
        }
        if !(self.jc0 > 0.0) {
            return Err(Error::InvalidSpec("material.jc0 > 0".into()));
        }
        if !(self.kim_b0 > 0.0) {
            return Err(Error::InvalidSpec("material.kim_b0 > 0".into()));
        }
        if !(self.kim_alpha >= 0.0) {
            return Err(Error::InvalidSpec("material.kim_alpha >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.kim_m) {
            return Err(Error::InvalidSpec("material.kim_m in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Terminal joint resistances, one entry per parallel tape.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointResistances {
    /// Input-side joint resistance per tape (Ω).
    pub input: Vec<f64>,
    /// Output-side joint resistance per tape (Ω).
    pub output: Vec<f64>,
    /// Resistance change ΔR applied to every joint at the closed-loop switch (Ω).
    #[serde(default)]
    pub closed_loop_delta: f64,
}

impl JointResistances {
    /// Input joint of tape `k` at time `t`; `switched` selects the
    /// closed-loop value.
    pub fn input_at(&self, k: usize, switched: bool) -> f64 {
        self.input[k] + if switched { self.closed_loop_delta } else { 0.0 }
    }

    pub fn output_at(&self, k: usize, switched: bool) -> f64 {
        self.output[k] + if switched { self.closed_loop_delta } else { 0.0 }
    }
}

/// Full physical description of a parallel-wound no-insulation pancake coil.
///
/// Lengths are in meters. `contact_resistivity` is the area resistivity of
/// the uninsulated turn-to-turn interface (Ω·m²); `f64::INFINITY` selects an
/// insulated coil with no radial current paths.
#[derive(Debug, Clone, PartialEq)]
pub struct CoilSpec {
    pub n_parallel: usize,
    pub n_turns: usize,
    pub inner_radius: f64,
    pub tape_width: f64,
    pub tape_thickness: f64,
    /// Center-to-center spacing of consecutive tape layers (m).
    pub radial_pitch: f64,
    pub material: MaterialParams,
    pub joints: JointResistances,
    pub contact_resistivity: f64,
    pub axial_center: f64,
}

impl CoilSpec {
    /// Outer radius of the winding pack.
    pub fn outer_radius(&self) -> f64 {
        self.inner_radius + self.n_parallel as f64 * self.n_turns as f64 * self.radial_pitch
    }

    /// Centerline radius of tape layer `tape` (0-based) in turn `turn` (0-based).
    pub fn layer_radius(&self, turn: usize, tape: usize) -> f64 {
        self.inner_radius
            + ((turn * self.n_parallel + tape) as f64 + 0.5) * self.radial_pitch
    }

    pub fn insulated(&self) -> bool {
        self.contact_resistivity.is_infinite()
    }
}

/// Checks every [`CoilSpec`] invariant; returns the spec unchanged on success.
///
/// The error message names the first violated invariant.
pub fn validate_spec(spec: CoilSpec) -> Result<CoilSpec> {
    if spec.n_parallel < 1 {
        return Err(Error::InvalidSpec("n_parallel ≥ 1".into()));
    }
    if spec.n_turns < 1 {
        return Err(Error::InvalidSpec("n_turns ≥ 1".into()));
    }
    for (name, v) in [
        ("inner_radius", spec.inner_radius),
        ("tape_width", spec.tape_width),
        ("tape_thickness", spec.tape_thickness),
        ("radial_pitch", spec.radial_pitch),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidSpec(format!("{name} > 0")));
        }
    }
    if !spec.outer_radius().is_finite() || spec.outer_radius() <= spec.inner_radius {
        return Err(Error::InvalidSpec("outer radius finite and > inner_radius".into()));
    }
    if !(spec.contact_resistivity > 0.0) {
        return Err(Error::InvalidSpec("contact_resistivity > 0 (+inf = insulated)".into()));
    }
    spec.material.validate()?;
    if spec.joints.input.len() != spec.n_parallel {
        return Err(Error::InvalidSpec("joints.input length ≠ n_parallel".into()));
    }
    if spec.joints.output.len() != spec.n_parallel {
        return Err(Error::InvalidSpec("joints.output length ≠ n_parallel".into()));
    }
    if spec.joints.input.iter().chain(spec.joints.output.iter()).any(|&r| r < 0.0) {
        return Err(Error::InvalidSpec("joint resistances ≥ 0".into()));
    }
    Ok(spec)
}

/// One discretized tape strip: a single tape layer of a single turn.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    /// 0-based turn index.
    pub turn: usize,
    /// 0-based tape index within the turn (0 = innermost).
    pub tape: usize,
    /// Centerline radius of this layer (m).
    pub radius: f64,
    /// Node axial coordinates, strictly increasing, spanning the tape width (m).
    pub z_nodes: Vec<f64>,
    /// Index of this strip's first element in the global element array.
    pub elem_offset: usize,
}

impl Strip {
    pub fn n_elements(&self) -> usize {
        self.z_nodes.len() - 1
    }

    /// Element width `Δz` of element `e`.
    pub fn dz(&self, e: usize) -> f64 {
        self.z_nodes[e + 1] - self.z_nodes[e]
    }

    /// Axial midpoint of element `e`.
    pub fn z_mid(&self, e: usize) -> f64 {
        0.5 * (self.z_nodes[e] + self.z_nodes[e + 1])
    }
}

/// Discretized coil: every tape layer of every turn as a 1D strip.
///
/// Strips are ordered by winding index: turn-major, innermost tape first,
/// so radii are strictly increasing over the strip list.
#[derive(Debug, Clone, PartialEq)]
pub struct TapeMesh {
    pub spec: CoilSpec,
    pub strips: Vec<Strip>,
    pub n_elements: usize,
}

impl TapeMesh {
    /// Strip index for (turn, tape), both 0-based.
    pub fn strip_index(&self, turn: usize, tape: usize) -> usize {
        turn * self.spec.n_parallel + tape
    }

    pub fn strip(&self, turn: usize, tape: usize) -> &Strip {
        &self.strips[self.strip_index(turn, tape)]
    }

    /// Geometry hash used to key kernel caches and snapshot headers.
    pub fn geometry_hash(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325;
        h = fnv1a64_f64(&[self.spec.tape_thickness], h);
        for s in &self.strips {
            h = fnv1a64_f64(&[s.radius], h);
            h = fnv1a64_f64(&s.z_nodes, h);
        }
        h
    }

    /// Radius, axial midpoint and width of every element, flattened in
    /// global element order.
    pub fn element_geometry(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let mut r = Vec::with_capacity(self.n_elements);
        let mut z = Vec::with_capacity(self.n_elements);
        let mut dz = Vec::with_capacity(self.n_elements);
        for s in &self.strips {
            for e in 0..s.n_elements() {
                r.push(s.radius);
                z.push(s.z_mid(e));
                dz.push(s.dz(e));
            }
        }
        (r, z, dz)
    }
}

/// Uniform discretization of every strip with `elements_per_width` elements.
pub fn build_mesh(spec: CoilSpec, elements_per_width: usize) -> Result<TapeMesh> {
    let counts = vec![elements_per_width; spec.n_parallel * spec.n_turns];
    build_mesh_graded(spec, &counts)
}

/// Discretization with a per-strip element count (multi-scale meshes coarsen
/// the strips of non-analyzed turns).
pub fn build_mesh_graded(spec: CoilSpec, elements_per_strip: &[usize]) -> Result<TapeMesh> {
    let spec = validate_spec(spec)?;
    let n_strips = spec.n_parallel * spec.n_turns;
    if elements_per_strip.len() != n_strips {
        return Err(Error::Dimension(format!(
            "elements_per_strip length {} ≠ strip count {}",
            elements_per_strip.len(),
            n_strips
        )));
    }
    if elements_per_strip.iter().any(|&m| m < 2) {
        return Err(Error::InvalidSpec("elements_per_width ≥ 2".into()));
    }
    let a = spec.axial_center - 0.5 * spec.tape_width;
    let mut strips = Vec::with_capacity(n_strips);
    let mut elem_offset = 0;
    for turn in 0..spec.n_turns {
        for tape in 0..spec.n_parallel {
            let m = elements_per_strip[turn * spec.n_parallel + tape];
            let dz = spec.tape_width / m as f64;
            let z_nodes: Vec<f64> = (0..=m).map(|i| a + i as f64 * dz).collect();
            strips.push(Strip {
                turn,
                tape,
                radius: spec.layer_radius(turn, tape),
                z_nodes,
                elem_offset,
            });
            elem_offset += m;
        }
    }
    Ok(TapeMesh { spec, strips, n_elements: elem_offset })
}
