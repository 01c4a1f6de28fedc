//! Magnetic coupling kernels for axisymmetric circular filaments.
//!
//! The magnetostatic problem is linear, so the field anywhere is a fixed
//! linear map applied to the element currents. This module builds those maps
//! once per mesh from the exact open-boundary loop solutions (complete
//! elliptic integrals), removing any need for an air mesh:
//!
//! * `a_map`   — A_φ at element centroids   (V·s/m per A)
//! * `br_map`  — B_r at element centroids   (T per A)
//! * `bz_map`  — B_z at element centroids   (T per A)
//! * `a_edge_map` — A_φ at each strip's outer-edge node, which feeds the
//!   boundary electric field of the strip equation.
//!
//! Self terms are regularized by replacing an element's rectangular
//! cross-section (element width × tape thickness) with an equivalent
//! filament at its geometric-mean distance, the standard thin-strip
//! treatment that keeps diagonals finite and convergent under refinement.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::coil::{TapeMesh, MU_0};
use crate::dense::DenseMat;
use crate::error::{Error, Result};
use crate::math::{ellipe, ellipk};

/// Grover's geometric-mean-distance of a rectangle `a × b` from itself.
pub fn rect_self_gmd(a: f64, b: f64) -> f64 {
    0.2235 * (a + b)
}

/// A_φ of a unit-current circular filament at `(r_src, z_src)` observed at
/// `(r_obs, z_obs)`. Returns `None` for coincident points (use a regularized
/// self term instead).
pub fn loop_potential(r_src: f64, z_src: f64, r_obs: f64, z_obs: f64) -> Option<f64> {
    debug_assert!(r_src > 0.0);
    if r_obs <= 0.0 {
        // A_φ vanishes on the axis by symmetry.
        return Some(0.0);
    }
    let dz = z_obs - z_src;
    let rsum = r_src + r_obs;
    let denom = rsum * rsum + dz * dz;
    let m = 4.0 * r_src * r_obs / denom;
    if m >= 1.0 {
        return None;
    }
    // A_φ = µ0/(2π r_obs) · sqrt(r_src r_obs / m) · [(2 − m) K(m) − 2 E(m)]
    let a = MU_0 / (2.0 * std::f64::consts::PI * r_obs)
        * (r_src * r_obs / m).sqrt()
        * ((2.0 - m) * ellipk(m) - 2.0 * ellipe(m));
    Some(a)
}

/// (B_r, B_z) of a unit-current circular filament; exact off axis, on-axis
/// closed form as the limit.
pub fn loop_field(r_src: f64, z_src: f64, r_obs: f64, z_obs: f64) -> Option<(f64, f64)> {
    debug_assert!(r_src > 0.0);
    let z = z_obs - z_src;
    if r_obs.abs() < 1e-12 * r_src.max(1e-9) {
        let d2 = r_src * r_src + z * z;
        let bz = MU_0 * r_src * r_src / (2.0 * d2 * d2.sqrt());
        return Some((0.0, bz));
    }
    let z2 = z * z;
    let r2 = r_obs * r_obs;
    let rpr = r_src + r_obs;
    let q = rpr * rpr + z2;
    let m = 4.0 * r_src * r_obs / q;
    if m >= 1.0 {
        return None;
    }
    let a0 = 2.0 / q.sqrt();
    let f = ellipk(m);
    let s = ellipe(m) / (1.0 - m);
    let s_over_q = s / q;
    let rs2 = r_src * r_src;
    let hr = (z / r_obs) * a0 * (s_over_q * (rs2 + r2 + z2) - f);
    let hz = a0 * (s_over_q * (rs2 - r2 - z2) + f);
    let c = MU_0 / (4.0 * std::f64::consts::PI);
    Some((c * hr, c * hz))
}

/// Precomputed linear maps from element currents to potentials and fields.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSet {
    /// A_φ at element centroids per unit element current.
    pub a_map: DenseMat,
    /// B_r at element centroids per unit element current.
    pub br_map: DenseMat,
    /// B_z at element centroids per unit element current.
    pub bz_map: DenseMat,
    /// A_φ at each strip's outer-edge node per unit element current.
    pub a_edge_map: DenseMat,
    /// Equivalent self-filament distance per element (m).
    pub self_gmd: Vec<f64>,
    /// Geometry hash of the mesh these kernels belong to.
    pub mesh_hash: u64,
}

/// Assembly options.
#[derive(Debug, Clone, Copy)]
pub struct KernelOptions {
    /// Hard cap on kernel storage, in GiB.
    pub memory_cap_gb: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { memory_cap_gb: 1.0 }
    }
}

/// Estimated kernel storage for `n` elements and `s` strips, in bytes.
pub fn kernel_bytes(n: usize, s: usize) -> usize {
    (3 * n * n + s * n + n) * std::mem::size_of::<f64>()
}

/// Builds the kernel maps for a mesh. Entries are computed independently,
/// so parallel assembly is bitwise order-independent.
pub fn assemble_kernels(mesh: &TapeMesh, opts: &KernelOptions) -> Result<KernelSet> {
    let n = mesh.n_elements;
    let n_strips = mesh.strips.len();
    let needed = kernel_bytes(n, n_strips);
    let cap = (opts.memory_cap_gb * (1u64 << 30) as f64) as usize;
    if needed > cap {
        return Err(Error::KernelMemory {
            elements: n,
            needed_gb: needed as f64 / (1u64 << 30) as f64,
            cap_gb: opts.memory_cap_gb,
        });
    }

    let (r, z, dz) = mesh.element_geometry();
    let d_tape = mesh.spec.tape_thickness;
    let self_gmd: Vec<f64> = dz.iter().map(|&w| rect_self_gmd(w, d_tape)).collect();

    let mut a_map = DenseMat::zeros(n, n);
    a_map.fill_rows(|i, row| {
        for j in 0..n {
            row[j] = if i == j {
                // Equivalent filament axially offset by the element GMD.
                loop_potential(r[j], z[j], r[i], z[i] + self_gmd[i]).unwrap()
            } else {
                loop_potential(r[j], z[j], r[i], z[i]).unwrap()
            };
        }
    });

    let mut br_map = DenseMat::zeros(n, n);
    let mut bz_map = DenseMat::zeros(n, n);
    br_map.fill_rows(|i, row| {
        for j in 0..n {
            row[j] = if i == j {
                // Symmetric cross-section: the element's own radial field
                // averages to zero over itself.
                0.0
            } else {
                loop_field(r[j], z[j], r[i], z[i]).unwrap().0
            };
        }
    });
    bz_map.fill_rows(|i, row| {
        for j in 0..n {
            row[j] = if i == j {
                // Average of the filament field just inside and just outside.
                let g = self_gmd[i];
                let inner = loop_field(r[j], z[j], r[i] - g, z[i]).unwrap().1;
                let outer = loop_field(r[j], z[j], r[i] + g, z[i]).unwrap().1;
                0.5 * (inner + outer)
            } else {
                loop_field(r[j], z[j], r[i], z[i]).unwrap().1
            };
        }
    });

    let edges: Vec<(f64, f64)> = mesh
        .strips
        .iter()
        .map(|s| (s.radius, *s.z_nodes.last().unwrap()))
        .collect();
    let mut a_edge_map = DenseMat::zeros(n_strips, n);
    a_edge_map.fill_rows(|s, row| {
        let (re, ze) = edges[s];
        for j in 0..n {
            row[j] = loop_potential(r[j], z[j], re, ze).unwrap();
        }
    });

    Ok(KernelSet {
        a_map,
        br_map,
        bz_map,
        a_edge_map,
        self_gmd,
        mesh_hash: mesh.geometry_hash(),
    })
}

/// Series-equivalent self-inductance (H) assuming a uniform unit terminal
/// current: each turn carries 1 A shared equally by its parallel tapes and
/// uniformly over each strip width.
pub fn effective_inductance(mesh: &TapeMesh, kernels: &KernelSet) -> f64 {
    let n = mesh.n_elements;
    let (r, _, dz) = mesh.element_geometry();
    let w = mesh.spec.tape_width;
    let p = mesh.spec.n_parallel as f64;
    let u: Vec<f64> = dz.iter().map(|&d| d / (w * p)).collect();
    let mut l = 0.0;
    for i in 0..n {
        let row = kernels.a_map.row(i);
        let two_pi_r = 2.0 * std::f64::consts::PI * r[i];
        let mut acc = 0.0;
        for j in 0..n {
            acc += row[j] * u[j];
        }
        l += two_pi_r * u[i] * acc;
    }
    l
}

/// Magnetic field energy (J) of an element-current pattern.
pub fn field_energy(mesh: &TapeMesh, kernels: &KernelSet, currents: &[f64]) -> f64 {
    let (r, _, _) = mesh.element_geometry();
    let a = kernels.a_map.matvec(currents);
    0.5 * currents
        .iter()
        .zip(a.iter())
        .zip(r.iter())
        .map(|((&i, &ai), &ri)| 2.0 * std::f64::consts::PI * ri * ai * i)
        .sum::<f64>()
}

/// Direct filament summation of (B_r, B_z) at arbitrary probe points.
pub fn field_at(mesh: &TapeMesh, currents: &[f64], points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (r, z, _) = mesh.element_geometry();
    points
        .iter()
        .map(|&(rp, zp)| {
            let mut br = 0.0;
            let mut bz = 0.0;
            for j in 0..mesh.n_elements {
                if let Some((fr, fz)) = loop_field(r[j], z[j], rp, zp) {
                    br += fr * currents[j];
                    bz += fz * currents[j];
                }
            }
            (br, bz)
        })
        .collect()
}

const CACHE_MAGIC: &[u8; 8] = b"PWNIKRN1";

/// Writes a kernel cache file: magic, mesh hash, dimensions, then all maps
/// as row-major little-endian f64.
pub fn write_cache(path: &Path, k: &KernelSet) -> Result<()> {
    let mut buf = Vec::with_capacity(64 + 8 * (3 * k.a_map.data.len()));
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&k.mesh_hash.to_le_bytes());
    buf.extend_from_slice(&(k.a_map.rows as u64).to_le_bytes());
    buf.extend_from_slice(&(k.a_edge_map.rows as u64).to_le_bytes());
    for m in [&k.a_map, &k.br_map, &k.bz_map, &k.a_edge_map] {
        for v in &m.data {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    for v in &k.self_gmd {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a kernel cache if it matches `expected_hash`.
pub fn read_cache(path: &Path, expected_hash: u64) -> Option<KernelSet> {
    let mut buf = Vec::new();
    fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
    if buf.len() < 32 || &buf[0..8] != CACHE_MAGIC {
        return None;
    }
    let hash = u64::from_le_bytes(buf[8..16].try_into().unwrap());
    if hash != expected_hash {
        return None;
    }
    let n = u64::from_le_bytes(buf[16..24].try_into().unwrap()) as usize;
    let s = u64::from_le_bytes(buf[24..32].try_into().unwrap()) as usize;
    let expected_len = 32 + 8 * (3 * n * n + s * n + n);
    if buf.len() != expected_len {
        return None;
    }
    let mut off = 32;
    let mut take = |count: usize| -> Vec<f64> {
        let mut v = Vec::with_capacity(count);
        for _ in 0..count {
            v.push(f64::from_le_bytes(buf[off..off + 8].try_into().unwrap()));
            off += 8;
        }
        v
    };
    let a = take(n * n);
    let br = take(n * n);
    let bz = take(n * n);
    let edge = take(s * n);
    let gmd = take(n);
    Some(KernelSet {
        a_map: DenseMat { rows: n, cols: n, data: a },
        br_map: DenseMat { rows: n, cols: n, data: br },
        bz_map: DenseMat { rows: n, cols: n, data: bz },
        a_edge_map: DenseMat { rows: s, cols: n, data: edge },
        self_gmd: gmd,
        mesh_hash: expected_hash,
    })
}

/// Cache-aware assembly: looks in `cache_dir` (typically from the
/// `PWNI_KERNEL_CACHE` environment variable) before computing.
pub fn assemble_kernels_cached(
    mesh: &TapeMesh,
    opts: &KernelOptions,
    cache_dir: Option<&Path>,
) -> Result<KernelSet> {
    let hash = mesh.geometry_hash();
    let path: Option<PathBuf> = cache_dir.map(|d| d.join(format!("{hash:016x}.kern")));
    if let Some(p) = &path {
        if let Some(k) = read_cache(p, hash) {
            return Ok(k);
        }
    }
    let k = assemble_kernels(mesh, opts)?;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            let _ = fs::create_dir_all(dir);
        }
        let _ = write_cache(p, &k);
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coil::{build_mesh, CoilSpec, JointResistances, MaterialParams};
    use crate::presets;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn single_loop_spec(radius: f64) -> CoilSpec {
        CoilSpec {
            n_parallel: 1,
            n_turns: 1,
            inner_radius: radius - 0.5 * 0.095e-3,
            tape_width: 4.0e-3,
            tape_thickness: 0.095e-3,
            radial_pitch: 0.095e-3,
            material: MaterialParams::from_tape_ic(100.0, 4.0e-3, 0.095e-3),
            joints: JointResistances { input: vec![0.0], output: vec![0.0], closed_loop_delta: 0.0 },
            contact_resistivity: f64::INFINITY,
            axial_center: 0.0,
        }
    }

    #[test]
    fn potential_vanishes_on_axis() {
        assert_abs_diff_eq!(loop_potential(0.05, 0.0, 0.0, 0.1).unwrap(), 0.0);
        // And decays smoothly approaching the axis.
        let a = loop_potential(0.05, 0.0, 1e-6, 0.0).unwrap();
        assert!(a.abs() < 1e-10, "{a}");
    }

    #[test]
    fn center_field_of_single_loop() {
        // B_z = µ0 I / (2a) at the center of a loop of radius a.
        let (br, bz) = loop_field(0.05, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(br, 0.0);
        assert_relative_eq!(bz, 1.2566e-5, max_relative = 1e-4);
        // Derived through the assembled kernel as well.
        let mesh = build_mesh(single_loop_spec(0.05), 8).unwrap();
        let pts = field_at(&mesh, &vec![1.0 / 8.0; 8], &[(0.0, 0.0)]);
        assert_relative_eq!(pts[0].1, MU_0 / (2.0 * 0.05), max_relative = 1e-3);
    }

    #[test]
    fn reciprocity_of_potential() {
        // 2πr_src · A(obs→src) = 2πr_obs · A(src→obs)
        let (r1, z1, r2, z2) = (0.04, 0.001, 0.07, -0.02);
        let a12 = loop_potential(r1, z1, r2, z2).unwrap();
        let a21 = loop_potential(r2, z2, r1, z1).unwrap();
        assert_relative_eq!(r2 * a12, r1 * a21, max_relative = 1e-13);
    }

    #[test]
    fn a_map_weighted_symmetry() {
        let mut spec = presets::dual_tape_30();
        spec.n_turns = 3;
        let mesh = build_mesh(spec, 4).unwrap();
        let k = assemble_kernels(&mesh, &KernelOptions::default()).unwrap();
        let (r, _, _) = mesh.element_geometry();
        for i in 0..mesh.n_elements {
            for j in 0..mesh.n_elements {
                let lhs = r[i] * k.a_map.get(i, j);
                let rhs = r[j] * k.a_map.get(j, i);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-300);
            }
        }
    }

    #[test]
    fn mirror_pair_cancels_radial_field_at_midplane() {
        let h = 0.01;
        let up = loop_field(0.05, h, 0.04, 0.0).unwrap();
        let dn = loop_field(0.05, -h, 0.04, 0.0).unwrap();
        assert_abs_diff_eq!(up.0 + dn.0, 0.0, epsilon = 1e-18);
        assert_relative_eq!(up.1, dn.1, max_relative = 1e-13);
    }

    #[test]
    fn single_element_self_terms_finite() {
        let spec = single_loop_spec(0.05);
        let mut cfg = spec.clone();
        cfg.tape_width = 2.0e-3;
        let counts = vec![2usize];
        let mesh = crate::coil::build_mesh_graded(cfg, &counts).unwrap();
        let k = assemble_kernels(&mesh, &KernelOptions::default()).unwrap();
        for i in 0..2 {
            assert!(k.a_map.get(i, i).is_finite() && k.a_map.get(i, i) > 0.0);
            assert!(k.br_map.get(i, i).is_finite());
            assert!(k.bz_map.get(i, i).is_finite());
        }
    }

    #[test]
    fn center_field_matches_brute_force_filament_sum() {
        // 150-turn winding with 1 A per element-share such that each turn
        // pair carries 100 A; compare the kernel path against a fine
        // brute-force subdivision of every element.
        let mut spec = presets::dual_tape_150();
        spec.n_turns = 20; // trimmed for test time; same construction
        let mesh = build_mesh(spec, 6).unwrap();
        let per_elem = 50.0 / 6.0; // 50 A per tape, uniform
        let currents = vec![per_elem; mesh.n_elements];
        let kernel_bz = field_at(&mesh, &currents, &[(0.0, 0.0)])[0].1;

        // Brute force: subdivide each element into 20 sub-filaments.
        let (r, z, dz) = mesh.element_geometry();
        let mut bz_ref = 0.0;
        for e in 0..mesh.n_elements {
            let sub = 20;
            for s in 0..sub {
                let zs = z[e] + dz[e] * ((s as f64 + 0.5) / sub as f64 - 0.5);
                bz_ref += loop_field(r[e], zs, 0.0, 0.0).unwrap().1 * currents[e] / sub as f64;
            }
        }
        assert_relative_eq!(kernel_bz, bz_ref, max_relative = 1e-3);
    }

    #[test]
    fn effective_inductance_reference_coils() {
        let mesh = build_mesh(presets::dual_tape_30(), 12).unwrap();
        let k = assemble_kernels(&mesh, &KernelOptions::default()).unwrap();
        let l = effective_inductance(&mesh, &k);
        assert_relative_eq!(l, 193e-6, max_relative = 0.10);

        let mesh2 = build_mesh(presets::three_tape_32(), 8).unwrap();
        let k2 = assemble_kernels(&mesh2, &KernelOptions::default()).unwrap();
        let l2 = effective_inductance(&mesh2, &k2);
        assert_relative_eq!(l2, 136e-6, max_relative = 0.10);
    }

    #[test]
    fn single_loop_inductance_matches_textbook_formula() {
        let a = 0.05;
        let spec = single_loop_spec(a);
        let mesh = build_mesh(spec, 24).unwrap();
        let k = assemble_kernels(&mesh, &KernelOptions::default()).unwrap();
        let l = effective_inductance(&mesh, &k);
        let r0 = rect_self_gmd(4.0e-3, 0.095e-3);
        let l_ref = MU_0 * a * ((8.0 * a / r0).ln() - 2.0);
        assert_relative_eq!(l, l_ref, max_relative = 0.02);
    }

    #[test]
    fn memory_cap_triggers() {
        let spec = presets::dual_tape_150();
        let mesh = build_mesh(spec, 40).unwrap();
        let err = assemble_kernels(&mesh, &KernelOptions { memory_cap_gb: 1.0 }).unwrap_err();
        assert!(err.to_string().contains("enable multi-scale"), "{err}");
    }

    #[test]
    fn divergence_of_b_vanishes_at_probes() {
        // (1/r)·∂(r B_r)/∂r + ∂B_z/∂z = 0 checked with central differences.
        let mut spec = presets::dual_tape_30();
        spec.n_turns = 4;
        let mesh = build_mesh(spec, 6).unwrap();
        let currents: Vec<f64> = (0..mesh.n_elements).map(|e| 1.0 + 0.1 * e as f64).collect();
        let h = 1e-4;
        for &(rp, zp) in &[(0.02, 0.0), (0.035, 0.003), (0.06, -0.004), (0.045, 0.01)] {
            let pts = [(rp + h, zp), (rp - h, zp), (rp, zp + h), (rp, zp - h)];
            let f = field_at(&mesh, &currents, &pts);
            let d_rbr_dr = ((rp + h) * f[0].0 - (rp - h) * f[1].0) / (2.0 * h);
            let r_dbz_dz = rp * (f[2].1 - f[3].1) / (2.0 * h);
            let scale = d_rbr_dr.abs().max(r_dbz_dz.abs()).max(1e-12);
            assert!(
                (d_rbr_dr + r_dbz_dz).abs() <= 1e-3 * scale,
                "divergence residual {:.3e} vs scale {:.3e} at ({rp}, {zp})",
                d_rbr_dr + r_dbz_dz,
                scale
            );
        }
    }

    #[test]
    fn kernel_cache_roundtrip() {
        let mut spec = presets::dual_tape_30();
        spec.n_turns = 2;
        let mesh = build_mesh(spec, 3).unwrap();
        let k = assemble_kernels(&mesh, &KernelOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.kern");
        write_cache(&path, &k).unwrap();
        let k2 = read_cache(&path, k.mesh_hash).unwrap();
        assert_eq!(k, k2);
        assert!(read_cache(&path, k.mesh_hash ^ 1).is_none());
    }
}
