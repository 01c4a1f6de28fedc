//! Reference coil definitions used by the bundled configurations, the test
//! suite, and the guide examples.
//!
//! All three windings share 4 mm × 0.095 mm REBCO tape wound with no
//! inter-layer gap, so the layer pitch equals the tape thickness.

use crate::coil::{CoilSpec, JointResistances, MaterialParams};

const TAPE_WIDTH: f64 = 4.0e-3;
const TAPE_THICKNESS: f64 = 0.095e-3;

/// 30-turn dual-tape coil, 100 mm ID: coil-level critical current 169 A,
/// 193 µH inductance, 184 µΩ equivalent radial ladder resistance
/// (contact resistivity backed out of that ladder value).
pub fn dual_tape_30() -> CoilSpec {
    CoilSpec {
        n_parallel: 2,
        n_turns: 30,
        inner_radius: 0.050,
        tape_width: TAPE_WIDTH,
        tape_thickness: TAPE_THICKNESS,
        radial_pitch: TAPE_THICKNESS,
        material: MaterialParams::from_tape_ic(84.5, TAPE_WIDTH, TAPE_THICKNESS),
        joints: JointResistances {
            input: vec![250e-9, 237e-9],
            output: vec![584e-9, 220e-9],
            closed_loop_delta: 0.0,
        },
        contact_resistivity: 4.1348e-9,
        axial_center: 0.0,
    }
}

/// 32-turn three-tape coil, 70 mm ID: coil-level critical current 258 A,
/// 136 µH, 859 µΩ radial ladder.
pub fn three_tape_32() -> CoilSpec {
    CoilSpec {
        n_parallel: 3,
        n_turns: 32,
        inner_radius: 0.035,
        tape_width: TAPE_WIDTH,
        tape_thickness: TAPE_THICKNESS,
        radial_pitch: TAPE_THICKNESS,
        material: MaterialParams::from_tape_ic(86.0, TAPE_WIDTH, TAPE_THICKNESS),
        joints: JointResistances {
            input: vec![5.67e-6, 5.39e-6, 5.31e-6],
            output: vec![5.04e-6, 4.93e-6, 5.22e-6],
            closed_loop_delta: 0.0,
        },
        contact_resistivity: 8.9402e-9,
        axial_center: 0.0,
    }
}

/// 150-turn dual-tape coil, 60 mm ID: per-tape critical current 233 A,
/// contact resistivity 50 µΩ·cm², all joints 300 nΩ.
pub fn dual_tape_150() -> CoilSpec {
    CoilSpec {
        n_parallel: 2,
        n_turns: 150,
        inner_radius: 0.030,
        tape_width: TAPE_WIDTH,
        tape_thickness: TAPE_THICKNESS,
        radial_pitch: TAPE_THICKNESS,
        material: MaterialParams::from_tape_ic(233.0, TAPE_WIDTH, TAPE_THICKNESS),
        joints: JointResistances {
            input: vec![300e-9, 300e-9],
            output: vec![300e-9, 300e-9],
            closed_loop_delta: 0.0,
        },
        contact_resistivity: 50.0e-10,
        axial_center: 0.0,
    }
}

/// 30-turn variant of [`dual_tape_150`] used by the closed-loop demos:
/// joints 300 nΩ while driven, 20 nΩ in closed loop (ΔR = −280 nΩ).
pub fn dual_tape_decay_30() -> CoilSpec {
    let mut spec = dual_tape_150();
    spec.n_turns = 30;
    spec.joints.closed_loop_delta = -280e-9;
    spec
}
