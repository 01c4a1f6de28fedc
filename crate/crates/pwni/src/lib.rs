//! Transient electromagnetic solver for parallel-wound no-insulation (PW-NI)
//! superconducting pancake coils.
//!
//! The solver couples a 1D thin-strip superconductor equation per tape turn
//! to exact axisymmetric field kernels and a potential-chain recursion that
//! embeds inter-tape current sharing and radial bypass into one monolithic
//! nonlinear system. A multi-scale mode accelerates large windings, and a
//! single global constraint carries simulations continuously from driven
//! charging into closed-loop operation.
//!
//! See the `book/` guide for the concepts and the configuration reference.

pub mod chain;
pub mod coil;
pub mod dense;
pub mod error;
pub mod kernel;
pub mod math;
pub mod multiscale;
pub mod presets;
pub mod scenario;
pub mod strip;

pub use coil::MU_0;
pub use error::{Error, Result};
