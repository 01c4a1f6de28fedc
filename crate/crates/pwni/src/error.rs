use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A coil specification violated one of its invariants.
    #[error("invalid coil spec: {0}")]
    InvalidSpec(String),

    /// A run configuration could not be parsed or failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// Kernel assembly would exceed the configured memory cap.
    #[error(
        "kernel storage for {elements} elements needs {needed_gb:.2} GiB, cap is {cap_gb:.2} GiB; \
         reduce elements or enable multi-scale"
    )]
    KernelMemory {
        elements: usize,
        needed_gb: f64,
        cap_gb: f64,
    },

    /// The nonlinear solver failed to converge at the minimum time step.
    #[error("Newton iteration failed to converge at t = {time:.6} s with dt = {dt:.3e} s: {detail}")]
    NonConvergence { time: f64, dt: f64, detail: String },

    /// Mismatched array dimensions in an assembly routine.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// File or serialization failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
