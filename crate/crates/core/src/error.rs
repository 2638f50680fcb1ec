use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("density matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unphysical Bloch vector (norm {norm})")]
    UnphysicalBloch { norm: f64 },

    #[error("{name} = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unphysical Bell-diagonal vector: eigenvalue {label} = {value:e} is negative")]
    UnphysicalBellDiagonal { label: &'static str, value: f64 },

    #[error("invalid polarization weights ({ax}, {ay}, {az}): {reason}")]
    Polarization {
        ax: f64,
        ay: f64,
        az: f64,
        reason: &'static str,
    },

    #[error("effective decay rate {0:e} is negative")]
    NegativeRate(f64),

    #[error("Kossakowski matrix is not positive: A = {a}, |B| = {b_abs}")]
    NotCompletelyPositive { a: f64, b_abs: f64 },

    #[error("integration unstable at step {step:e} ({detail}); try step <= {suggested:e}")]
    Instability {
        step: f64,
        suggested: f64,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
