use thiserror::Error;

/// Errors raised by the solvers, the simulator and the gate builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Lamb-Dicke parameter must lie strictly inside (0, 1), got {0}")]
    InvalidLambDicke(f64),
    #[error("base Rabi frequency must be finite and positive, got {0}")]
    InvalidRabiBase(f64),
    #[error("phonon index out of supported range: m_lower + k = {0} exceeds {max}", max = crate::coupling::MAX_PHONON)]
    PhononRange(usize),
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Hermitian eigendecomposition failed to converge (dimension {0})")]
    Decomposition(usize),
    #[error("no physical eta for (p, q) = ({p}, {q}): need (q - 0.5)/p in (1/sqrt2, sqrt2) = (0.70711, 1.41421), got {ratio}")]
    NoPhysicalEta { p: u32, q: u32, ratio: f64 },
    #[error("branch infeasible: {0}")]
    Infeasible(String),
    #[error("operator is not {role}: deviation {deviation:e}")]
    NotInRole { role: &'static str, deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
