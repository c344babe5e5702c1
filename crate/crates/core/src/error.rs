use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    GridSize(usize),
    #[error("domain multiple M must be positive, got {0}")]
    DomainMultiple(i64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("integrability exponent must lie in [1, inf], got {0}")]
    Exponent(f64),
    #[error("product needs 2 to 4 factors, got {0}")]
    FactorCount(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "bump tail |phi(L)| / phi(0) = {ratio:.3e} exceeds tolerance {tolerance:.3e}; increase M"
    )]
    TailTolerance { ratio: f64, tolerance: f64 },
    #[error("packet n = {n} at frequency {carrier:.3} does not fit below Nyquist {nyquist:.3}")]
    PacketTooLarge { n: u32, carrier: f64, nyquist: f64 },
    #[error("non-finite value produced at t = {time:.6e}")]
    NonFinite { time: f64 },
    #[error("max |u_x| = {slope:.3e} exceeded blow-up threshold {threshold:.3e} at t = {time:.6e}")]
    BlowUp { time: f64, slope: f64, threshold: f64 },
    #[error("trajectory index {index} out of range 1..={max}")]
    TrajectoryIndex { index: usize, max: usize },
}
