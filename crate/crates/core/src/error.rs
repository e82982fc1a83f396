use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("bipartition must be a nonempty proper subset of the register")]
    EmptyPartition,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("target index {0} used more than once")]
    TargetCollision(usize),
    #[error("controlled gates support 1 or 2 controls, got {0}")]
    UnsupportedControlCount(usize),
    #[error("oracle has no solutions")]
    NoSolutions,
    #[error("search schedule exhausted after {calls} oracle calls")]
    Exhausted { calls: usize },
    #[error("QFT cutoff must be at least 1")]
    BadCutoff,
    #[error("{y} and {q} are not coprime")]
    NotCoprime { y: u64, q: u64 },
    #[error("order of {y} modulo {q} not found")]
    OrderNotFound { y: u64, q: u64 },
    #[error("no factor of {q} found after {attempts} attempts")]
    FactorNotFound { q: u64, attempts: usize },
    #[error("invalid time step: {0}")]
    BadTimeStep(String),
    #[error("spectral gap {gap:e} at t = {t} is degenerate")]
    DegenerateGap { t: f64, gap: f64 },
    #[error("invalid schedule: {0}")]
    BadSchedule(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("photon cutoff too small: population {population:e} at the top level")]
    CutoffTooSmall { population: f64 },
    #[error("Hilbert dimension {dim} exceeds the limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },
    #[error("no admissible solution: {0}")]
    NotFound(String),
    #[error("hop/coupling ratio {ratio} below the required {required}")]
    BadRatio { ratio: f64, required: f64 },
    #[error("flip probability per step {0} exceeds 0.5")]
    BadDensity(f64),
    #[error("every amplitude rounds to zero")]
    AllZero,
    #[error("every amplitude fell below the grain")]
    AllTruncated,
    #[error("state is not in equilibrium with respect to the operator")]
    NotEquilibrium,
    #[error("register of {0} qubits is too large")]
    TooLarge(usize),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
