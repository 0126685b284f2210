use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("channel probabilities sum to {0}, expected 1")]
    UnnormalizedChannel(f64),

    #[error("malformed Pauli string {0:?}")]
    MalformedPauli(String),

    #[error("{first} and {second} anticommute but must commute")]
    AnticommutingPair { first: String, second: String },

    #[error("logical pair {0} must anticommute")]
    LogicalPairCommutes(usize),

    #[error("stabilizer generators are linearly dependent")]
    DependentStabilizers,

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid distance {distance} for {family}: {reason}")]
    InvalidDistance {
        family: &'static str,
        distance: usize,
        reason: &'static str,
    },

    #[error("code file line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("noise operator acts on the reference register")]
    ReferenceTouched,

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("reduced CSS layout requires {0}")]
    CssReduction(String),

    #[error("state would need up to {required} blocks, above the limit of {limit}")]
    MemoryGuard { required: u128, limit: u64 },

    #[error("eigenvalue {0:e} below the negativity tolerance")]
    NegativeEigenvalue(f64),

    #[error("dense oracle limited to {cap} qubits, requested {requested}")]
    OracleCap { requested: usize, cap: usize },

    #[error("no crossing found in the search window")]
    NoCrossing,

    #[error("curve difference changes sign {} times, near {:?}", .0.len(), .0)]
    MultipleCrossings(Vec<(f64, f64)>),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}
