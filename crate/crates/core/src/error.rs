use thiserror::Error;

/// Errors raised by the linear-algebra kernel, measurement validation and
/// the conversion protocol.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonHermitian: max |m - m^dagger| = {deviation:e}")]
    NonHermitian { deviation: f64 },

    #[error("NoConvergence: Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("NotSquare: matrix is {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("NonFinite: matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("NotPSD: operator {index:?} has eigenvalue {eigenvalue:e}")]
    NotPsd {
        index: Option<usize>,
        eigenvalue: f64,
    },

    #[error("NotDistribution: {0}")]
    NotDistribution(String),

    #[error("NotDensity: {0}")]
    NotDensity(String),

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("BadSubsystemIndex: {0}")]
    BadSubsystemIndex(usize),

    #[error("Empty: at least one operator is required")]
    Empty,

    #[error("NotComplete: ||sum - I|| = {residual:e}")]
    NotComplete { residual: f64 },

    #[error("NotIdempotent: projector {0}")]
    NotIdempotent(usize),

    #[error("NotOrthogonal: projectors {0} and {1}")]
    NotOrthogonal(usize, usize),

    #[error("NotRankOne: effect {0}")]
    NotRankOne(usize),

    #[error("CompletionFailure: {0}")]
    CompletionFailure(String),

    #[error("NotPrime: {0}")]
    NotPrime(usize),

    #[error("NotFourierFamily: POVM differs from the Fourier family by {deviation:e}")]
    NotFourierFamily { deviation: f64 },

    #[error("NotAncillaStructured: extension has no ancilla tensor factor")]
    NotAncillaStructured,

    #[error("InconsistentExtension: closed form {direct} vs embedded {embedded}")]
    InconsistentExtension { direct: f64, embedded: f64 },

    #[error("TargetTooSmall: target dimension {target} < number of outcomes {outcomes}")]
    TargetTooSmall { target: usize, outcomes: usize },

    #[error("SandwichViolation: lower {lower}, value {value}, upper {upper}")]
    SandwichViolation { lower: f64, value: f64, upper: f64 },

    #[error("Format: {0}")]
    Format(String),
}

impl Error {
    /// Whether the failure is numerical (as opposed to bad input).
    ///
    /// The CLI maps numerical failures to exit code 2 and everything else to 1.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::CompletionFailure(_)
                | Error::InconsistentExtension { .. }
                | Error::SandwichViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
