use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,

    #[error("logarithm of an interval touching zero")]
    LogOfIntervalTouchingZero,

    #[error("square root of a negative interval")]
    SqrtOfNegative,

    #[error("value undecided at the precision cap of {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("continued fraction too short: {0}")]
    InsufficientExpansion(String),

    #[error("height of zero is undefined")]
    ZeroInput,

    #[error("no finite fixpoint below {limit} for the index inequality")]
    NoFixpoint { limit: String },

    #[error("epsilon stayed non-positive over {attempts} convergent denominators")]
    EpsilonNeverPositive { attempts: usize },

    #[error("tau is rational; the reduction needs an irrational tau")]
    RationalTau,

    #[error(
        "reduced bound n <= {bound} for {kind} in base {base} does not beat the assumption n > {threshold}"
    )]
    ReductionInsufficient {
        kind: String,
        base: u32,
        bound: u64,
        threshold: u64,
    },

    #[error("solution {0} lies outside the reduced search box")]
    BoxViolation(String),

    #[error("base {0} outside 2..=10")]
    InvalidBase(u32),

    #[error("invalid repdigit concatenation: {0}")]
    InvalidRepdigit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{context}: {source}")]
    Instance {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Errors that can disappear when the same evaluation is retried at a
    /// higher working precision.
    pub(crate) fn is_refinable(&self) -> bool {
        matches!(
            self,
            Error::DivisionByIntervalContainingZero
                | Error::LogOfIntervalTouchingZero
                | Error::SqrtOfNegative
        )
    }

    pub(crate) fn within(self, context: impl Into<String>) -> Error {
        Error::Instance {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
