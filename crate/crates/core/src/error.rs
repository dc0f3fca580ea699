use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different sample spaces")]
    MismatchedSpace,

    #[error("invalid sample space: {0}")]
    InvalidSampleSpace(String),

    #[error("unknown history `{0}`")]
    UnknownHistory(String),

    #[error("{what} exceeds cap: {size} > {cap} (override with {flag})")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
        flag: &'static str,
    },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid decoherence functional: {0}")]
    InvalidDecoherence(String),

    #[error("decoherence functional gives a non-real value on event {0}")]
    NonRealDiagonal(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("the dual of the empty event is disabled (enable include-empty-dual)")]
    EmptyEventDual,

    #[error("coevent is not multiplicative")]
    NotMultiplicative,

    #[error("coevent is the zero map")]
    ZeroCoevent,

    #[error("coevent is not a member of the coevent space")]
    NotInSpace,

    #[error("coevent space has no dual order: every member must be a nonzero multiplicative coevent")]
    NoDualOrder,

    #[error("heyting implication requires an upper-mode completion")]
    NotUpperMode,

    #[error("valuation event is not a member of the completion")]
    NotInCompletion,

    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("invalid varying set: {0}")]
    InvalidVaryingSet(String),

    #[error("selection is not a subobject: fails monotonicity between {0} and {1}")]
    NotASubobject(String, String),

    #[error("{0} is not comparable above {1}")]
    NotAbove(String, String),

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
