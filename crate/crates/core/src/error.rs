use alloc::string::String;

/// Errors reported by the engine.
///
/// Precondition failures that callers are expected to handle (sure loss, no
/// invariant dominator, positivity) are kept separate from malformed input so
/// that front ends can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("a possibility space needs at least one outcome")]
    EmptySpace,
    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),
    #[error("operands live on different possibility spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for a space of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("the assessment incurs a sure loss")]
    SureLoss,
    #[error("no invariant coherent prevision dominates the assessment")]
    NoInvariantDominator,
    #[error("the assessment is not weakly invariant under the transformation")]
    NotWeaklyInvariant,
    #[error("the model is not strongly invariant")]
    NotStronglyInvariant,
    #[error("the transformation set is not a group")]
    NotAGroup,
    #[error("the monoid closure was truncated at {0} elements")]
    TruncatedClosure(usize),
    #[error("vertex enumeration is capped at {cap} variables, got {n}")]
    VertexCapExceeded { n: usize, cap: usize },
    #[error("the feasible region is empty")]
    Infeasible,
    #[error("lower probability of the observed sample is not positive")]
    PositivityViolated,
    #[error("events do not form a lattice containing the empty set and the whole space")]
    NotALattice,
    #[error("invalid count vector: {0}")]
    InvalidCountVector(String),
    #[error("space of size {size} exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
