use thiserror::Error;

/// Reasons a quotient projection of a circulant graph fails to be a cover.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverViolation {
    #[error("connection element {s} lies in the normal subgroup (image would carry a loop)")]
    ElementInSubgroup { s: usize },
    #[error("connection elements {s1} and {s2} differ by an element of the normal subgroup (neighbors collapse)")]
    CollapsingPair { s1: usize, s2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group order {0}: must be at least 1")]
    InvalidOrder(usize),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("element {element} out of range for group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("map is not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotAHomomorphism { a: usize, b: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal: coset of {element} differs on the left and right")]
    NotNormal { element: usize },
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },
    #[error("homomorphism chain mismatch: {0}")]
    HomChainMismatch(String),
    #[error("alphabet size {0} is invalid: must satisfy 2 <= q <= 255")]
    InvalidAlphabet(usize),
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("state {state} out of range for alphabet of size {q}")]
    StateOutOfRange { state: usize, q: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("duplicate element {0} in support or memory set")]
    DuplicateElement(usize),
    #[error("enumeration too large: {required} items exceed budget {budget}")]
    EnumerationTooLarge { required: u128, budget: u64 },
    #[error("memory set {support:?} is not a memory set: identity coordinate is not constant on the cylinder of configuration {config}")]
    ConstancyViolation { support: Vec<usize>, config: String },
    #[error("map is not equivariant with respect to the given homomorphism")]
    EquivarianceRequired,
    #[error("automaton is not iterable: homomorphism {0} is not an endomorphism")]
    NotIterable(String),
    #[error("automaton is not linear over the given field")]
    LinearityRequired,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("connection set contains the identity (loop)")]
    LoopInConnection,
    #[error("connection set is not symmetric: inverse of {0} is missing")]
    AsymmetricConnection(usize),
    #[error("connection set generates a proper subgroup of order {generated} (graph is disconnected)")]
    Disconnected { generated: usize },
    #[error("quotient cover is degenerate: {0}")]
    CoverDegenerate(CoverViolation),
    #[error("fibers have unequal sizes: {0:?}")]
    UnequalFibers(Vec<usize>),
    #[error("map is not a covering")]
    NotACovering,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
