use thiserror::Error;

/// A single law broken by a candidate category table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    /// `h∘(g∘f) ≠ (h∘g)∘f`
    Assoc { h: String, g: String, f: String },
    /// an identity is not a unit for `mor`
    Unit { object: String, mor: String },
    /// a compose entry or identity disagrees with the declared endpoints
    TypeMismatch { detail: String },
}

impl std::fmt::Display for LawViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LawViolation::Assoc { h, g, f: ff } => {
                write!(f, "associativity fails on ({h}, {g}, {ff})")
            }
            LawViolation::Unit { object, mor } => {
                write!(f, "identity at {object} is not a unit for {mor}")
            }
            LawViolation::TypeMismatch { detail } => write!(f, "type mismatch: {detail}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid category: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidCategory(Vec<LawViolation>),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("size bound exceeded: {what} reached {size} (cap {cap})")]
    SizeBoundExceeded {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("dimension bound exceeded: need {needed}, bound is {bound}")]
    DimensionBoundExceeded { needed: usize, bound: usize },
    #[error("not a cocone: {0}")]
    NotACocone(String),
    #[error("not a Grothendieck fibration: {0}")]
    NotAFibration(String),
    #[error("coherence violation ({law}): {detail}")]
    CoherenceViolation { law: String, detail: String },
    #[error("enriched associativity violation: {0}")]
    EnrichedAssocViolation(String),
    #[error("relative structure violated: {0}")]
    NotRelative(String),
    #[error("1-skeleton has a directed cycle through {0}")]
    CyclicOneSkeleton(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("simplicial identity violated: {0}")]
    SimplicialViolation(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("unknown instance kind {0}")]
    UnknownKind(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
