use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // lattices
    #[error("elements {0} and {1} have no infimum or supremum")]
    NotALattice(usize, usize),
    #[error("order has no unique bottom and top")]
    NoBounds,
    #[error("relation is not a partial order: {0}")]
    NotAnOrder(String),
    #[error("structure of size {size} exceeds enumeration guard {guard}")]
    TooLarge { size: usize, guard: usize },

    // ortholattices
    #[error("perp is not an involution at element {0}")]
    NotInvolution(usize),
    #[error("perp is not order reversing on {0} <= {1}")]
    NotOrderReversing(usize, usize),
    #[error("perp({0}) is not a complement of {0}")]
    NotComplement(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("intermediate identity of the construction failed: {0}")]
    InternalProofViolation(String),

    // inner product spaces
    #[error("form is not orthosymmetric: <{v},{w}> = 0 but <{w},{v}> != 0")]
    NotOrthosymmetric { v: String, w: String },
    #[error("form is isotropic: <v,v> = 0 for v = {0}")]
    Isotropic(String),
    #[error("Gram matrix is not invertible")]
    NotInvertibleGram,
    #[error("indefinite rational form without isotropic witness; anisotropy is only certified for definite forms")]
    IndefiniteForm,
    #[error("subspace is not closed")]
    NotClosed,

    // rings
    #[error("ring is not *-regular: {0}")]
    NotStarRegular(String),
    #[error("ring is not regular: {0}")]
    NotRegular(String),
    #[error("ring axioms fail: {0}")]
    NotARing(String),
    #[error("lattice of principal right ideals is infinite")]
    InfiniteLattice,
    #[error("element is not a projection")]
    NotProjection,

    // representations
    #[error("eta is not well defined: {0} and {1} generate the same ideal but have different images")]
    WellDefinednessViolation(String, String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("cancellation failed: {0}")]
    CancellationFailure(String),
    #[error("not a frame: {0}")]
    NotAFrame(String),
    #[error("coordinatization only supports prime fields")]
    NonPrimeField,
    #[error("coordinate ring not closed: {0}")]
    ClosureFailure(String),
    #[error("frame image is degenerate: {0}")]
    FrameImageDegenerate(String),
    #[error("{claim} failed at {witness}")]
    StepFailure { claim: String, witness: String },

    // plumbing
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    }
}
