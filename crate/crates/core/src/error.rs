use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the library can report.
///
/// Each variant maps to a stable machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("base vertex `{vertex}` has degree {degree} (tails included); at least 2 edges must meet at every vertex")]
    EndVertex { vertex: String, degree: usize },
    #[error("edge {edge} references unknown vertex `{vertex}`")]
    DanglingEdge { edge: usize, vertex: String },
    #[error("edge {edge} is a self-loop at `{vertex}`")]
    SelfLoop { edge: usize, vertex: String },
    #[error("vertex `{0}` is declared twice")]
    DuplicateVertex(String),
    #[error("tail {tail} is attached to unknown vertex `{vertex}`")]
    UnknownNest { tail: usize, vertex: String },
    #[error("graph has no tails; at least one half-line is required")]
    NoTails,
    #[error("edge is not part of the graph: {0}")]
    UnknownEdge(String),
    #[error("site is not part of the graph: {0}")]
    UnknownSite(String),
    #[error("{0} are not nearest neighbours")]
    NotNearestNeighbor(String),
    #[error("override at depth {depth} exceeds the finitary depth n0 = {n0}")]
    NotFinitary { depth: usize, n0: usize },
    #[error("off-diagonal coupling {0} must be non-zero")]
    ZeroCoupling(String),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(&'static str),
    #[error("function known to depth {have}, depth {need} required")]
    InsufficientDepth { have: usize, need: usize },
    #[error("wronskian is not constant along tail {tail} (spread {spread:e}); inputs are not both solutions")]
    NotConstant { tail: usize, spread: f64 },
    #[error("lambda = {0} is a band edge (|lambda| = 2), where the tail modes degenerate")]
    DegenerateBand(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("frames were computed at different spectral parameters ({0} vs {1})")]
    LambdaMismatch(f64, f64),
    #[error("lambda = {0} lies in the band |lambda| <= 2; no decaying plane")]
    InsideBand(f64),
    #[error("lambda = {0} lies outside the scattering zone |lambda| < 2")]
    OutsideBand(f64),
    #[error("lambda = {lambda} is an embedded singular eigenvalue ({extra} extra solutions); the scattering matrix is undefined")]
    EmbeddedSingular { lambda: f64, extra: usize },
    #[error("bad scan range: {0}")]
    BadRange(&'static str),
    #[error("truncation depth {depth} too small; need at least {min}")]
    TooSmall { depth: usize, min: usize },
    #[error("cannot satisfy the no-ends constraint: {0}")]
    Unsatisfiable(&'static str),
    #[error("invalid corpus parameters: {0}")]
    BadParams(&'static str),
}

impl Error {
    /// Stable error code string, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EndVertex { .. } => "E_END_VERTEX",
            Error::DanglingEdge { .. } => "E_DANGLING_EDGE",
            Error::SelfLoop { .. } => "E_SELF_LOOP",
            Error::DuplicateVertex(_) => "E_DUPLICATE_VERTEX",
            Error::UnknownNest { .. } => "E_UNKNOWN_NEST",
            Error::NoTails => "E_NO_TAILS",
            Error::UnknownEdge(_) => "E_UNKNOWN_EDGE",
            Error::UnknownSite(_) => "E_UNKNOWN_SITE",
            Error::NotNearestNeighbor(_) => "E_NOT_NEAREST_NEIGHBOR",
            Error::NotFinitary { .. } => "E_NOT_FINITARY",
            Error::ZeroCoupling(_) => "E_ZERO_COUPLING",
            Error::FlavorMismatch(_) => "E_FLAVOR_MISMATCH",
            Error::InsufficientDepth { .. } => "E_INSUFFICIENT_DEPTH",
            Error::NotConstant { .. } => "E_NOT_CONSTANT",
            Error::DegenerateBand(_) => "E_DEGENERATE_BAND",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::LambdaMismatch(..) => "E_LAMBDA_MISMATCH",
            Error::InsideBand(_) => "E_INSIDE_BAND",
            Error::OutsideBand(_) => "E_OUTSIDE_BAND",
            Error::EmbeddedSingular { .. } => "E_EMBEDDED_SINGULAR",
            Error::BadRange(_) => "E_BAD_RANGE",
            Error::TooSmall { .. } => "E_TOO_SMALL",
            Error::Unsatisfiable(_) => "E_UNSATISFIABLE",
            Error::BadParams(_) => "E_BAD_PARAMS",
        }
    }
}
