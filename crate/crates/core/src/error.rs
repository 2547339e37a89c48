use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph has {n} vertices; at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0} {1}")]
    ParallelEdge(usize, usize),
    #[error("no vertex {0}")]
    MissingVertex(usize),
    #[error("no edge {0} {1}")]
    MissingEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("unknown family literal `{literal}`; valid tags: K, C, E, P, W, S, PETAL, J(...), U(...)")]
    UnknownFamily { literal: String },
    #[error("{what} needs at most {cap} vertices, got {n} (raise the cap with --cap)")]
    CapExceeded { what: &'static str, cap: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("spheres have coincident centers")]
    CoincidentCenters,
    #[error("spheres do not share a carrier subspace of the same dimension")]
    CarrierMismatch,
    #[error("distance {distance} does not exceed radius {radius}; the locus is empty")]
    EmptyLocus { distance: f64, radius: f64 },
    #[error("invalid sphere: {0}")]
    InvalidSphere(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("invalid embedding request: {0}")]
    InvalidRequest(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("`{0}` has no registry entry")]
    NotSupported(String),
    #[error("engine could not certify an exact value: {0}")]
    InconclusiveRoot(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
