use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hyperedge {edge} has {size} distinct vertices; at least 2 are required")]
    SingletonHyperedge { edge: usize, size: usize },
    #[error(
        "hyperedge {edge} references vertex {vertex} but the hypergraph has {n_vertices} vertices"
    )]
    OutOfRangeVertex {
        edge: usize,
        vertex: usize,
        n_vertices: usize,
    },
    #[error("hyperedge {edge} has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("vertex {0} belongs to no hyperedge")]
    IsolatedVertex(usize),
    #[error("{hyperedges} hyperedges but {weights} weights")]
    WeightCountMismatch { hyperedges: usize, weights: usize },
    #[error("hypergraph must have at least one vertex")]
    NoVertices,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("k = {k} is out of range (max {max})")]
    KTooLarge { k: usize, max: usize },

    #[error("invalid point cloud: {0}")]
    InvalidPointCloud(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system is singular or not positive definite")]
    SingularSystem,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty file")]
    EmptyFile,
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: expected {expected} numeric fields, found {found}")]
    InconsistentWidth {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("class {label:?} has {available} samples; need at least {required}")]
    InsufficientClassSize {
        label: String,
        available: usize,
        required: usize,
    },
    #[error("dataset has no train/test split assigned")]
    MissingSplit,
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::SingularSystem
                | Error::DegenerateSpectrum(_)
                | Error::NotSymmetric(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
