use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("point is not on the quadric")]
    NotOnQuadric,
    #[error("quadratic form is singular: {0}")]
    SingularForm(String),
    #[error("kernel has dimension {found}, expected {expected}: {context}")]
    KernelDimension { expected: usize, found: usize, context: String },
    #[error("structure invariant violated: {0}")]
    Structure(String),
    #[error("degenerate residue: {0}")]
    Degenerate(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
