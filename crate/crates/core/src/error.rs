use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("expectation has imaginary part {imag:.3e}; state or observable is corrupted")]
    ComplexExpectation { imag: f64 },

    #[error("observable is singular")]
    SingularObservable,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("filter design is unstable (max pole radius {radius})")]
    UnstableFilter { radius: f64 },

    #[error("noise axis {axis} references base axis {base}, which is not an earlier non-N6 axis")]
    DanglingNoiseReference { axis: usize, base: usize },

    #[error("channel/axis mismatch: {0}")]
    ChannelMismatch(String),

    #[error("unsupported number of qubits: {0}")]
    UnsupportedQubits(usize),

    #[error("malformed dataset name at byte {position}: {message}")]
    MalformedName { position: usize, message: String },

    #[error(transparent)]
    Container(#[from] crate::datasetio::ContainerError),

    #[error("missing examples: {0:?}")]
    MissingExamples(Vec<usize>),

    #[error("index {index} out of range (archive has {len} examples)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Zip(#[from] zip::result::ZipError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
