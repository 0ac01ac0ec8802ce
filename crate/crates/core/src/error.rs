use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground sets differ: {left} vs {right} elements")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("layer {layer} out of range for a sequence with {layers} layers")]
    LayerOutOfRange { layer: usize, layers: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error(
        "bigrade needs {required} candidate triangles, above the cap of {cap}; \
         use the nerve construction for large clusters"
    )]
    TriangleCapExceeded { required: u64, cap: u64 },

    #[error(
        "layer {layer} has {width} clusters, above the exact-optimiser width cap {cap}; \
         use the heuristic optimiser"
    )]
    WidthCapExceeded { layer: usize, width: usize, cap: usize },

    #[error("grids are not comparable: {0}")]
    GridMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{n} elements exceed the total-order enumeration cap of {cap}")]
    OrderCapExceeded { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
