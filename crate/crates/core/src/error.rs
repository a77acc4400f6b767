use thiserror::Error;

/// Errors raised by tree, pyramid and geometry operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: k={k}, r={r} ({reason})")]
    InvalidSpace { k: u32, r: u32, reason: &'static str },
    #[error("precision {precision} exceeds space precision {r}")]
    PrecisionOutOfRange { precision: u32, r: u32 },
    #[error("coordinate {value} out of range on axis {axis}")]
    CoordOutOfRange { axis: usize, value: f64 },
    #[error("axis {axis} out of range for dimension {k}")]
    AxisOutOfRange { axis: usize, k: u32 },
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("fission of an internal node")]
    FissionOfInternal,
    #[error("malformed tree code: {0}")]
    MalformedCode(String),
    #[error("grid of 2^{0} cells is too large")]
    GridTooLarge(u32),
    #[error("operation {op} expects {expected} operand(s)")]
    ArityMismatch { op: &'static str, expected: usize },
    #[error("zero rate in homothety")]
    SingularElementary,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("point at infinity after homogeneous division")]
    HomogeneousDivideByZero,
    #[error("degenerate shape: {0}")]
    DegenerateShape(&'static str),
    #[error("value {0} outside [0, 1]")]
    ValueOutOfRange(f64),
    #[error("pyramid has no black leaf")]
    EmptyPyramid,
    #[error("zero dispersion")]
    ZeroDispersion,
    #[error("interpolation centers coincide")]
    CoincidentCenters,
    #[error("set has zero mass")]
    ZeroMass,
    #[error("recognition base is empty")]
    EmptyBase,
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("response pyramids do not share one support")]
    SupportMismatch,
    #[error("tree depth {depth} exceeds machine capacity {capacity}")]
    CapacityExceeded { depth: u32, capacity: u32 },
    #[error("target dimension {target} must be below the space dimension {k}")]
    TargetDimension { target: u32, k: u32 },
    #[error("malformed image: {0}")]
    MalformedImage(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
