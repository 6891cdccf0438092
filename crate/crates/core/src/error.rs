use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pivot breakdown in tridiagonal elimination at row {row}")]
    PivotBreakdown { row: usize },

    #[error("unsupported BDF order {0} (expected 1..=6)")]
    UnsupportedOrder(usize),
    #[error("time step must be positive, got {0}")]
    NonPositiveTau(f64),

    #[error("mesh too coarse: {0} elements (need at least 2)")]
    MeshTooCoarse(usize),
    #[error("quadrature cache is at t = {cache}, requested t = {requested}")]
    CacheTimeMismatch { cache: f64, requested: f64 },
    #[error("finite element function does not live on this mesh")]
    MeshMismatch,
    #[error("mass matrix is singular")]
    SingularMass,
    #[error("mesh with {fine} elements is not a dyadic refinement of {coarse} elements")]
    NotNested { coarse: usize, fine: usize },

    #[error("source term does not provide time derivative of order {0} at t = 0")]
    MissingDerivatives(usize),
    #[error("breakpoint {breakpoint} is not a node of the mesh with {n_elems} elements")]
    MeshBreakpointMisaligned { breakpoint: f64, n_elems: usize },
    #[error("this scheme variant only supports a zero source term")]
    NonzeroSourceUnsupported,
    #[error("this scheme variant only supports zero initial data")]
    NonzeroInitialUnsupported,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("reference solution requires a constant potential")]
    NonConstantU,
    #[error("reference solution requires a zero source term")]
    NonzeroSource,
    #[error("invalid contour parameters: {0}")]
    ContourParamInvalid(String),
    #[error("resolvent solve failed at contour node {node}")]
    OperatorSolveFailure { node: usize },
    #[error("index l = {l} out of range for order k = {k}")]
    IndexOutOfRange { k: usize, l: usize },

    #[error("config error at `{path}`: {message}")]
    SchemaError { path: String, message: String },
    #[error("alpha = {0} is outside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("expression error at offset {offset}: {message}")]
    ExprParse { offset: usize, message: String },
    #[error("errors must be positive, got {0}")]
    NonPositiveError(f64),
    #[error("rate computation needs at least two error values")]
    TooFewPoints,
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the input configuration rather than by the
    /// numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::SchemaError { .. }
                | Error::AlphaOutOfRange(_)
                | Error::ExprParse { .. }
                | Error::MeshBreakpointMisaligned { .. }
                | Error::UnsupportedOrder(_)
                | Error::InvalidProblem(_)
                | Error::NonzeroSourceUnsupported
                | Error::NonzeroInitialUnsupported
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
