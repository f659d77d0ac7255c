use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty knot list")]
    EmptyInput,

    #[error("knots {i} and {j} coincide within tolerance")]
    DuplicateKnot { i: usize, j: usize },

    #[error("s[{i}] collides with t[{j}]")]
    KnotCollision { i: usize, j: usize },

    #[error("entry magnitude 10^{log10mag:.1} is outside the floating range")]
    RangeOverflow { log10mag: f64 },

    #[error("requested {q}x{q} block of a {rows}x{cols} matrix")]
    BlockTooLarge { q: usize, rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("SVD did not converge")]
    ConvergenceFailure,

    #[error("zero pivot at elimination step {0}")]
    ZeroPivot(usize),

    #[error("only {found} knots satisfy 1/|s| >= nu, need {needed}")]
    NotEnoughSmallKnots { needed: usize, found: usize },

    #[error("largest knot modulus is 1; geometric-sum bound undefined")]
    UnitRadius,

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("matrix size {0} must be even")]
    OddSize(usize),

    #[error("point sets are not (eta, c)-separated")]
    NotSeparated,

    #[error("arc of {l} grid points exceeds n/2 = {half}")]
    ArcTooLong { l: usize, half: usize },

    #[error("certificate has rho_bar = {0} <= 0")]
    VacuousCertificate(i64),

    #[error("no arc certificate yields a positive bound")]
    NoPositiveBound,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
