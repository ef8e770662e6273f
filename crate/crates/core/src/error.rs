use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid function has {got} values, grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("index {index} out of range (0..{len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("requested {requested} eigenvalues of a {size}x{size} operator")]
    EigenCount { requested: usize, size: usize },

    #[error("invalid tridiagonal operator: {0}")]
    InvalidOperator(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("invalid root bracket: {0}")]
    InvalidBracket(String),

    #[error("superpotential is singular at {} node(s), first at r = {first_r}", nodes.len())]
    SingularNodes { nodes: Vec<usize>, first_r: f64 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("level {level} is not available: {reason}")]
    LevelUnavailable { level: usize, reason: String },

    #[error("tower needs depth >= {required}, got {depth}")]
    TowerTooShallow { required: usize, depth: usize },

    #[error("remainder sequence needs at least 3 values, got {0}")]
    ShortSequence(usize),

    #[error("algebra is not finitely classified")]
    NotFinite,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("spectra belong to different systems: {0}")]
    Mismatch(String),
}
