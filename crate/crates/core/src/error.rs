//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the construction and estimation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined for empty word")]
    EmptyWord,

    #[error("word length {len} exceeds the supported maximum of {max}")]
    WordTooLong { len: usize, max: usize },

    #[error("forbidden words must all have length {expected}, found length {found}")]
    MixedForbiddenLengths { expected: usize, found: usize },

    #[error("subshift depth must be at least 2, got {0}")]
    DepthTooSmall(usize),

    #[error("empty subshift")]
    EmptySubshift,

    #[error("subshift is not topologically transitive; select a component first")]
    NotTransitive,

    #[error("word shorter than potential range ({len} < {range})")]
    WordShorterThanRange { len: usize, range: usize },

    #[error("word shorter than state depth ({len} < {depth})")]
    WordShorterThanState { len: usize, depth: usize },

    #[error("level {n} exceeds the enumeration cap {cap}")]
    LevelCapExceeded { n: usize, cap: usize },

    #[error("curve is not concave (slope increases by {excess:.3e} at grid index {index})")]
    NotConcave { index: usize, excess: f64 },

    #[error("unknown wavelet kind `{0}`")]
    UnknownWaveletKind(String),

    #[error("tabulated wavelet: x = {0} is not on the dyadic evaluation grid")]
    OffGridEvaluation(f64),

    #[error("subshift does not clear zeros: |psi| = {value:.3e} at word {word}")]
    ZeroClearanceFailed { word: String, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined exponent: all leaders vanish on the requested window")]
    UndefinedExponent,

    #[error("locally constant: zero oscillation at every requested radius")]
    LocallyConstant,

    #[error("fewer than {need} usable scales ({got} available)")]
    TooFewScales { need: usize, got: usize },

    #[error("empty set: the requested cover contains no words")]
    EmptyCover,

    #[error("excluded exponent: gamma = 1 separates the graph and range kernels")]
    ExcludedExponent,

    #[error("outside theorem hypotheses: {0}")]
    OutsideTheoremHypotheses(String),

    #[error("grid/tabulation mismatch: {0}")]
    GridMismatch(String),

    #[error("io error")]
    Io(#[from] std::io::Error),

    #[error("malformed series dump: {0}")]
    MalformedDump(String),
}

pub type Result<T> = std::result::Result<T, Error>;
