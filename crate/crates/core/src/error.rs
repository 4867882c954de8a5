use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of negative value {0}")]
    NegativeSqrt(String),

    #[error("precision denominator must be at least 1, got {0}")]
    BadPrecision(String),

    #[error("cannot parse {0:?} as a rational number")]
    RationalSyntax(String),

    #[error("instance needs at least one {0} point")]
    EmptyFamily(&'static str),

    #[error("{family} centroid is ({x}, {y}), expected the origin")]
    NonZeroCentroid {
        family: &'static str,
        x: String,
        y: String,
    },

    #[error("cannot jointly recentre: primary centroid ({px}, {py}) differs from secondary centroid ({sx}, {sy})")]
    CentroidMismatch {
        px: String,
        py: String,
        sx: String,
        sy: String,
    },

    #[error("alpha must be greater than 1, got {0}")]
    AlphaOutOfRange(String),

    #[error("all {0} points are at the origin, so the radius is zero")]
    ZeroRadius(&'static str),

    #[error("far-field certificate unavailable at any alpha in (1, {0}]")]
    NoFeasibleAlpha(String),

    #[error("weights must be positive, got ({0}, {1})")]
    NonPositiveWeight(String, String),

    #[error("weights are not normalized: {n}*{primary} != {m}*{secondary}")]
    WeightNormalization {
        n: usize,
        m: usize,
        primary: String,
        secondary: String,
    },

    #[error("scale {scale} does not clear the denominator of {label}.{axis} = {value}")]
    ScaleNotClearing {
        scale: String,
        label: String,
        axis: char,
        value: String,
    },

    #[error("scale must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("{points} points exceed the ordering size limit of {limit}")]
    SizeGuard { points: usize, limit: usize },

    #[error("ordering is not a permutation of the instance labels: {0}")]
    InvalidOrdering(String),

    #[error("grid half-width {0} is too large to scan")]
    GridTooLarge(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing `{0}` section")]
    MissingSection(&'static str),

    #[error("duplicate point ({x}, {y}) on line {line}")]
    DuplicatePoint { line: usize, x: String, y: String },
}
