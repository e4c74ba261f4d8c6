use crate::rational::Rational;

/// Errors reported by this crate.
///
/// Point, pair, and coordinate indices in rendered messages are 1-based,
/// matching the numbering used in certificates shown to people; the struct
/// fields themselves are 0-based.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("empty interval: lower bound {lo} is not below upper bound {hi}")]
    EmptyInterval { lo: Rational, hi: Rational },

    #[error("invalid number literal `{input}`")]
    InvalidNumber { input: String },

    #[error("a point must have at least one coordinate")]
    EmptyPoint,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("point {} has dimension {got}, expected {expected}", index + 1)]
    PointDimension {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("points {} and {} are identical", first + 1, second + 1)]
    DuplicatePoint { first: usize, second: usize },

    #[error("coordinate {value} is not an integer or half-integer")]
    NotHalfIntegral { value: Rational },

    #[error("coordinate {} is out of range for dimension {dimension}", coord + 1)]
    CoordOutOfRange { coord: usize, dimension: usize },

    #[error(
        "points {} and {} differ by {gap} in coordinate 0; the split step needs a gap of at least 2",
        first + 1,
        second + 1
    )]
    SpreadTooNarrow {
        first: usize,
        second: usize,
        gap: Rational,
    },

    #[error(
        "box bound for coordinate {} is inverted: lower {lower} exceeds upper {upper}",
        coord + 1
    )]
    InvertedBounds {
        coord: usize,
        lower: Rational,
        upper: Rational,
    },

    #[error(
        "box bound {value} for coordinate {} does not lie on the {lattice} lattice",
        coord + 1
    )]
    OffLattice {
        coord: usize,
        value: Rational,
        lattice: &'static str,
    },

    #[error("box contains {count} lattice points, exceeding the limit of {limit}")]
    VertexLimit { count: u128, limit: usize },

    #[error("pair ({}, {}): distance {distance} is not an odd integer", i + 1, j + 1)]
    NotOddDistance {
        i: usize,
        j: usize,
        distance: Rational,
    },

    #[error("pair ({}, {}): coordinates {} are tied, so no sign can be assigned", i + 1, j + 1, coord + 1)]
    TiedCoordinate { i: usize, j: usize, coord: usize },

    #[error("the linear system is inconsistent")]
    InconsistentSystem,

    #[error("expected {expected} points, got {got}")]
    SetSize { expected: usize, got: usize },

    #[error("the hint set supplies {got} variables, but the system has {expected}")]
    VariableCount { expected: usize, got: usize },

    #[error(
        "dependent coordinate {} of point {} drifted by {drift} from its hint; hints are not near a true solution",
        coord + 1,
        point + 1
    )]
    DependentDrift {
        point: usize,
        coord: usize,
        drift: Rational,
    },

    #[error("pair ({}, {}): distance {distance} is not within 1/1000000 of an integer", i + 1, j + 1)]
    DistanceNotNearInteger {
        i: usize,
        j: usize,
        distance: Rational,
    },

    #[error("pair ({}, {}): distance {distance} rounds to {nearest}, which is even", i + 1, j + 1)]
    EvenDistance {
        i: usize,
        j: usize,
        distance: Rational,
        nearest: num_bigint::BigInt,
    },

    #[error("invalid declared distances: {detail}")]
    InvalidDeclaredDistances { detail: String },

    #[error("invalid point-set document: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
