//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building vectors, parsing data,
/// scoring, or exporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid scale: dimension {dim} has min {min} >= max {max}")]
    InvalidScale { dim: usize, min: f64, max: f64 },

    #[error("scale must have at least one dimension")]
    EmptyScale,

    #[error("score {value} out of range [{min}, {max}] in dimension {dim}")]
    ScoreOutOfRange {
        dim: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid weights: all weights must be >= 0 with a positive sum")]
    InvalidWeights,

    #[error("similarity {0} outside [0, 1]")]
    InvalidScore(f64),

    #[error("degenerate dimension {dim}: maximum attainable distance is zero")]
    DegenerateDimension { dim: usize },

    #[error("benchmark name must be nonempty")]
    EmptyBenchmarkName,

    #[error("duplicate benchmark name {0:?}")]
    DuplicateBenchmarkName(String),

    #[error("cannot derive a benchmark from an empty collection")]
    EmptyCluster,

    #[error("unknown benchmark {name:?}; known benchmarks: {known}")]
    UnknownBenchmark { name: String, known: String },

    #[error("unknown country {0:?} in report")]
    UnknownCountry(String),

    #[error("{0:?} is not a valid ISO 3166-1 alpha-3 code")]
    InvalidCountryCode(String),

    #[error("dataset is missing mapped column {0:?}")]
    Schema(String),

    #[error("duplicate record for {country}/{year} at line {line}")]
    DuplicateRecord {
        country: String,
        year: i32,
        line: u64,
    },

    #[error("line {line}, column {column:?}: score {value} out of range [0, 10] after inversion")]
    Range {
        line: u64,
        column: String,
        value: f64,
    },

    #[error("panel contains no records")]
    EmptyPanel,

    #[error("no countries left to score after averaging")]
    EmptyCountrySet,

    #[error("window start {start} is after end {end}")]
    InvalidWindow { start: i32, end: i32 },

    #[error("geojson parse error at line {line}, column {column}: {message}")]
    GeoJsonParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("not a GeoJSON FeatureCollection: {0}")]
    GeoJsonShape(String),

    #[error("invalid class breaks: must be strictly ascending within [0, 1]")]
    InvalidBreaks,

    #[error("config error: {0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
