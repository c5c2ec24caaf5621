//! The vector space of economic systems: foundation scores, the L1 metric,
//! and the similarity-index formulas built on top of it.
//!
//! A country's economic system is a point in an n-dimensional score space
//! (n = 3 in the baseline model: market organization, private ownership,
//! small government, each graded 0-10). Similarity to a benchmark system is
//! one minus a normalized Manhattan distance from the benchmark's position.
//!
//! Two normalizations are supported:
//!
//! * **fixed-range** — the summed distances are divided by the sum of the
//!   dimension range widths (30 on the default scale). This is the canonical
//!   form; it reproduces the published index values.
//! * **benchmark-relative** — each dimension's distance is divided by the
//!   largest distance attainable from the benchmark along that dimension,
//!   then the ratios are averaged. Equivalent to fixed-range when the
//!   benchmark sits on a corner of the scale and weights are equal.

use crate::error::{Error, Result};

/// Benchmark position for pure capitalism on the default scale.
pub const CAPITALISM_POSITION: [f64; 3] = [10.0, 10.0, 10.0];
/// Benchmark position for pure communism on the default scale.
pub const COMMUNISM_POSITION: [f64; 3] = [0.0, 0.0, 0.0];
/// Benchmark position for Scandinavian socialism: the published two-decimal
/// Nordic averages. These exact constants are used so that index values can
/// be reproduced from the published tables alone.
pub const SCANDINAVIAN_POSITION: [f64; 3] = [7.83, 7.26, 5.28];

/// Absolute tolerance for float equality throughout the crate.
pub const EQ_TOLERANCE: f64 = 1e-9;

/// The three institutional foundations of the baseline model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Foundation {
    MarketOrganization,
    PrivateOwnership,
    SmallGovernment,
}

impl Foundation {
    pub const ALL: [Foundation; 3] = [
        Foundation::MarketOrganization,
        Foundation::PrivateOwnership,
        Foundation::SmallGovernment,
    ];

    /// Short column label used in canonical CSV exports.
    pub fn short_name(self) -> &'static str {
        match self {
            Foundation::MarketOrganization => "mo",
            Foundation::PrivateOwnership => "po",
            Foundation::SmallGovernment => "sg",
        }
    }
}

/// Admissible range of one foundation dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionRange {
    pub min: f64,
    pub max: f64,
}

impl DimensionRange {
    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }
}

/// Per-dimension admissible ranges for foundation scores.
///
/// The default is three dimensions, each spanning `[0, 10]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoundationScale {
    dims: Vec<DimensionRange>,
}

impl Default for FoundationScale {
    fn default() -> Self {
        FoundationScale::uniform(3, 0.0, 10.0).expect("default scale is valid")
    }
}

impl FoundationScale {
    /// Build a scale from explicit `(min, max)` pairs.
    pub fn new(ranges: Vec<(f64, f64)>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::EmptyScale);
        }
        let mut dims = Vec::with_capacity(ranges.len());
        for (i, (min, max)) in ranges.into_iter().enumerate() {
            if min >= max || !min.is_finite() || !max.is_finite() {
                return Err(Error::InvalidScale { dim: i, min, max });
            }
            dims.push(DimensionRange { min, max });
        }
        Ok(FoundationScale { dims })
    }

    /// A scale with `n` identical dimensions.
    pub fn uniform(n: usize, min: f64, max: f64) -> Result<Self> {
        FoundationScale::new(vec![(min, max); n])
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[DimensionRange] {
        &self.dims
    }

    /// Sum of all dimension range widths (30 on the default scale).
    pub fn total_width(&self) -> f64 {
        self.dims.iter().map(DimensionRange::width).sum()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                got,
            });
        }
        Ok(())
    }

    /// Verify every score lies inside its dimension range (closed interval).
    pub fn check_vector(&self, scores: &[f64]) -> Result<()> {
        self.check_len(scores.len())?;
        for (i, (&s, dim)) in scores.iter().zip(&self.dims).enumerate() {
            if !s.is_finite() || !dim.contains(s) {
                return Err(Error::ScoreOutOfRange {
                    dim: i,
                    value: s,
                    min: dim.min,
                    max: dim.max,
                });
            }
        }
        Ok(())
    }
}

/// A country's ordered scores on the institutional foundations.
///
/// In the baseline model the order is (market organization, private
/// ownership, small government).
#[derive(Debug, Clone, PartialEq)]
pub struct FoundationVector {
    scores: Vec<f64>,
}

impl FoundationVector {
    /// Validate `scores` against `scale` and wrap them.
    pub fn new(scores: Vec<f64>, scale: &FoundationScale) -> Result<Self> {
        scale.check_vector(&scores)?;
        Ok(FoundationVector { scores })
    }

    /// Baseline three-foundation vector on the default `[0, 10]` scale.
    pub fn three(mo: f64, po: f64, sg: f64) -> Result<Self> {
        FoundationVector::new(vec![mo, po, sg], &FoundationScale::default())
    }

    /// Wrap scores whose validity is already established by construction.
    pub(crate) fn from_raw(scores: Vec<f64>) -> Self {
        FoundationVector { scores }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// A named reference position on the foundation spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    name: String,
    position: FoundationVector,
}

impl Benchmark {
    pub fn new(name: impl Into<String>, position: FoundationVector) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::EmptyBenchmarkName);
        }
        Ok(Benchmark { name, position })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn position(&self) -> &FoundationVector {
        &self.position
    }
}

/// Per-dimension importance weights. All weights are nonnegative and at
/// least one is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty()
            || weights.iter().any(|w| !w.is_finite() || *w < 0.0)
            || weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::InvalidWeights);
        }
        Ok(WeightVector { weights })
    }

    /// Equal weights across `n` dimensions, the neutral default.
    pub fn equal(n: usize) -> Self {
        WeightVector {
            weights: vec![1.0; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights rescaled to sum to one.
    pub fn normalized(&self) -> Vec<f64> {
        let sum: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / sum).collect()
    }
}

/// A similarity value in `[0, 1]`; 1 means the system coincides with the
/// benchmark position.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    /// Accept a raw value, forgiving float excursions up to [`EQ_TOLERANCE`]
    /// outside the unit interval.
    pub fn try_new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(-EQ_TOLERANCE..=1.0 + EQ_TOLERANCE).contains(&value) {
            return Err(Error::InvalidScore(value));
        }
        Ok(SimilarityScore(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The per-dimension distances between two systems and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionDistances {
    per_dim: Vec<f64>,
    aggregate: f64,
}

impl DimensionDistances {
    pub fn per_dim(&self) -> &[f64] {
        &self.per_dim
    }

    /// Unweighted sum of the per-dimension distances.
    pub fn aggregate(&self) -> f64 {
        self.aggregate
    }
}

/// Manhattan distance between two systems: `d_i = |x_i - y_i|` per
/// dimension, aggregated by summation.
pub fn l1_distance(x: &FoundationVector, y: &FoundationVector) -> Result<DimensionDistances> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let per_dim: Vec<f64> = x
        .scores()
        .iter()
        .zip(y.scores())
        .map(|(a, b)| (a - b).abs())
        .collect();
    let aggregate = per_dim.iter().sum();
    Ok(DimensionDistances { per_dim, aggregate })
}

/// Fixed-range similarity: one minus the weighted distance sum divided by
/// the weighted sum of dimension range widths.
///
/// With equal weights on the default scale this is exactly
/// `1 - sum(|x_i - b_i|) / 30`, the canonical normalization.
pub fn similarity_fixed_range(
    x: &FoundationVector,
    benchmark: &Benchmark,
    scale: &FoundationScale,
    weights: &WeightVector,
) -> Result<SimilarityScore> {
    scale.check_vector(x.scores())?;
    scale.check_vector(benchmark.position().scores())?;
    if weights.len() != scale.len() {
        return Err(Error::DimensionMismatch {
            expected: scale.len(),
            got: weights.len(),
        });
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xi, &bi), (&wi, dim)) in x
        .scores()
        .iter()
        .zip(benchmark.position().scores())
        .zip(weights.weights().iter().zip(scale.dims()))
    {
        num += wi * (xi - bi).abs();
        den += wi * dim.width();
    }
    SimilarityScore::try_new(1.0 - num / den)
}

/// Benchmark-relative similarity: each dimension's distance is divided by
/// the largest distance attainable from the benchmark in that dimension,
/// `max(b_i - min_i, max_i - b_i)`, and the ratios are combined with
/// weights normalized to sum to one.
pub fn similarity_benchmark_relative(
    x: &FoundationVector,
    benchmark: &Benchmark,
    scale: &FoundationScale,
    weights: &WeightVector,
) -> Result<SimilarityScore> {
    scale.check_vector(x.scores())?;
    scale.check_vector(benchmark.position().scores())?;
    if weights.len() != scale.len() {
        return Err(Error::DimensionMismatch {
            expected: scale.len(),
            got: weights.len(),
        });
    }

    let normalized = WeightVector::new(weights.weights().to_vec())?.normalized();
    let mut dissimilarity = 0.0;
    for (i, ((&xi, &bi), (w, dim))) in x
        .scores()
        .iter()
        .zip(benchmark.position().scores())
        .zip(normalized.iter().zip(scale.dims()))
        .enumerate()
    {
        let max_d = (bi - dim.min).max(dim.max - bi);
        if max_d <= 0.0 {
            // Unreachable for scales with min < max; kept as a guard.
            return Err(Error::DegenerateDimension { dim: i });
        }
        dissimilarity += w * (xi - bi).abs() / max_d;
    }
    SimilarityScore::try_new(1.0 - dissimilarity)
}

fn corner_similarity(
    x: &FoundationVector,
    position: [f64; 3],
    name: &str,
) -> Result<SimilarityScore> {
    let scale = FoundationScale::default();
    let benchmark = Benchmark::new(name, FoundationVector::new(position.to_vec(), &scale)?)?;
    similarity_fixed_range(x, &benchmark, &scale, &WeightVector::equal(3))
}

/// Capitalism similarity: `1 - sum(10 - s_i) / 30`, i.e. distance from the
/// (10, 10, 10) corner of the default scale.
pub fn capsi(x: &FoundationVector) -> Result<SimilarityScore> {
    corner_similarity(x, CAPITALISM_POSITION, "capitalism")
}

/// Communism similarity: `1 - sum(s_i) / 30`, i.e. distance from the
/// (0, 0, 0) corner of the default scale.
pub fn comsi(x: &FoundationVector) -> Result<SimilarityScore> {
    corner_similarity(x, COMMUNISM_POSITION, "communism")
}

/// Socialism similarity against the built-in Scandinavian benchmark,
/// using the canonical fixed-range (/30) normalization.
pub fn socsi(x: &FoundationVector) -> Result<SimilarityScore> {
    corner_similarity(x, SCANDINAVIAN_POSITION, "scandinavian_socialism")
}

/// Socialism similarity against a caller-supplied benchmark.
pub fn socsi_with(x: &FoundationVector, benchmark: &Benchmark) -> Result<SimilarityScore> {
    similarity_fixed_range(
        x,
        benchmark,
        &FoundationScale::default(),
        &WeightVector::equal(3),
    )
}
