//! End-to-end orchestration shared by the command-line surface and the
//! integration tests: panel -> period averages -> benchmark scores.

use crate::benchmarks::{derive_benchmark, BenchmarkSet};
use crate::classify::{score_all, score_then_average, ClassificationReport, NormalizationMode};
use crate::countries::CountryId;
use crate::error::{Error, Result};
use crate::ingest::{average_period, CountryPanel, Exclusion};
use crate::metrics::{Benchmark, WeightVector};

/// Whether the pipeline averages foundation scores over the window and then
/// scores the average (canonical), or scores each year and averages the
/// per-year index values. The two differ only through the absolute values
/// in the distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AvgOrder {
    #[default]
    AverageThenScore,
    ScoreThenAverage,
}

impl AvgOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            AvgOrder::AverageThenScore => "average-then-score",
            AvgOrder::ScoreThenAverage => "score-then-average",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "average-then-score" => Ok(AvgOrder::AverageThenScore),
            "score-then-average" => Ok(AvgOrder::ScoreThenAverage),
            other => Err(Error::Config(format!(
                "unknown averaging order {other:?}; expected \"average-then-score\" or \
                 \"score-then-average\""
            ))),
        }
    }
}

/// Score a panel against a benchmark set over a year window.
pub fn score_panel(
    panel: &CountryPanel,
    window: (i32, i32),
    min_years: usize,
    set: &BenchmarkSet,
    mode: NormalizationMode,
    order: AvgOrder,
    weights: &WeightVector,
) -> Result<(ClassificationReport, Vec<Exclusion>)> {
    match order {
        AvgOrder::AverageThenScore => {
            let averages = average_period(panel, window.0, window.1, min_years)?;
            let report = score_all(&averages.vectors, set, mode, weights)?.with_window(window);
            Ok((report, averages.excluded))
        }
        AvgOrder::ScoreThenAverage => {
            score_then_average(panel, window.0, window.1, min_years, set, mode, weights)
        }
    }
}

/// Derive a benchmark empirically from a panel: period-average each listed
/// country, then average the country vectors. Every listed country must
/// have a usable average in the window.
pub fn derive_benchmark_from_panel(
    panel: &CountryPanel,
    name: &str,
    countries: &[CountryId],
    window: (i32, i32),
    min_years: usize,
) -> Result<Benchmark> {
    if countries.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let averages = average_period(panel, window.0, window.1, min_years)?;
    let mut vectors = Vec::with_capacity(countries.len());
    for id in countries {
        let vector = averages.vectors.get(id).ok_or_else(|| {
            Error::Config(format!(
                "country {id} has no usable records in window {}-{}",
                window.0, window.1
            ))
        })?;
        vectors.push(vector.clone());
    }
    derive_benchmark(name, &vectors)
}
