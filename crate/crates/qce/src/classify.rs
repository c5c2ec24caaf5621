//! Scoring every country against every benchmark, and deterministic
//! rankings derived from the scores.

use std::collections::BTreeMap;
use std::io;

use crate::benchmarks::BenchmarkSet;
use crate::countries::{display_name_or_code, CountryId};
use crate::error::{Error, Result};
use crate::ingest::{CountryPanel, Exclusion};
use crate::metrics::{
    similarity_benchmark_relative, similarity_fixed_range, FoundationVector, SimilarityScore,
    WeightVector,
};
use crate::round::fmt_dp;

/// Which normalization the similarity formulas use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    /// Divide summed distances by the summed range widths (canonical).
    #[default]
    FixedRange,
    /// Divide each dimension's distance by the largest distance attainable
    /// from the benchmark in that dimension.
    BenchmarkRelative,
}

impl NormalizationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormalizationMode::FixedRange => "fixed-range",
            NormalizationMode::BenchmarkRelative => "benchmark-relative",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed-range" => Ok(NormalizationMode::FixedRange),
            "benchmark-relative" => Ok(NormalizationMode::BenchmarkRelative),
            other => Err(Error::Config(format!(
                "unknown mode {other:?}; expected \"fixed-range\" or \"benchmark-relative\""
            ))),
        }
    }

    fn apply(
        self,
        x: &FoundationVector,
        benchmark: &crate::metrics::Benchmark,
        scale: &crate::metrics::FoundationScale,
        weights: &WeightVector,
    ) -> Result<SimilarityScore> {
        match self {
            NormalizationMode::FixedRange => similarity_fixed_range(x, benchmark, scale, weights),
            NormalizationMode::BenchmarkRelative => {
                similarity_benchmark_relative(x, benchmark, scale, weights)
            }
        }
    }
}

/// How the report was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub window: Option<(i32, i32)>,
    pub mode: NormalizationMode,
    pub weights: Vec<f64>,
    pub benchmark_set: String,
}

impl ReportMeta {
    fn unspecified(benchmark_set: String) -> Self {
        ReportMeta {
            window: None,
            mode: NormalizationMode::FixedRange,
            weights: Vec::new(),
            benchmark_set,
        }
    }
}

/// Per-country similarity scores against every benchmark in a set.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    benchmark_names: Vec<String>,
    rows: BTreeMap<CountryId, Vec<SimilarityScore>>,
    meta: ReportMeta,
}

impl ClassificationReport {
    pub fn benchmark_names(&self) -> &[String] {
        &self.benchmark_names
    }

    pub fn rows(&self) -> &BTreeMap<CountryId, Vec<SimilarityScore>> {
        &self.rows
    }

    pub fn meta(&self) -> &ReportMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn score(&self, country: &CountryId, benchmark: &str) -> Option<SimilarityScore> {
        let idx = self.benchmark_names.iter().position(|n| n == benchmark)?;
        self.rows.get(country).map(|scores| scores[idx])
    }

    /// Record the averaging window the scores came from.
    pub fn with_window(mut self, window: (i32, i32)) -> Self {
        self.meta.window = Some(window);
        self
    }

    fn benchmark_index(&self, name: &str) -> Result<usize> {
        self.benchmark_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownBenchmark {
                name: name.to_string(),
                known: self.benchmark_names.join(", "),
            })
    }

    /// Load a report from a scores CSV previously written by
    /// [`crate::geo::export_scores_csv`].
    pub fn from_scores_csv(reader: impl io::Read) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv_reader.headers()?.clone();
        let mut iter = headers.iter();
        let (Some("country_id"), Some("country_name")) = (iter.next(), iter.next()) else {
            return Err(Error::Config(
                "scores CSV must start with country_id,country_name columns".to_string(),
            ));
        };
        let benchmark_names: Vec<String> = iter.map(str::to_string).collect();
        if benchmark_names.is_empty() {
            return Err(Error::Config(
                "scores CSV has no benchmark columns".to_string(),
            ));
        }

        let mut rows = BTreeMap::new();
        for row in csv_reader.records() {
            let row = row?;
            let id = CountryId::new(row.get(0).unwrap_or_default())?;
            let mut scores = Vec::with_capacity(benchmark_names.len());
            for (i, name) in benchmark_names.iter().enumerate() {
                let cell = row.get(i + 2).unwrap_or_default();
                let value: f64 = cell
                    .parse()
                    .map_err(|_| Error::Config(format!("bad score {cell:?} for {id}/{name}")))?;
                scores.push(SimilarityScore::try_new(value)?);
            }
            rows.insert(id, scores);
        }
        let meta = ReportMeta::unspecified(benchmark_names.join(","));
        Ok(ClassificationReport {
            benchmark_names,
            rows,
            meta,
        })
    }
}

/// Score every country vector against every benchmark in the set.
/// A pure function of its inputs: same vectors, same report.
pub fn score_all(
    vectors: &BTreeMap<CountryId, FoundationVector>,
    set: &BenchmarkSet,
    mode: NormalizationMode,
    weights: &WeightVector,
) -> Result<ClassificationReport> {
    let mut rows = BTreeMap::new();
    for (id, vector) in vectors {
        let mut scores = Vec::with_capacity(set.len());
        for benchmark in set.benchmarks() {
            scores.push(mode.apply(vector, benchmark, set.scale(), weights)?);
        }
        rows.insert(id.clone(), scores);
    }
    Ok(ClassificationReport {
        benchmark_names: set
            .benchmarks()
            .iter()
            .map(|b| b.name().to_string())
            .collect(),
        rows,
        meta: ReportMeta {
            window: None,
            mode,
            weights: weights.weights().to_vec(),
            benchmark_set: set.names().join(","),
        },
    })
}

/// Alternative pipeline order: score each complete in-window record, then
/// average the per-year scores. Provided to probe how much the order of
/// averaging matters; the canonical pipeline averages first.
pub fn score_then_average(
    panel: &CountryPanel,
    start_year: i32,
    end_year: i32,
    min_years: usize,
    set: &BenchmarkSet,
    mode: NormalizationMode,
    weights: &WeightVector,
) -> Result<(ClassificationReport, Vec<Exclusion>)> {
    if panel.is_empty() {
        return Err(Error::EmptyPanel);
    }
    if start_year > end_year {
        return Err(Error::InvalidWindow {
            start: start_year,
            end: end_year,
        });
    }
    if min_years == 0 {
        return Err(Error::Config("min_years must be at least 1".to_string()));
    }

    let mut sums: BTreeMap<CountryId, (Vec<f64>, usize)> = BTreeMap::new();
    for ((id, year), scores) in panel.records() {
        let entry = sums
            .entry(id.clone())
            .or_insert_with(|| (vec![0.0; set.len()], 0));
        if *year < start_year || *year > end_year {
            continue;
        }
        let Some(vector) = scores.complete() else {
            continue;
        };
        for (acc, benchmark) in entry.0.iter_mut().zip(set.benchmarks()) {
            *acc += mode.apply(vector, benchmark, set.scale(), weights)?.value();
        }
        entry.1 += 1;
    }

    let mut rows = BTreeMap::new();
    let mut excluded = Vec::new();
    for (id, (sum, count)) in sums {
        if count < min_years {
            excluded.push(Exclusion {
                reason: format!(
                    "only {count} complete record(s) in window {start_year}-{end_year} \
                     (minimum {min_years})"
                ),
                id,
            });
            continue;
        }
        let scores: Result<Vec<SimilarityScore>> = sum
            .into_iter()
            .map(|s| SimilarityScore::try_new(s / count as f64))
            .collect();
        rows.insert(id, scores?);
    }

    let report = ClassificationReport {
        benchmark_names: set
            .benchmarks()
            .iter()
            .map(|b| b.name().to_string())
            .collect(),
        rows,
        meta: ReportMeta {
            window: Some((start_year, end_year)),
            mode,
            weights: weights.weights().to_vec(),
            benchmark_set: set.names().join(","),
        },
    };
    Ok((report, excluded))
}

/// One ranked row of a [`RankTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub rank: usize,
    pub id: CountryId,
    pub name: String,
    pub score: f64,
}

/// Countries ordered by similarity to one benchmark, highest first.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    benchmark: String,
    rows: Vec<RankRow>,
}

impl RankTable {
    pub fn benchmark(&self) -> &str {
        &self.benchmark
    }

    pub fn rows(&self) -> &[RankRow] {
        &self.rows
    }

    /// CSV form: `rank,country_id,country_name,score`.
    pub fn write_csv(&self, writer: impl io::Write, dp: u8) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["rank", "country_id", "country_name", "score"])?;
        for row in &self.rows {
            w.write_record([
                row.rank.to_string(),
                row.id.to_string(),
                row.name.clone(),
                fmt_dp(row.score, dp),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned plain-text table for terminal display.
    pub fn to_text(&self, dp: u8) -> String {
        let mut out = String::new();
        let name_width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .chain(["country".len()])
            .max()
            .unwrap_or(7);
        let rank_width = self.rows.len().to_string().len().max(4);
        out.push_str(&format!(
            "{:>rank_width$}  {:3}  {:name_width$}  {}\n",
            "rank", "id", "country", self.benchmark
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:>rank_width$}  {:3}  {:name_width$}  {}\n",
                row.rank,
                row.id.as_str(),
                row.name,
                fmt_dp(row.score, dp)
            ));
        }
        out
    }
}

/// The `n` highest-scoring countries for one benchmark. Ordering is score
/// descending with ties broken by country code ascending, so identical
/// reports always serialize identically.
pub fn top_n(report: &ClassificationReport, benchmark: &str, n: usize) -> Result<RankTable> {
    let idx = report.benchmark_index(benchmark)?;
    let mut entries: Vec<(&CountryId, f64)> = report
        .rows
        .iter()
        .map(|(id, scores)| (id, scores[idx].value()))
        .collect();
    entries.sort_by(|(id_a, score_a), (id_b, score_b)| {
        score_b.total_cmp(score_a).then_with(|| id_a.cmp(id_b))
    });
    entries.truncate(n);
    let rows = entries
        .into_iter()
        .enumerate()
        .map(|(i, (id, score))| RankRow {
            rank: i + 1,
            id: id.clone(),
            name: display_name_or_code(id),
            score,
        })
        .collect();
    Ok(RankTable {
        benchmark: benchmark.to_string(),
        rows,
    })
}

/// The benchmark a country scores highest against; ties go to the earliest
/// declared benchmark. A derived categorical view over the continuous
/// scores, not a replacement for them.
pub fn nearest_benchmark<'r>(
    report: &'r ClassificationReport,
    country: &CountryId,
) -> Result<&'r str> {
    let scores = report
        .rows
        .get(country)
        .ok_or_else(|| Error::UnknownCountry(country.to_string()))?;
    let mut best = 0;
    for (i, score) in scores.iter().enumerate().skip(1) {
        if score.value() > scores[best].value() {
            best = i;
        }
    }
    Ok(&report.benchmark_names[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::builtin_benchmarks;

    fn report_from(pairs: &[(&str, f64, f64, f64)]) -> ClassificationReport {
        let mut vectors = BTreeMap::new();
        for (id, mo, po, sg) in pairs {
            vectors.insert(
                CountryId::new(id).unwrap(),
                FoundationVector::three(*mo, *po, *sg).unwrap(),
            );
        }
        score_all(
            &vectors,
            &builtin_benchmarks(),
            NormalizationMode::FixedRange,
            &WeightVector::equal(3),
        )
        .unwrap()
    }

    #[test]
    fn capitalist_corner_scores() {
        let report = report_from(&[("USA", 10.0, 10.0, 10.0)]);
        let id = CountryId::new("USA").unwrap();
        assert_eq!(report.score(&id, "capitalism").unwrap().value(), 1.0);
        assert_eq!(report.score(&id, "communism").unwrap().value(), 0.0);
        // 1 - (2.17 + 2.74 + 4.72) / 30
        let soc = report.score(&id, "scandinavian_socialism").unwrap().value();
        assert!((soc - 0.679).abs() < 1e-12);
    }

    #[test]
    fn mixed_vector_scores() {
        let report = report_from(&[("USA", 8.2, 8.2, 8.2)]);
        let id = CountryId::new("USA").unwrap();
        assert!((report.score(&id, "capitalism").unwrap().value() - 0.82).abs() < 1e-12);
        assert!((report.score(&id, "communism").unwrap().value() - 0.18).abs() < 1e-12);
    }

    #[test]
    fn empty_map_gives_empty_report() {
        let report = score_all(
            &BTreeMap::new(),
            &builtin_benchmarks(),
            NormalizationMode::FixedRange,
            &WeightVector::equal(3),
        )
        .unwrap();
        assert!(report.is_empty());
    }

    #[test]
    fn top_n_orders_and_truncates() {
        let report = report_from(&[
            ("AAA", 9.0, 9.0, 9.0),
            ("BBB", 8.0, 8.0, 8.0),
            ("CCC", 7.0, 7.0, 7.0),
        ]);
        let table = top_n(&report, "capitalism", 2).unwrap();
        let ids: Vec<&str> = table.rows().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["AAA", "BBB"]);
        assert_eq!(table.rows()[0].rank, 1);
        assert_eq!(table.rows()[1].rank, 2);
    }

    #[test]
    fn top_n_breaks_ties_lexicographically() {
        let report = report_from(&[("BBB", 9.0, 9.0, 9.0), ("AAA", 9.0, 9.0, 9.0)]);
        let table = top_n(&report, "capitalism", 2).unwrap();
        let ids: Vec<&str> = table.rows().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["AAA", "BBB"]);
    }

    #[test]
    fn top_n_larger_than_report_ranks_everything() {
        let report = report_from(&[("AAA", 9.0, 9.0, 9.0)]);
        let table = top_n(&report, "capitalism", 20).unwrap();
        assert_eq!(table.rows().len(), 1);
    }

    #[test]
    fn top_n_unknown_benchmark() {
        let report = report_from(&[("AAA", 9.0, 9.0, 9.0)]);
        let err = top_n(&report, "feudalism", 5).unwrap_err();
        match err {
            Error::UnknownBenchmark { name, known } => {
                assert_eq!(name, "feudalism");
                assert!(known.contains("capitalism"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nearest_benchmark_argmax_and_ties() {
        // The published US triple: capitalism 0.82, communism 0.18,
        // scandinavian 0.85 -> scandinavian wins the argmax.
        let report = report_from(&[("USA", 8.2, 8.2, 8.2)]);
        let id = CountryId::new("USA").unwrap();
        let soc = report.score(&id, "scandinavian_socialism").unwrap().value();
        assert!(soc > 0.82);
        assert_eq!(
            nearest_benchmark(&report, &id).unwrap(),
            "scandinavian_socialism"
        );

        // Opposite corner: capitalism wins outright.
        let cap = report_from(&[("CHE", 10.0, 10.0, 10.0)]);
        assert_eq!(
            nearest_benchmark(&cap, &CountryId::new("CHE").unwrap()).unwrap(),
            "capitalism"
        );

        // Exact ties fall back to declaration order.
        let scale = crate::metrics::FoundationScale::default();
        let mk = |name: &str, v: f64| {
            crate::metrics::Benchmark::new(
                name,
                FoundationVector::new(vec![v, v, v], &scale).unwrap(),
            )
            .unwrap()
        };
        let set =
            crate::benchmarks::BenchmarkSet::new(vec![mk("low", 4.0), mk("high", 6.0)], scale)
                .unwrap();
        let mut vectors = BTreeMap::new();
        let mid_id = CountryId::new("MID").unwrap();
        vectors.insert(
            mid_id.clone(),
            FoundationVector::three(5.0, 5.0, 5.0).unwrap(),
        );
        let tied = score_all(
            &vectors,
            &set,
            NormalizationMode::FixedRange,
            &WeightVector::equal(3),
        )
        .unwrap();
        assert_eq!(
            tied.score(&mid_id, "low").unwrap().value(),
            tied.score(&mid_id, "high").unwrap().value()
        );
        assert_eq!(nearest_benchmark(&tied, &mid_id).unwrap(), "low");
    }

    #[test]
    fn nearest_benchmark_unknown_country() {
        let report = report_from(&[("AAA", 9.0, 9.0, 9.0)]);
        assert!(matches!(
            nearest_benchmark(&report, &CountryId::new("ZZZ").unwrap()),
            Err(Error::UnknownCountry(_))
        ));
    }

    #[test]
    fn rank_table_text_is_aligned() {
        let report = report_from(&[("DNK", 8.39, 7.01, 4.77), ("FIN", 7.69, 6.92, 5.17)]);
        let table = top_n(&report, "scandinavian_socialism", 2).unwrap();
        let text = table.to_text(2);
        assert!(text.contains("FIN"));
        assert!(text.lines().count() == 3);
    }

    #[test]
    fn scores_csv_round_trip() {
        let report = report_from(&[("DNK", 8.39, 7.01, 4.77), ("FIN", 7.69, 6.92, 5.17)]);
        let mut buf = Vec::new();
        crate::geo::export_scores_csv(&report, &mut buf, 6).unwrap();
        let loaded = ClassificationReport::from_scores_csv(buf.as_slice()).unwrap();
        assert_eq!(loaded.benchmark_names(), report.benchmark_names());
        assert_eq!(loaded.len(), report.len());
        for (id, scores) in report.rows() {
            let reloaded = loaded.rows().get(id).unwrap();
            for (a, b) in scores.iter().zip(reloaded) {
                assert!((a.value() - b.value()).abs() < 1e-6);
            }
        }
    }
}
