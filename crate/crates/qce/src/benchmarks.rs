//! Built-in benchmark positions and the empirical derivation procedure
//! (componentwise averaging of a country cluster).

use crate::error::{Error, Result};
use crate::metrics::{
    Benchmark, FoundationScale, FoundationVector, CAPITALISM_POSITION, COMMUNISM_POSITION,
    SCANDINAVIAN_POSITION,
};

/// An ordered collection of uniquely named benchmarks sharing one scale.
/// Declaration order is meaningful: it fixes report column order and breaks
/// ties in the nearest-benchmark view.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSet {
    benchmarks: Vec<Benchmark>,
    scale: FoundationScale,
}

impl BenchmarkSet {
    pub fn new(benchmarks: Vec<Benchmark>, scale: FoundationScale) -> Result<Self> {
        for (i, b) in benchmarks.iter().enumerate() {
            scale.check_vector(b.position().scores())?;
            if benchmarks[..i].iter().any(|prev| prev.name() == b.name()) {
                return Err(Error::DuplicateBenchmarkName(b.name().to_string()));
            }
        }
        Ok(BenchmarkSet { benchmarks, scale })
    }

    pub fn benchmarks(&self) -> &[Benchmark] {
        &self.benchmarks
    }

    pub fn scale(&self) -> &FoundationScale {
        &self.scale
    }

    pub fn len(&self) -> usize {
        self.benchmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.benchmarks.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Benchmark> {
        self.benchmarks.iter().find(|b| b.name() == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.benchmarks.iter().map(Benchmark::name).collect()
    }

    /// Append a benchmark, keeping names unique.
    pub fn push(&mut self, benchmark: Benchmark) -> Result<()> {
        self.scale.check_vector(benchmark.position().scores())?;
        if self.get(benchmark.name()).is_some() {
            return Err(Error::DuplicateBenchmarkName(benchmark.name().to_string()));
        }
        self.benchmarks.push(benchmark);
        Ok(())
    }
}

/// The three standard benchmarks on the default scale: capitalism at
/// (10, 10, 10), communism at (0, 0, 0), and Scandinavian socialism at the
/// published Nordic average (7.83, 7.26, 5.28).
pub fn builtin_benchmarks() -> BenchmarkSet {
    let scale = FoundationScale::default();
    let mk = |name: &str, pos: [f64; 3]| {
        Benchmark::new(name, FoundationVector::new(pos.to_vec(), &scale).unwrap()).unwrap()
    };
    BenchmarkSet::new(
        vec![
            mk("capitalism", CAPITALISM_POSITION),
            mk("communism", COMMUNISM_POSITION),
            mk("scandinavian_socialism", SCANDINAVIAN_POSITION),
        ],
        scale,
    )
    .unwrap()
}

/// Derive a benchmark empirically as the componentwise arithmetic mean of a
/// cluster of country vectors. Full precision is retained; rounding happens
/// only at display time.
pub fn derive_benchmark(
    name: impl Into<String>,
    vectors: &[FoundationVector],
) -> Result<Benchmark> {
    let first = vectors.first().ok_or(Error::EmptyCluster)?;
    let dims = first.len();
    let mut sums = vec![0.0; dims];
    for v in vectors {
        if v.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: v.len(),
            });
        }
        for (acc, s) in sums.iter_mut().zip(v.scores()) {
            *acc += s;
        }
    }
    let n = vectors.len() as f64;
    let position: Vec<f64> = sums.into_iter().map(|s| s / n).collect();
    // Means of in-range scores stay within the componentwise envelope of
    // the inputs, so the position inherits their validity.
    Benchmark::new(name, FoundationVector::from_raw(position))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::WeightVector;
    use crate::round::fmt_dp;

    fn vec3(mo: f64, po: f64, sg: f64) -> FoundationVector {
        FoundationVector::three(mo, po, sg).unwrap()
    }

    #[test]
    fn builtin_set_has_exactly_the_three_standards() {
        let set = builtin_benchmarks();
        assert_eq!(
            set.names(),
            ["capitalism", "communism", "scandinavian_socialism"]
        );
        assert_eq!(
            set.get("capitalism").unwrap().position().scores(),
            &[10.0, 10.0, 10.0]
        );
        assert_eq!(
            set.get("communism").unwrap().position().scores(),
            &[0.0, 0.0, 0.0]
        );
        assert_eq!(
            set.get("scandinavian_socialism")
                .unwrap()
                .position()
                .scores(),
            &[7.83, 7.26, 5.28]
        );
    }

    #[test]
    fn nordic_rows_average_to_published_benchmark() {
        let rows = vec![
            vec3(8.39, 7.01, 4.77),
            vec3(7.69, 6.92, 5.17),
            vec3(7.79, 7.65, 6.35),
            vec3(7.50, 6.80, 5.43),
            vec3(7.78, 7.94, 4.67),
        ];
        let b = derive_benchmark("nordic", &rows).unwrap();
        let pos = b.position().scores();
        // Exact rational means of the five rows.
        assert!((pos[0] - 7.83).abs() < 1e-12);
        assert!((pos[1] - 7.264).abs() < 1e-12);
        assert!((pos[2] - 5.278).abs() < 1e-12);
        let display: Vec<String> = pos.iter().map(|v| fmt_dp(*v, 2)).collect();
        assert_eq!(display, ["7.83", "7.26", "5.28"]);
    }

    #[test]
    fn mean_of_one_is_the_vector_itself() {
        let v = vec3(1.5, 2.5, 3.5);
        let b = derive_benchmark("solo", std::slice::from_ref(&v)).unwrap();
        assert_eq!(b.position(), &v);
    }

    #[test]
    fn midpoint_of_opposite_corners() {
        let b = derive_benchmark("mid", &[vec3(0.0, 0.0, 0.0), vec3(10.0, 10.0, 10.0)]).unwrap();
        assert_eq!(b.position().scores(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn empty_cluster_is_an_error() {
        assert!(matches!(
            derive_benchmark("none", &[]),
            Err(Error::EmptyCluster)
        ));
    }

    #[test]
    fn duplicate_names_rejected() {
        let scale = FoundationScale::default();
        let a = Benchmark::new("x", vec3(1.0, 1.0, 1.0)).unwrap();
        let b = Benchmark::new("x", vec3(2.0, 2.0, 2.0)).unwrap();
        assert!(matches!(
            BenchmarkSet::new(vec![a, b], scale),
            Err(Error::DuplicateBenchmarkName(_))
        ));
    }

    #[test]
    fn derived_benchmark_scores_like_any_other() {
        let b = derive_benchmark("mid", &[vec3(4.0, 4.0, 4.0), vec3(6.0, 6.0, 6.0)]).unwrap();
        let s = crate::metrics::similarity_fixed_range(
            &vec3(5.0, 5.0, 5.0),
            &b,
            &FoundationScale::default(),
            &WeightVector::equal(3),
        )
        .unwrap();
        assert_eq!(s.value(), 1.0);
    }
}
