//! Property-based tests for the metric-space axioms and the invariants of
//! the similarity formulas.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qce::benchmarks::{derive_benchmark, BenchmarkSet};
use qce::classify::{score_all, top_n, NormalizationMode};
use qce::countries::CountryId;
use qce::metrics::{
    capsi, comsi, l1_distance, similarity_benchmark_relative, similarity_fixed_range, Benchmark,
    FoundationScale, FoundationVector, WeightVector,
};

const TOL: f64 = 1e-12;

fn score() -> impl Strategy<Value = f64> {
    0.0..=10.0f64
}

fn vector() -> impl Strategy<Value = FoundationVector> {
    prop::array::uniform3(score()).prop_map(|s| FoundationVector::three(s[0], s[1], s[2]).unwrap())
}

fn benchmark() -> impl Strategy<Value = Benchmark> {
    vector().prop_map(|v| Benchmark::new("b", v).unwrap())
}

fn weights() -> impl Strategy<Value = WeightVector> {
    prop::array::uniform3(0.0..=5.0f64)
        .prop_filter("positive sum", |w| w.iter().sum::<f64>() > 0.0)
        .prop_map(|w| WeightVector::new(w.to_vec()).unwrap())
}

fn corner() -> impl Strategy<Value = Benchmark> {
    prop::array::uniform3(prop::bool::ANY).prop_map(|bits| {
        let coords: Vec<f64> = bits.iter().map(|b| if *b { 10.0 } else { 0.0 }).collect();
        Benchmark::new(
            "corner",
            FoundationVector::three(coords[0], coords[1], coords[2]).unwrap(),
        )
        .unwrap()
    })
}

fn fixed(x: &FoundationVector, b: &Benchmark) -> f64 {
    similarity_fixed_range(x, b, &FoundationScale::default(), &WeightVector::equal(3))
        .unwrap()
        .value()
}

fn relative(x: &FoundationVector, b: &Benchmark) -> f64 {
    similarity_benchmark_relative(x, b, &FoundationScale::default(), &WeightVector::equal(3))
        .unwrap()
        .value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    // ------------------------------------------------------------------
    // Metric axioms for the L1 aggregate
    // ------------------------------------------------------------------

    #[test]
    fn l1_non_negative(x in vector(), y in vector()) {
        prop_assert!(l1_distance(&x, &y).unwrap().aggregate() >= 0.0);
    }

    #[test]
    fn l1_identity_of_indiscernibles(x in vector(), y in vector()) {
        let d = l1_distance(&x, &y).unwrap().aggregate();
        prop_assert_eq!(l1_distance(&x, &x).unwrap().aggregate(), 0.0);
        if d == 0.0 {
            prop_assert_eq!(x.scores(), y.scores());
        }
    }

    #[test]
    fn l1_symmetry_exact(x in vector(), y in vector()) {
        prop_assert_eq!(
            l1_distance(&x, &y).unwrap().aggregate(),
            l1_distance(&y, &x).unwrap().aggregate()
        );
    }

    #[test]
    fn l1_triangle_inequality(x in vector(), y in vector(), z in vector()) {
        let xz = l1_distance(&x, &z).unwrap().aggregate();
        let xy = l1_distance(&x, &y).unwrap().aggregate();
        let yz = l1_distance(&y, &z).unwrap().aggregate();
        prop_assert!(xz <= xy + yz + TOL, "d(x,z)={xz} > d(x,y)+d(y,z)={}", xy + yz);
    }

    #[test]
    fn l1_aggregate_is_sum_of_dimensions(x in vector(), y in vector()) {
        let d = l1_distance(&x, &y).unwrap();
        let sum: f64 = d.per_dim().iter().sum();
        prop_assert!((d.aggregate() - sum).abs() <= TOL);
    }

    // ------------------------------------------------------------------
    // Similarity bounds and identities
    // ------------------------------------------------------------------

    #[test]
    fn similarities_stay_in_unit_interval(x in vector(), b in benchmark(), w in weights()) {
        let scale = FoundationScale::default();
        let f = similarity_fixed_range(&x, &b, &scale, &w).unwrap().value();
        let r = similarity_benchmark_relative(&x, &b, &scale, &w).unwrap().value();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn complement_identity(x in vector()) {
        let total = capsi(&x).unwrap().value() + comsi(&x).unwrap().value();
        prop_assert!((total - 1.0).abs() < TOL);
    }

    #[test]
    fn self_similarity_is_exactly_one(b in benchmark()) {
        prop_assert_eq!(fixed(b.position(), &b), 1.0);
        prop_assert_eq!(relative(b.position(), &b), 1.0);
    }

    #[test]
    fn moving_toward_benchmark_never_decreases_similarity(
        x in vector(),
        b in benchmark(),
        dim in 0usize..3,
        t in 0.0..=1.0f64,
    ) {
        // Shrink the deviation in one dimension, holding the others fixed.
        let mut closer = x.scores().to_vec();
        let bi = b.position().scores()[dim];
        closer[dim] = bi + t * (closer[dim] - bi);
        let closer = FoundationVector::new(closer, &FoundationScale::default()).unwrap();
        prop_assert!(fixed(&closer, &b) >= fixed(&x, &b) - TOL);
        prop_assert!(relative(&closer, &b) >= relative(&x, &b) - TOL);
    }

    #[test]
    fn corner_benchmarks_make_both_modes_agree(x in vector(), b in corner()) {
        prop_assert!((fixed(&x, &b) - relative(&x, &b)).abs() < TOL);
    }

    #[test]
    fn permutation_symmetry(x in vector(), b in benchmark(), perm in 0usize..6) {
        let orders: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let order = orders[perm];
        let permute = |v: &FoundationVector| {
            let s = v.scores();
            FoundationVector::three(s[order[0]], s[order[1]], s[order[2]]).unwrap()
        };
        let pb = Benchmark::new("b", permute(b.position())).unwrap();
        prop_assert!((fixed(&permute(&x), &pb) - fixed(&x, &b)).abs() < TOL);
        prop_assert!((relative(&permute(&x), &pb) - relative(&x, &b)).abs() < TOL);
    }

    #[test]
    fn equal_weights_reproduce_unweighted_formula(x in vector(), b in benchmark()) {
        let d = l1_distance(&x, b.position()).unwrap().aggregate();
        prop_assert!((fixed(&x, &b) - (1.0 - d / 30.0)).abs() < TOL);
    }

    #[test]
    fn scale_covariance(x in vector(), b in benchmark(), c in 0.1..=10.0f64) {
        let scaled_scale = FoundationScale::uniform(3, 0.0, 10.0 * c).unwrap();
        let scaled = |v: &FoundationVector| {
            FoundationVector::new(v.scores().iter().map(|s| s * c).collect(), &scaled_scale)
                .unwrap()
        };
        let sb = Benchmark::new("b", scaled(b.position())).unwrap();
        let original = fixed(&x, &b);
        let rescaled = similarity_fixed_range(
            &scaled(&x),
            &sb,
            &scaled_scale,
            &WeightVector::equal(3),
        )
        .unwrap()
        .value();
        prop_assert!((original - rescaled).abs() < 1e-9);
    }

    // ------------------------------------------------------------------
    // Benchmark derivation
    // ------------------------------------------------------------------

    #[test]
    fn derived_position_within_envelope(vs in prop::collection::vec(vector(), 1..8)) {
        let b = derive_benchmark("d", &vs).unwrap();
        for (i, p) in b.position().scores().iter().enumerate() {
            let lo = vs.iter().map(|v| v.scores()[i]).fold(f64::INFINITY, f64::min);
            let hi = vs.iter().map(|v| v.scores()[i]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(*p >= lo - TOL && *p <= hi + TOL);
        }
    }

    #[test]
    fn derivation_is_permutation_invariant(vs in prop::collection::vec(vector(), 2..8)) {
        let forward = derive_benchmark("d", &vs).unwrap();
        let mut reversed = vs.clone();
        reversed.reverse();
        let backward = derive_benchmark("d", &reversed).unwrap();
        for (a, b) in forward
            .position()
            .scores()
            .iter()
            .zip(backward.position().scores())
        {
            prop_assert!((a - b).abs() < TOL);
        }
    }

    #[test]
    fn mean_of_copies_is_idempotent(v in vector(), n in 1usize..6) {
        let b = derive_benchmark("d", &vec![v.clone(); n]).unwrap();
        for (a, expected) in b.position().scores().iter().zip(v.scores()) {
            prop_assert!((a - expected).abs() < TOL);
        }
    }

    // ------------------------------------------------------------------
    // Report invariants
    // ------------------------------------------------------------------

    #[test]
    fn report_complement_identity_and_weight_scaling(
        entries in prop::collection::btree_map(0u32..26, vector(), 1..8),
        c in 0.5..=4.0f64,
    ) {
        let vectors: BTreeMap<CountryId, FoundationVector> = entries
            .into_iter()
            .map(|(k, v)| {
                let letter = (b'A' + k as u8) as char;
                (CountryId::new(&format!("{letter}{letter}{letter}")).unwrap(), v)
            })
            .collect();
        let set = qce::builtin_benchmarks();
        let base = score_all(&vectors, &set, NormalizationMode::FixedRange, &WeightVector::equal(3))
            .unwrap();
        for id in vectors.keys() {
            let cap = base.score(id, "capitalism").unwrap().value();
            let com = base.score(id, "communism").unwrap().value();
            prop_assert!((cap + com - 1.0).abs() < TOL);
        }

        // Scaling all weights by a positive constant changes nothing.
        let scaled = WeightVector::new(vec![c, c, c]).unwrap();
        let rescored = score_all(&vectors, &set, NormalizationMode::FixedRange, &scaled).unwrap();
        for id in vectors.keys() {
            for name in set.names() {
                prop_assert!(
                    (base.score(id, name).unwrap().value()
                        - rescored.score(id, name).unwrap().value())
                    .abs()
                        < TOL
                );
            }
        }

        // Recomputing a table from the same report is byte-stable.
        let t1 = top_n(&base, "capitalism", 5).unwrap();
        let t2 = top_n(&base, "capitalism", 5).unwrap();
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        t1.write_csv(&mut b1, 2).unwrap();
        t2.write_csv(&mut b2, 2).unwrap();
        prop_assert_eq!(b1, b2);
    }

    #[test]
    fn nearest_benchmark_invariant_under_order_preserving_transforms(
        rows in prop::collection::vec(prop::array::uniform3(0.0..=1.0f64), 1..10),
    ) {
        // Squaring preserves order (and exact ties) on [0, 1].
        let build = |transform: fn(f64) -> f64| {
            let mut csv = String::from("country_id,country_name,a,b,c\n");
            for (i, row) in rows.iter().enumerate() {
                let code = format!("A{}{}", (b'A' + (i / 26) as u8) as char,
                                   (b'A' + (i % 26) as u8) as char);
                csv.push_str(&format!(
                    "{code},{code},{},{},{}\n",
                    transform(row[0]),
                    transform(row[1]),
                    transform(row[2])
                ));
            }
            qce::ClassificationReport::from_scores_csv(csv.as_bytes()).unwrap()
        };
        let original = build(|s| s);
        let transformed = build(|s| s * s);
        for id in original.rows().keys() {
            prop_assert_eq!(
                qce::nearest_benchmark(&original, id).unwrap(),
                qce::nearest_benchmark(&transformed, id).unwrap()
            );
        }
    }
}

#[test]
fn benchmark_set_rejects_out_of_scale_positions() {
    let scale = FoundationScale::default();
    let narrow = FoundationScale::uniform(3, 0.0, 20.0).unwrap();
    let wild = FoundationVector::new(vec![15.0, 1.0, 1.0], &narrow).unwrap();
    let b = Benchmark::new("wild", wild).unwrap();
    assert!(BenchmarkSet::new(vec![b], scale).is_err());
}
