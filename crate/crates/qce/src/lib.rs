//! Distance-based similarity indices for comparing countries' economic
//! systems.
//!
//! Economic systems are modeled as points in a score space spanned by three
//! institutional foundations (market organization, private ownership, small
//! government, each on a 0-10 scale). A country's similarity to a reference
//! system — capitalism at (10,10,10), communism at (0,0,0), Scandinavian
//! socialism at the empirical Nordic average (7.83,7.26,5.28), or any custom
//! benchmark — is one minus a normalized Manhattan distance from that
//! benchmark, a value in [0,1].
//!
//! The crate covers the full batch pipeline:
//!
//! * [`ingest`] — parse a source CSV into a country/year panel with
//!   configurable column mapping and country-name normalization;
//! * [`benchmarks`] — built-in benchmark positions plus empirical
//!   derivation by cluster averaging;
//! * [`metrics`] — the L1 metric and the similarity formulas;
//! * [`classify`] — score every country against every benchmark,
//!   deterministic top-N rankings;
//! * [`geo`] — choropleth-ready exports: scores CSV and GeoJSON property
//!   merge;
//! * [`config`] / [`pipeline`] — run configuration and orchestration for
//!   the `qce` binary.

pub mod benchmarks;
pub mod classify;
pub mod config;
pub mod countries;
pub mod error;
pub mod geo;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod round;

pub use benchmarks::{builtin_benchmarks, derive_benchmark, BenchmarkSet};
pub use classify::{
    nearest_benchmark, score_all, top_n, ClassificationReport, NormalizationMode, RankTable,
};
pub use countries::{normalize_country_name, CountryId, NameOverrides, Resolution};
pub use error::{Error, Result};
pub use geo::{export_scores_csv, merge_geojson, GeoJoinSpec, MergeOutcome};
pub use ingest::{average_period, parse_dataset, ColumnMapping, CountryPanel};
pub use metrics::{
    capsi, comsi, l1_distance, similarity_benchmark_relative, similarity_fixed_range, socsi,
    socsi_with, Benchmark, DimensionDistances, Foundation, FoundationScale, FoundationVector,
    SimilarityScore, WeightVector,
};
