//! Run configuration: one TOML file, every field overridable by a command
//! flag (flags win over the file, the file wins over built-in defaults).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::benchmarks::{builtin_benchmarks, BenchmarkSet};
use crate::classify::NormalizationMode;
use crate::countries::NameOverrides;
use crate::error::{Error, Result};
use crate::ingest::{ColumnMapping, FoundationColumn};
use crate::metrics::{Benchmark, FoundationScale, FoundationVector, WeightVector};
use crate::pipeline::AvgOrder;

/// Environment variable naming the default config file.
pub const CONFIG_ENV_VAR: &str = "QCE_CONFIG";

pub const DEFAULT_WINDOW_START: i32 = 1995;
pub const DEFAULT_WINDOW_END: i32 = 2020;
pub const DEFAULT_MIN_YEARS: usize = 1;
pub const DEFAULT_ROUND_DP: u8 = 2;

/// The raw, partial configuration as read from TOML or assembled from
/// flags. All fields optional; see [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dataset: Option<PathBuf>,
    /// "fixed-range" (default) or "benchmark-relative".
    pub mode: Option<String>,
    /// "average-then-score" (default) or "score-then-average".
    pub avg_order: Option<String>,
    pub weights: Option<Vec<f64>>,
    pub round_dp: Option<u8>,
    pub use_builtin_benchmarks: Option<bool>,
    pub window: Option<WindowConfig>,
    pub mapping: Option<MappingConfig>,
    /// Raw dataset name -> alpha-3 code.
    pub overrides: Option<BTreeMap<String, String>>,
    #[serde(default, rename = "benchmark", skip_serializing_if = "Vec::is_empty")]
    pub benchmarks: Vec<BenchmarkConfig>,
    pub output: Option<OutputConfig>,
    pub geo: Option<GeoConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub start: Option<i32>,
    pub end: Option<i32>,
    pub min_years: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MappingConfig {
    pub country: Option<String>,
    pub year: Option<String>,
    pub mo: Option<ColumnConfig>,
    pub po: Option<ColumnConfig>,
    pub sg: Option<ColumnConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnConfig {
    pub column: String,
    pub invert: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub name: String,
    pub position: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub panel: Option<PathBuf>,
    pub exclusions: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub geojson: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeoConfig {
    pub key_property: Option<String>,
    pub prefix: Option<String>,
    pub breaks: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Layer `over` on top of `self`: any field set in `over` wins.
    pub fn overlay(mut self, over: RunConfig) -> RunConfig {
        self.dataset = over.dataset.or(self.dataset);
        self.mode = over.mode.or(self.mode);
        self.avg_order = over.avg_order.or(self.avg_order);
        self.weights = over.weights.or(self.weights);
        self.round_dp = over.round_dp.or(self.round_dp);
        self.use_builtin_benchmarks = over.use_builtin_benchmarks.or(self.use_builtin_benchmarks);
        self.window = match (self.window, over.window) {
            (Some(base), Some(over)) => Some(WindowConfig {
                start: over.start.or(base.start),
                end: over.end.or(base.end),
                min_years: over.min_years.or(base.min_years),
            }),
            (base, over) => over.or(base),
        };
        self.mapping = match (self.mapping, over.mapping) {
            (Some(base), Some(over)) => Some(MappingConfig {
                country: over.country.or(base.country),
                year: over.year.or(base.year),
                mo: over.mo.or(base.mo),
                po: over.po.or(base.po),
                sg: over.sg.or(base.sg),
            }),
            (base, over) => over.or(base),
        };
        self.overrides = over.overrides.or(self.overrides);
        if !over.benchmarks.is_empty() {
            self.benchmarks = over.benchmarks;
        }
        self.output = match (self.output, over.output) {
            (Some(base), Some(over)) => Some(OutputConfig {
                panel: over.panel.or(base.panel),
                exclusions: over.exclusions.or(base.exclusions),
                scores: over.scores.or(base.scores),
                geojson: over.geojson.or(base.geojson),
            }),
            (base, over) => over.or(base),
        };
        self.geo = match (self.geo, over.geo) {
            (Some(base), Some(over)) => Some(GeoConfig {
                key_property: over.key_property.or(base.key_property),
                prefix: over.prefix.or(base.prefix),
                breaks: over.breaks.or(base.breaks),
            }),
            (base, over) => over.or(base),
        };
        self
    }

    /// Validate everything and fill defaults, producing the concrete
    /// configuration the pipeline runs with.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let mode = match &self.mode {
            Some(s) => NormalizationMode::parse(s)?,
            None => NormalizationMode::FixedRange,
        };
        let avg_order = match &self.avg_order {
            Some(s) => AvgOrder::parse(s)?,
            None => AvgOrder::AverageThenScore,
        };

        let weights = match &self.weights {
            Some(values) => {
                let w = WeightVector::new(values.clone())?;
                if w.len() != 3 {
                    return Err(Error::Config(format!(
                        "weights must have 3 entries, got {}",
                        w.len()
                    )));
                }
                w
            }
            None => WeightVector::equal(3),
        };

        let window = self.window.clone().unwrap_or_default();
        let start = window.start.unwrap_or(DEFAULT_WINDOW_START);
        let end = window.end.unwrap_or(DEFAULT_WINDOW_END);
        let min_years = window.min_years.unwrap_or(DEFAULT_MIN_YEARS);
        if start > end {
            return Err(Error::InvalidWindow { start, end });
        }
        if min_years == 0 {
            return Err(Error::Config("min_years must be at least 1".to_string()));
        }

        let mapping = self.build_mapping();
        mapping.validate()?;

        let overrides = NameOverrides::new(self.overrides.clone().unwrap_or_default())?;

        let scale = FoundationScale::default();
        let mut set = if self.use_builtin_benchmarks.unwrap_or(true) {
            builtin_benchmarks()
        } else {
            BenchmarkSet::new(Vec::new(), scale.clone())?
        };
        for custom in &self.benchmarks {
            let position = FoundationVector::new(custom.position.clone(), &scale)?;
            set.push(Benchmark::new(custom.name.clone(), position)?)?;
        }
        if set.is_empty() {
            return Err(Error::Config(
                "no benchmarks configured: enable use_builtin_benchmarks or add [[benchmark]] \
                 entries"
                    .to_string(),
            ));
        }

        let geo = self.geo.clone().unwrap_or_default();
        if let Some(breaks) = &geo.breaks {
            let spec = crate::geo::GeoJoinSpec {
                key_property: geo
                    .key_property
                    .clone()
                    .unwrap_or_else(|| "ISO_A3".to_string()),
                properties_prefix: geo.prefix.clone().unwrap_or_else(|| "qce_".to_string()),
                class_breaks: Some(breaks.clone()),
            };
            spec.validate()?;
        }

        let output = self.output.clone().unwrap_or_default();
        Ok(ResolvedConfig {
            dataset: self.dataset.clone(),
            mode,
            avg_order,
            weights,
            round_dp: self.round_dp.unwrap_or(DEFAULT_ROUND_DP),
            window: (start, end),
            min_years,
            mapping,
            overrides,
            benchmark_set: set,
            output_panel: output.panel.unwrap_or_else(|| PathBuf::from("panel.csv")),
            output_exclusions: output
                .exclusions
                .unwrap_or_else(|| PathBuf::from("exclusions.txt")),
            output_scores: output.scores.unwrap_or_else(|| PathBuf::from("scores.csv")),
            output_geojson: output
                .geojson
                .unwrap_or_else(|| PathBuf::from("merged.geojson")),
            geo_key_property: geo.key_property.unwrap_or_else(|| "ISO_A3".to_string()),
            geo_prefix: geo.prefix.unwrap_or_else(|| "qce_".to_string()),
            geo_breaks: geo.breaks,
        })
    }

    fn build_mapping(&self) -> ColumnMapping {
        let defaults = ColumnMapping::fraser_default();
        let Some(m) = &self.mapping else {
            return defaults;
        };
        let col = |cfg: &Option<ColumnConfig>, default: &FoundationColumn| match cfg {
            Some(c) => FoundationColumn {
                column: c.column.clone(),
                invert: c.invert.unwrap_or(false),
            },
            None => default.clone(),
        };
        ColumnMapping {
            country: m.country.clone().unwrap_or(defaults.country),
            year: m.year.clone().unwrap_or(defaults.year),
            mo: col(&m.mo, &defaults.mo),
            po: col(&m.po, &defaults.po),
            sg: col(&m.sg, &defaults.sg),
        }
    }
}

/// Fully validated configuration with every default filled in.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub dataset: Option<PathBuf>,
    pub mode: NormalizationMode,
    pub avg_order: AvgOrder,
    pub weights: WeightVector,
    pub round_dp: u8,
    pub window: (i32, i32),
    pub min_years: usize,
    pub mapping: ColumnMapping,
    pub overrides: NameOverrides,
    pub benchmark_set: BenchmarkSet,
    pub output_panel: PathBuf,
    pub output_exclusions: PathBuf,
    pub output_scores: PathBuf,
    pub output_geojson: PathBuf,
    pub geo_key_property: String,
    pub geo_prefix: String,
    pub geo_breaks: Option<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_resolves_to_defaults() {
        let resolved = RunConfig::default().resolve().unwrap();
        assert_eq!(resolved.window, (1995, 2020));
        assert_eq!(resolved.min_years, 1);
        assert_eq!(resolved.round_dp, 2);
        assert_eq!(resolved.mode, NormalizationMode::FixedRange);
        assert_eq!(resolved.benchmark_set.len(), 3);
        assert_eq!(resolved.mapping, ColumnMapping::fraser_default());
        assert_eq!(resolved.geo_prefix, "qce_");
    }

    #[test]
    fn toml_round_trip_with_custom_benchmark() {
        let text = r#"
            dataset = "efw.csv"
            mode = "benchmark-relative"
            weights = [1.0, 2.0, 1.0]

            [window]
            start = 2000
            end = 2010
            min_years = 3

            [mapping]
            country = "Countries"
            mo = { column = "Regulation" }
            sg = { column = "Size of Government", invert = true }

            [overrides]
            "Atlantis" = "ATL"

            [[benchmark]]
            name = "nordic"
            position = [7.83, 7.26, 5.28]
        "#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        let resolved = cfg.resolve().unwrap();
        assert_eq!(resolved.window, (2000, 2010));
        assert_eq!(resolved.min_years, 3);
        assert_eq!(resolved.mode, NormalizationMode::BenchmarkRelative);
        assert!(resolved.mapping.sg.invert);
        assert!(!resolved.mapping.mo.invert);
        assert_eq!(resolved.benchmark_set.len(), 4);
        assert!(resolved.benchmark_set.get("nordic").is_some());
    }

    #[test]
    fn flags_win_over_file() {
        let file: RunConfig =
            toml::from_str("round_dp = 4\n[window]\nstart = 2000\nend = 2019\n").unwrap();
        let flags = RunConfig {
            round_dp: Some(2),
            window: Some(WindowConfig {
                start: Some(2005),
                end: None,
                min_years: None,
            }),
            ..RunConfig::default()
        };
        let resolved = file.overlay(flags).resolve().unwrap();
        assert_eq!(resolved.round_dp, 2);
        assert_eq!(resolved.window, (2005, 2019));
    }

    #[test]
    fn invalid_fields_are_rejected() {
        assert!(matches!(
            RunConfig {
                mode: Some("manhattan".to_string()),
                ..RunConfig::default()
            }
            .resolve(),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            RunConfig {
                window: Some(WindowConfig {
                    start: Some(2020),
                    end: Some(1995),
                    min_years: None
                }),
                ..RunConfig::default()
            }
            .resolve(),
            Err(Error::InvalidWindow { .. })
        ));
        assert!(RunConfig {
            weights: Some(vec![0.0, 0.0, 0.0]),
            ..RunConfig::default()
        }
        .resolve()
        .is_err());
        // Out-of-range custom benchmark coordinates.
        assert!(RunConfig {
            benchmarks: vec![BenchmarkConfig {
                name: "bad".to_string(),
                position: vec![11.0, 0.0, 0.0]
            }],
            ..RunConfig::default()
        }
        .resolve()
        .is_err());
        // Duplicate of a builtin name.
        assert!(RunConfig {
            benchmarks: vec![BenchmarkConfig {
                name: "capitalism".to_string(),
                position: vec![9.0, 9.0, 9.0]
            }],
            ..RunConfig::default()
        }
        .resolve()
        .is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("no_such_key = 1\n").is_err());
    }
}
