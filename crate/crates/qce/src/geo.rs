//! Choropleth-ready exports: the per-country scores CSV and a GeoJSON
//! property merge against user-supplied world geometry.
//!
//! The merge never touches geometry: the JSON tree is parsed with numbers
//! kept in their original source text, so coordinate arrays re-serialize
//! byte-identically. Scores are joined on country codes held in a feature
//! property, never on display names.

use std::collections::BTreeSet;
use std::io;

use serde_json::{Map, Number, Value};

use crate::classify::ClassificationReport;
use crate::countries::{display_name_or_code, CountryId};
use crate::error::{Error, Result};
use crate::round::fmt_dp;

/// How to join report rows onto geometry features.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoJoinSpec {
    /// Feature property holding the country code (e.g. `"ISO_A3"`).
    pub key_property: String,
    /// Prefix prepended to injected property names so existing properties
    /// are never clobbered.
    pub properties_prefix: String,
    /// Optional ascending break points in `[0, 1]` for binned choropleth
    /// classes; a score's class index is the number of breaks `<=` it.
    pub class_breaks: Option<Vec<f64>>,
}

impl Default for GeoJoinSpec {
    fn default() -> Self {
        GeoJoinSpec {
            key_property: "ISO_A3".to_string(),
            properties_prefix: "qce_".to_string(),
            class_breaks: None,
        }
    }
}

impl GeoJoinSpec {
    pub fn validate(&self) -> Result<()> {
        if self.key_property.is_empty() {
            return Err(Error::Config("key_property must not be empty".to_string()));
        }
        if let Some(breaks) = &self.class_breaks {
            let ascending = breaks.windows(2).all(|w| w[0] < w[1]);
            let in_unit = breaks.iter().all(|b| (0.0..=1.0).contains(b));
            if !ascending || !in_unit || breaks.is_empty() {
                return Err(Error::InvalidBreaks);
            }
        }
        Ok(())
    }

    /// Quintile breaks of an observed score distribution, the default when
    /// the user supplies none.
    pub fn quintile_breaks(scores: &[f64]) -> Option<Vec<f64>> {
        if scores.is_empty() {
            return None;
        }
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut breaks: Vec<f64> = (1..5usize)
            .map(|k| sorted[k * (sorted.len() - 1) / 5])
            .collect();
        // Sorted input makes dedup leave a strictly ascending list.
        breaks.dedup();
        Some(breaks)
    }
}

/// Result of a geometry merge.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    /// The merged feature collection, geometry untouched.
    pub geojson: Value,
    /// Features joined to a report row.
    pub matched: usize,
    /// Features with no usable key or no report row, identified by their
    /// key where present, otherwise by index.
    pub unmatched_features: Vec<String>,
    /// Report countries with no matching feature.
    pub unmatched_countries: Vec<CountryId>,
}

/// Write the scores CSV: `country_id,country_name` then one column per
/// benchmark, one row per country sorted by country code. Returns the row
/// count. Scores are rounded only here, at serialization.
pub fn export_scores_csv(
    report: &ClassificationReport,
    writer: impl io::Write,
    dp: u8,
) -> Result<usize> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["country_id".to_string(), "country_name".to_string()];
    header.extend(report.benchmark_names().iter().cloned());
    w.write_record(&header)?;

    let mut rows = 0;
    for (id, scores) in report.rows() {
        let mut record = vec![id.to_string(), display_name_or_code(id)];
        record.extend(scores.iter().map(|s| fmt_dp(s.value(), dp)));
        w.write_record(&record)?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

/// Merge report scores into a GeoJSON feature collection.
///
/// Matched features gain one numeric property per benchmark (named with
/// `spec.properties_prefix`), plus a class-index property per benchmark
/// when breaks are configured. Geometry and existing properties pass
/// through unmodified.
pub fn merge_geojson(
    report: &ClassificationReport,
    geojson_text: &str,
    spec: &GeoJoinSpec,
) -> Result<MergeOutcome> {
    spec.validate()?;
    let mut root: Value = serde_json::from_str(geojson_text).map_err(|e| Error::GeoJsonParse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let collection = root
        .as_object_mut()
        .ok_or_else(|| Error::GeoJsonShape("top level is not an object".to_string()))?;
    match collection.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => {}
        other => {
            return Err(Error::GeoJsonShape(format!(
                "type is {other:?}, expected \"FeatureCollection\""
            )))
        }
    }
    let features = collection
        .get_mut("features")
        .and_then(Value::as_array_mut)
        .ok_or_else(|| Error::GeoJsonShape("missing features array".to_string()))?;

    let mut matched = 0;
    let mut unmatched_features = Vec::new();
    let mut matched_countries: BTreeSet<CountryId> = BTreeSet::new();

    for (index, feature) in features.iter_mut().enumerate() {
        let label = feature_key(feature, &spec.key_property).unwrap_or_else(|| format!("#{index}"));
        let id = feature_key(feature, &spec.key_property).and_then(|key| CountryId::new(&key).ok());
        let Some(id) = id else {
            unmatched_features.push(label);
            continue;
        };
        let Some(scores) = report.rows().get(&id) else {
            unmatched_features.push(label);
            continue;
        };

        let properties = feature
            .as_object_mut()
            .and_then(|f| f.get_mut("properties"))
            .and_then(Value::as_object_mut)
            .expect("checked by feature_key");
        inject_scores(properties, report, scores, spec);
        matched += 1;
        matched_countries.insert(id);
    }

    let unmatched_countries: Vec<CountryId> = report
        .rows()
        .keys()
        .filter(|id| !matched_countries.contains(id))
        .cloned()
        .collect();

    Ok(MergeOutcome {
        geojson: root,
        matched,
        unmatched_features,
        unmatched_countries,
    })
}

fn feature_key(feature: &Value, key_property: &str) -> Option<String> {
    feature
        .as_object()?
        .get("properties")?
        .as_object()?
        .get(key_property)?
        .as_str()
        .map(str::to_string)
}

fn inject_scores(
    properties: &mut Map<String, Value>,
    report: &ClassificationReport,
    scores: &[crate::metrics::SimilarityScore],
    spec: &GeoJoinSpec,
) {
    for (name, score) in report.benchmark_names().iter().zip(scores) {
        let value = score.value();
        let number = Number::from_f64(value).expect("scores are finite");
        properties.insert(
            format!("{}{}", spec.properties_prefix, name),
            Value::Number(number),
        );
        if let Some(breaks) = &spec.class_breaks {
            let class = breaks.iter().filter(|b| **b <= value).count();
            properties.insert(
                format!("{}{}_class", spec.properties_prefix, name),
                Value::Number(Number::from(class)),
            );
        }
    }
}
