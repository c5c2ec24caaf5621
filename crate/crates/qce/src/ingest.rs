//! Dataset ingestion: parse a source CSV into a country/year panel,
//! normalize country identities, and compute period-averaged foundation
//! vectors.
//!
//! The source schema is never hard-coded: a [`ColumnMapping`] names the
//! country, year, and foundation columns (dataset editions rename columns,
//! so the mapping is external configuration with a shipped default). Rows
//! whose country cannot be resolved are skipped and reported; rows with a
//! missing or unparseable foundation score are retained as incomplete and
//! never imputed.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use crate::countries::{normalize_country_name, CountryId, NameOverrides, Resolution};
use crate::error::{Error, Result};
use crate::metrics::{Foundation, FoundationVector};

/// Years accepted in panel records.
pub const YEAR_MIN: i32 = 1950;
pub const YEAR_MAX: i32 = 2100;

/// One foundation's source column and an optional `score -> 10 - score`
/// inversion for sources whose polarity is reversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundationColumn {
    pub column: String,
    pub invert: bool,
}

impl FoundationColumn {
    pub fn plain(column: impl Into<String>) -> Self {
        FoundationColumn {
            column: column.into(),
            invert: false,
        }
    }
}

/// Maps source CSV columns onto the three foundations plus the country and
/// year identity columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub country: String,
    pub year: String,
    pub mo: FoundationColumn,
    pub po: FoundationColumn,
    pub sg: FoundationColumn,
}

impl ColumnMapping {
    /// Default mapping for the public economic-freedom dataset CSV:
    /// the "Regulation" area proxies market organization, the state
    /// ownership component proxies private ownership (already scored
    /// higher = more private), and "Size of Government" is used directly
    /// (already scored higher = smaller government).
    pub fn fraser_default() -> Self {
        ColumnMapping {
            country: "Countries".to_string(),
            year: "Year".to_string(),
            mo: FoundationColumn::plain("Regulation"),
            po: FoundationColumn::plain("State Ownership of Assets"),
            sg: FoundationColumn::plain("Size of Government"),
        }
    }

    /// Mapping for the canonical panel CSV this crate writes.
    pub fn canonical() -> Self {
        ColumnMapping {
            country: "country_id".to_string(),
            year: "year".to_string(),
            mo: FoundationColumn::plain("mo"),
            po: FoundationColumn::plain("po"),
            sg: FoundationColumn::plain("sg"),
        }
    }

    pub fn foundation(&self, f: Foundation) -> &FoundationColumn {
        match f {
            Foundation::MarketOrganization => &self.mo,
            Foundation::PrivateOwnership => &self.po,
            Foundation::SmallGovernment => &self.sg,
        }
    }

    /// The three foundation columns must be present and mutually distinct.
    pub fn validate(&self) -> Result<()> {
        let cols = [&self.mo.column, &self.po.column, &self.sg.column];
        for (i, col) in cols.iter().enumerate() {
            if col.trim().is_empty() {
                return Err(Error::Config(format!(
                    "foundation column {} must not be empty",
                    Foundation::ALL[i].short_name()
                )));
            }
            if cols[..i].contains(col) {
                return Err(Error::Config(format!(
                    "foundation columns must be distinct; {col:?} is mapped twice"
                )));
            }
        }
        if self.country.trim().is_empty() || self.year.trim().is_empty() {
            return Err(Error::Config(
                "country and year columns must not be empty".to_string(),
            ));
        }
        Ok(())
    }
}

/// Foundation scores of one record: either a complete vector or whatever
/// subset of cells could be read. Incomplete records are kept for
/// transparency but never enter averages.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordScores {
    Complete(FoundationVector),
    Incomplete(PartialScores),
}

impl RecordScores {
    pub fn complete(&self) -> Option<&FoundationVector> {
        match self {
            RecordScores::Complete(v) => Some(v),
            RecordScores::Incomplete(_) => None,
        }
    }
}

/// The readable subset of an incomplete record's scores.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialScores {
    pub mo: Option<f64>,
    pub po: Option<f64>,
    pub sg: Option<f64>,
}

/// One country/year observation.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryYearRecord {
    pub id: CountryId,
    pub year: i32,
    pub scores: RecordScores,
}

/// Why a source row was left out of the panel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    UnresolvedCountry,
    UnparseableYear(String),
    YearOutOfRange(i32),
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::UnresolvedCountry => write!(f, "unresolved country name"),
            SkipReason::UnparseableYear(raw) => write!(f, "unparseable year {raw:?}"),
            SkipReason::YearOutOfRange(y) => {
                write!(f, "year {y} outside [{YEAR_MIN}, {YEAR_MAX}]")
            }
        }
    }
}

/// A source row that did not become a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: u64,
    pub raw_country: String,
    pub reason: SkipReason,
}

impl fmt::Display for SkippedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (line {})",
            self.raw_country, self.reason, self.line
        )
    }
}

/// Where a panel came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub mapping: ColumnMapping,
}

/// The ingested dataset: at most one record per (country, year), plus the
/// rows that were skipped and the source identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryPanel {
    records: BTreeMap<(CountryId, i32), RecordScores>,
    skipped: Vec<SkippedRow>,
    provenance: Provenance,
}

impl CountryPanel {
    pub fn records(&self) -> &BTreeMap<(CountryId, i32), RecordScores> {
        &self.records
    }

    pub fn skipped(&self) -> &[SkippedRow] {
        &self.skipped
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &CountryId, year: i32) -> Option<&RecordScores> {
        self.records.get(&(id.clone(), year))
    }

    /// Countries present in the panel, sorted.
    pub fn countries(&self) -> Vec<CountryId> {
        let mut out: Vec<CountryId> = self.records.keys().map(|(id, _)| id.clone()).collect();
        out.dedup();
        out
    }

    /// Iterate the panel as owned records.
    pub fn iter_records(&self) -> impl Iterator<Item = CountryYearRecord> + '_ {
        self.records
            .iter()
            .map(|((id, year), scores)| CountryYearRecord {
                id: id.clone(),
                year: *year,
                scores: scores.clone(),
            })
    }
}

/// A country excluded from a period average, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub id: CountryId,
    pub reason: String,
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.reason)
    }
}

/// Period-averaged foundation vectors per country.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodAverages {
    pub vectors: BTreeMap<CountryId, FoundationVector>,
    pub excluded: Vec<Exclusion>,
}

/// Parse a source CSV into a panel.
///
/// Header matching is case-insensitive and whitespace-trimmed. A missing
/// mapped column fails with [`Error::Schema`]; a duplicate (country, year)
/// pair fails with [`Error::DuplicateRecord`]; a parsed score outside
/// `[0, 10]` after inversion fails with [`Error::Range`]. Rows with an
/// unresolvable country or unusable year are skipped and reported; rows
/// with missing or unparseable scores become incomplete records.
pub fn parse_dataset(
    reader: impl io::Read,
    source: &str,
    mapping: &ColumnMapping,
    overrides: &NameOverrides,
) -> Result<CountryPanel> {
    parse_with_resolver(reader, source, mapping, |raw| {
        normalize_country_name(raw, overrides)
    })
}

fn parse_with_resolver(
    reader: impl io::Read,
    source: &str,
    mapping: &ColumnMapping,
    resolve: impl Fn(&str) -> Resolution,
) -> Result<CountryPanel> {
    mapping.validate()?;

    let mut csv_reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv_reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| Error::Schema(name.to_string()))
    };
    let country_idx = find(&mapping.country)?;
    let year_idx = find(&mapping.year)?;
    let foundation_idx = [
        (
            Foundation::MarketOrganization,
            find(&mapping.mo.column)?,
            mapping.mo.invert,
        ),
        (
            Foundation::PrivateOwnership,
            find(&mapping.po.column)?,
            mapping.po.invert,
        ),
        (
            Foundation::SmallGovernment,
            find(&mapping.sg.column)?,
            mapping.sg.invert,
        ),
    ];

    let mut records: BTreeMap<(CountryId, i32), RecordScores> = BTreeMap::new();
    let mut skipped = Vec::new();

    for row in csv_reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let cell = |idx: usize| row.get(idx).unwrap_or("");

        let raw_country = cell(country_idx).to_string();
        let id = match resolve(&raw_country) {
            Resolution::Resolved(id) => id,
            Resolution::Unresolved(_) => {
                skipped.push(SkippedRow {
                    line,
                    raw_country,
                    reason: SkipReason::UnresolvedCountry,
                });
                continue;
            }
        };

        let raw_year = cell(year_idx);
        let year = match raw_year.trim().parse::<i32>() {
            Ok(y) if (YEAR_MIN..=YEAR_MAX).contains(&y) => y,
            Ok(y) => {
                skipped.push(SkippedRow {
                    line,
                    raw_country,
                    reason: SkipReason::YearOutOfRange(y),
                });
                continue;
            }
            Err(_) => {
                skipped.push(SkippedRow {
                    line,
                    raw_country,
                    reason: SkipReason::UnparseableYear(raw_year.to_string()),
                });
                continue;
            }
        };

        let mut values = [None::<f64>; 3];
        for (slot, (foundation, idx, invert)) in values.iter_mut().zip(foundation_idx.iter()) {
            if let Some(parsed) = parse_decimal(cell(*idx)) {
                let value = if *invert { 10.0 - parsed } else { parsed };
                if !(0.0..=10.0).contains(&value) {
                    return Err(Error::Range {
                        line,
                        column: mapping.foundation(*foundation).column.clone(),
                        value,
                    });
                }
                *slot = Some(value);
            }
        }

        let scores = match values {
            [Some(mo), Some(po), Some(sg)] => {
                RecordScores::Complete(FoundationVector::three(mo, po, sg)?)
            }
            [mo, po, sg] => RecordScores::Incomplete(PartialScores { mo, po, sg }),
        };

        let key = (id.clone(), year);
        if records.contains_key(&key) {
            return Err(Error::DuplicateRecord {
                country: id.to_string(),
                year,
                line,
            });
        }
        records.insert(key, scores);
    }

    Ok(CountryPanel {
        records,
        skipped,
        provenance: Provenance {
            source: source.to_string(),
            mapping: mapping.clone(),
        },
    })
}

/// Parse a decimal cell. Blank cells and the usual sentinels are missing;
/// thousands-grouping commas are accepted; anything else unparseable is
/// treated as missing (the row becomes incomplete, not an error).
fn parse_decimal(raw: &str) -> Option<f64> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return None;
    }
    let lower = trimmed.to_ascii_lowercase();
    if matches!(lower.as_str(), "na" | "n/a" | "-" | "..") {
        return None;
    }
    let candidate = if trimmed.contains(',') && is_comma_grouped(trimmed) {
        trimmed.replace(',', "")
    } else {
        trimmed.to_string()
    };
    candidate.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// `^\d{1,3}(,\d{3})+(\.\d*)?$` without pulling in a regex engine.
fn is_comma_grouped(s: &str) -> bool {
    let mantissa = s.split('.').next().unwrap_or("");
    let groups: Vec<&str> = mantissa.split(',').collect();
    if groups.len() < 2 {
        return false;
    }
    let first_ok = !groups[0].is_empty()
        && groups[0].len() <= 3
        && groups[0].chars().all(|c| c.is_ascii_digit());
    let rest_ok = groups[1..]
        .iter()
        .all(|g| g.len() == 3 && g.chars().all(|c| c.is_ascii_digit()));
    let frac_ok = match s.split_once('.') {
        None => true,
        Some((_, frac)) => frac.chars().all(|c| c.is_ascii_digit()),
    };
    first_ok && rest_ok && frac_ok
}

/// Componentwise mean of each country's complete records within
/// `[start_year, end_year]`. Countries with fewer than `min_years` complete
/// in-window records are excluded and reported.
pub fn average_period(
    panel: &CountryPanel,
    start_year: i32,
    end_year: i32,
    min_years: usize,
) -> Result<PeriodAverages> {
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
        let entry = sums.entry(id.clone()).or_insert_with(|| (vec![0.0; 3], 0));
        if *year < start_year || *year > end_year {
            continue;
        }
        if let Some(v) = scores.complete() {
            for (acc, s) in entry.0.iter_mut().zip(v.scores()) {
                *acc += s;
            }
            entry.1 += 1;
        }
    }

    let mut vectors = BTreeMap::new();
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
        let mean: Vec<f64> = sum.into_iter().map(|s| s / count as f64).collect();
        vectors.insert(id, FoundationVector::from_raw(mean));
    }

    Ok(PeriodAverages { vectors, excluded })
}

/// Write the canonical panel CSV: `country_id,country_name,year,mo,po,sg`,
/// rows sorted by country then year, full-precision decimals, `\n` line
/// ends. Returns the row count.
pub fn write_canonical_csv(panel: &CountryPanel, writer: impl io::Write) -> Result<usize> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["country_id", "country_name", "year", "mo", "po", "sg"])?;
    let mut rows = 0;
    for ((id, year), scores) in panel.records() {
        let name = crate::countries::display_name_or_code(id);
        let cells: [String; 3] = match scores {
            RecordScores::Complete(v) => {
                let s = v.scores();
                [s[0].to_string(), s[1].to_string(), s[2].to_string()]
            }
            RecordScores::Incomplete(p) => [
                p.mo.map(|v| v.to_string()).unwrap_or_default(),
                p.po.map(|v| v.to_string()).unwrap_or_default(),
                p.sg.map(|v| v.to_string()).unwrap_or_default(),
            ],
        };
        w.write_record([
            id.as_str(),
            &name,
            &year.to_string(),
            &cells[0],
            &cells[1],
            &cells[2],
        ])?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

/// Read a canonical panel CSV back into a panel. The country column holds
/// alpha-3 codes, so any syntactically valid code is accepted as-is —
/// including codes that arrived via overrides and are absent from the
/// built-in name table.
pub fn read_canonical_csv(reader: impl io::Read, source: &str) -> Result<CountryPanel> {
    parse_with_resolver(
        reader,
        source,
        &ColumnMapping::canonical(),
        |raw| match CountryId::new(raw.trim()) {
            Ok(id) => Resolution::Resolved(id),
            Err(_) => Resolution::Unresolved(raw.to_string()),
        },
    )
}

/// Write the plain-text exclusion report, one `country_id: reason` line
/// each, covering both skipped source rows and averaging exclusions.
pub fn write_exclusion_report(
    skipped: &[SkippedRow],
    excluded: &[Exclusion],
    mut writer: impl io::Write,
) -> Result<usize> {
    let mut lines = 0;
    for row in skipped {
        writeln!(writer, "{row}")?;
        lines += 1;
    }
    for exclusion in excluded {
        writeln!(writer, "{exclusion}")?;
        lines += 1;
    }
    Ok(lines)
}
