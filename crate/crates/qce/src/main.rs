//! Batch command-line surface: ingest -> average -> benchmark -> score ->
//! rank/export. Exit codes: 0 success, 1 usage/config error, 2 data error,
//! 3 I/O error. Every failure prints a single `error[kind]: message` line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qce::classify::{top_n, ClassificationReport};
use qce::config::{RunConfig, CONFIG_ENV_VAR};
use qce::countries::CountryId;
use qce::error::Error;
use qce::geo::{export_scores_csv, merge_geojson, GeoJoinSpec};
use qce::ingest::{parse_dataset, read_canonical_csv, write_canonical_csv, write_exclusion_report};
use qce::pipeline::{derive_benchmark_from_panel, score_panel};
use qce::round::fmt_dp;

#[derive(Parser)]
#[command(
    name = "qce",
    version,
    about = "Similarity indices for countries' economic systems",
    after_help = "Config file: --config PATH, or the QCE_CONFIG environment variable. \
                  Command flags override config fields."
)]
struct Cli {
    /// TOML config file; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a source dataset CSV into the canonical panel CSV.
    Ingest(IngestArgs),
    /// Average the panel over the window and score every country against
    /// every benchmark, writing the scores CSV.
    Score(ScoreArgs),
    /// Rank countries by similarity to one benchmark.
    Rank(RankArgs),
    /// Merge scores into a GeoJSON feature collection as properties.
    ExportGeojson(ExportGeojsonArgs),
    /// Inspect or derive benchmarks.
    #[command(subcommand)]
    Benchmarks(BenchmarksCommand),
    /// Check the config file and report the resolved settings.
    Validate,
}

#[derive(Args)]
struct IngestArgs {
    /// Source dataset CSV.
    #[arg(long, value_name = "PATH")]
    dataset: Option<PathBuf>,
    /// Output canonical panel CSV.
    #[arg(long, value_name = "PATH")]
    panel: Option<PathBuf>,
    /// Output exclusion report (plain text).
    #[arg(long, value_name = "PATH")]
    exclusions: Option<PathBuf>,
    /// Column holding country names.
    #[arg(long, value_name = "NAME")]
    country_col: Option<String>,
    /// Column holding years.
    #[arg(long, value_name = "NAME")]
    year_col: Option<String>,
    /// Column for the market-organization foundation.
    #[arg(long, value_name = "NAME")]
    mo_col: Option<String>,
    /// Column for the private-ownership foundation.
    #[arg(long, value_name = "NAME")]
    po_col: Option<String>,
    /// Column for the small-government foundation.
    #[arg(long, value_name = "NAME")]
    sg_col: Option<String>,
    /// Apply score -> 10 - score to the market-organization column.
    #[arg(long, value_name = "BOOL")]
    mo_invert: Option<bool>,
    /// Apply score -> 10 - score to the private-ownership column.
    #[arg(long, value_name = "BOOL")]
    po_invert: Option<bool>,
    /// Apply score -> 10 - score to the small-government column.
    #[arg(long, value_name = "BOOL")]
    sg_invert: Option<bool>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Canonical panel CSV produced by `qce ingest`.
    #[arg(long, value_name = "PATH")]
    panel: Option<PathBuf>,
    /// Output scores CSV.
    #[arg(long, value_name = "PATH")]
    scores: Option<PathBuf>,
    /// Normalization: fixed-range (default) or benchmark-relative.
    #[arg(long, value_name = "MODE")]
    mode: Option<String>,
    /// Pipeline order: average-then-score (default) or score-then-average.
    #[arg(long, value_name = "ORDER")]
    avg_order: Option<String>,
    #[arg(long, value_name = "YEAR")]
    window_start: Option<i32>,
    #[arg(long, value_name = "YEAR")]
    window_end: Option<i32>,
    /// Minimum complete in-window records per country.
    #[arg(long, value_name = "N")]
    min_years: Option<usize>,
    /// Comma-separated foundation weights, e.g. 1,1,2.
    #[arg(long, value_name = "W,W,W")]
    weights: Option<String>,
    /// Decimal places in the scores CSV.
    #[arg(long, value_name = "N")]
    dp: Option<u8>,
}

#[derive(Args)]
struct RankArgs {
    /// Benchmark name to rank by.
    benchmark: String,
    /// Scores CSV produced by `qce score`.
    #[arg(long, value_name = "PATH")]
    scores: Option<PathBuf>,
    /// Table length.
    #[arg(short, long, default_value_t = 20)]
    n: usize,
    /// Also write the table as CSV here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Decimal places in the displayed scores.
    #[arg(long, value_name = "N")]
    dp: Option<u8>,
}

#[derive(Args)]
struct ExportGeojsonArgs {
    /// World geometry (RFC 7946 FeatureCollection).
    #[arg(long, value_name = "PATH")]
    geometry: PathBuf,
    /// Scores CSV produced by `qce score`.
    #[arg(long, value_name = "PATH")]
    scores: Option<PathBuf>,
    /// Output merged GeoJSON.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Feature property holding the country code.
    #[arg(long, value_name = "NAME")]
    key_property: Option<String>,
    /// Prefix for injected property names.
    #[arg(long, value_name = "PREFIX")]
    prefix: Option<String>,
    /// Class breaks: comma-separated values in [0,1], or "none".
    /// Defaults to quintiles of the observed scores.
    #[arg(long, value_name = "B,B,..|none")]
    breaks: Option<String>,
}

#[derive(Subcommand)]
enum BenchmarksCommand {
    /// Print the configured benchmark set.
    List,
    /// Derive a benchmark as the average of listed countries' period
    /// averages, printing a config snippet.
    Derive(DeriveArgs),
}

#[derive(Args)]
struct DeriveArgs {
    /// Canonical panel CSV.
    #[arg(long, value_name = "PATH")]
    panel: PathBuf,
    /// Name for the derived benchmark.
    #[arg(long, value_name = "NAME")]
    name: String,
    /// Comma-separated country codes, e.g. DNK,FIN,ISL,NOR,SWE.
    #[arg(long, value_name = "CODE,..")]
    countries: String,
    #[arg(long, value_name = "YEAR")]
    window_start: Option<i32>,
    #[arg(long, value_name = "YEAR")]
    window_end: Option<i32>,
    #[arg(long, value_name = "N")]
    min_years: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("error[usage]: invalid arguments; run `qce --help`");
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, kind) = classify_error(&err);
            eprintln!("error[{kind}]: {err}");
            ExitCode::from(code)
        }
    }
}

fn classify_error(err: &Error) -> (u8, &'static str) {
    match err {
        Error::Config(_)
        | Error::InvalidWindow { .. }
        | Error::InvalidWeights
        | Error::InvalidBreaks
        | Error::UnknownBenchmark { .. }
        | Error::EmptyBenchmarkName
        | Error::DuplicateBenchmarkName(_) => (1, "config"),
        Error::Io(_) => (3, "io"),
        _ => (2, "data"),
    }
}

fn run(cli: Cli) -> qce::Result<()> {
    let file_config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest(args) => cmd_ingest(file_config, args),
        Command::Score(args) => cmd_score(file_config, args),
        Command::Rank(args) => cmd_rank(file_config, args),
        Command::ExportGeojson(args) => cmd_export_geojson(file_config, args),
        Command::Benchmarks(BenchmarksCommand::List) => cmd_benchmarks_list(file_config),
        Command::Benchmarks(BenchmarksCommand::Derive(args)) => cmd_benchmarks_derive(args),
        Command::Validate => cmd_validate(file_config),
    }
}

fn load_config(flag: Option<&Path>) -> qce::Result<RunConfig> {
    let path = flag
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from));
    match path {
        Some(p) => RunConfig::load(&p),
        None => Ok(RunConfig::default()),
    }
}

fn read_file(path: &Path) -> qce::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn create_file(path: &Path) -> qce::Result<fs::File> {
    fs::File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn cmd_ingest(config: RunConfig, args: IngestArgs) -> qce::Result<()> {
    let resolved = config.resolve()?;
    let dataset = args
        .dataset
        .or(resolved.dataset.clone())
        .ok_or_else(|| Error::Config("no dataset given (flag --dataset or config)".to_string()))?;

    let mut mapping = resolved.mapping.clone();
    if let Some(c) = args.country_col {
        mapping.country = c;
    }
    if let Some(c) = args.year_col {
        mapping.year = c;
    }
    for (col, invert, target) in [
        (args.mo_col, args.mo_invert, &mut mapping.mo),
        (args.po_col, args.po_invert, &mut mapping.po),
        (args.sg_col, args.sg_invert, &mut mapping.sg),
    ] {
        if let Some(c) = col {
            target.column = c;
        }
        if let Some(i) = invert {
            target.invert = i;
        }
    }
    mapping.validate()?;

    let text = read_file(&dataset)?;
    let panel = parse_dataset(
        text.as_bytes(),
        &dataset.display().to_string(),
        &mapping,
        &resolved.overrides,
    )?;

    let panel_path = args.panel.unwrap_or(resolved.output_panel);
    let rows = write_canonical_csv(&panel, create_file(&panel_path)?)?;

    let exclusions_path = args.exclusions.unwrap_or(resolved.output_exclusions);
    let lines = write_exclusion_report(panel.skipped(), &[], create_file(&exclusions_path)?)?;

    println!(
        "wrote {rows} record(s) to {}; {lines} exclusions ({})",
        panel_path.display(),
        exclusions_path.display()
    );
    Ok(())
}

fn cmd_score(config: RunConfig, args: ScoreArgs) -> qce::Result<()> {
    let flag_overlay = RunConfig {
        mode: args.mode,
        avg_order: args.avg_order,
        weights: args.weights.map(|w| parse_f64_list(&w)).transpose()?,
        round_dp: args.dp,
        window: Some(qce::config::WindowConfig {
            start: args.window_start,
            end: args.window_end,
            min_years: args.min_years,
        }),
        ..RunConfig::default()
    };
    let resolved = config.overlay(flag_overlay).resolve()?;

    let panel_path = args
        .panel
        .ok_or_else(|| Error::Config("no panel given (flag --panel)".to_string()))?;
    let text = read_file(&panel_path)?;
    let panel = read_canonical_csv(text.as_bytes(), &panel_path.display().to_string())?;

    let (report, excluded) = score_panel(
        &panel,
        resolved.window,
        resolved.min_years,
        &resolved.benchmark_set,
        resolved.mode,
        resolved.avg_order,
        &resolved.weights,
    )?;
    if report.is_empty() {
        return Err(Error::EmptyCountrySet);
    }

    let scores_path = args.scores.unwrap_or(resolved.output_scores);
    let rows = export_scores_csv(&report, create_file(&scores_path)?, resolved.round_dp)?;

    for exclusion in &excluded {
        eprintln!("excluded {exclusion}");
    }
    println!(
        "wrote {rows} countries x {} benchmarks to {} ({} excluded)",
        report.benchmark_names().len(),
        scores_path.display(),
        excluded.len()
    );
    Ok(())
}

fn cmd_rank(config: RunConfig, args: RankArgs) -> qce::Result<()> {
    let resolved = config.resolve()?;
    if args.n == 0 {
        return Err(Error::Config("n must be at least 1".to_string()));
    }
    let scores_path = args
        .scores
        .ok_or_else(|| Error::Config("no scores file given (flag --scores)".to_string()))?;
    let report = ClassificationReport::from_scores_csv(read_file(&scores_path)?.as_bytes())?;
    let table = top_n(&report, &args.benchmark, args.n)?;
    let dp = args.dp.unwrap_or(resolved.round_dp);
    print!("{}", table.to_text(dp));
    if let Some(out) = args.out {
        table.write_csv(create_file(&out)?, dp)?;
    }
    Ok(())
}

fn cmd_export_geojson(config: RunConfig, args: ExportGeojsonArgs) -> qce::Result<()> {
    let resolved = config.resolve()?;
    let scores_path = args
        .scores
        .ok_or_else(|| Error::Config("no scores file given (flag --scores)".to_string()))?;
    let report = ClassificationReport::from_scores_csv(read_file(&scores_path)?.as_bytes())?;

    let breaks = match args.breaks.as_deref() {
        Some("none") => None,
        Some(list) => Some(parse_f64_list(list)?),
        None => resolved.geo_breaks.clone().or_else(|| {
            // Quintiles of all observed scores, the documented default.
            let pooled: Vec<f64> = report
                .rows()
                .values()
                .flat_map(|scores| scores.iter().map(|s| s.value()))
                .collect();
            GeoJoinSpec::quintile_breaks(&pooled)
        }),
    };
    let spec = GeoJoinSpec {
        key_property: args.key_property.unwrap_or(resolved.geo_key_property),
        properties_prefix: args.prefix.unwrap_or(resolved.geo_prefix),
        class_breaks: breaks,
    };

    let geometry_text = read_file(&args.geometry)?;
    let outcome = merge_geojson(&report, &geometry_text, &spec)?;

    let out_path = args.out.unwrap_or(resolved.output_geojson);
    let mut file = create_file(&out_path)?;
    serde_json::to_writer(&mut file, &outcome.geojson)
        .map_err(|e| Error::Config(format!("serializing geojson: {e}")))?;
    file.write_all(b"\n")?;

    for key in &outcome.unmatched_features {
        println!("unmatched feature: {key}");
    }
    for id in &outcome.unmatched_countries {
        println!("unmatched country: {id}");
    }
    println!(
        "merged {} feature(s) into {}; {} unmatched feature(s), {} unmatched country(ies)",
        outcome.matched,
        out_path.display(),
        outcome.unmatched_features.len(),
        outcome.unmatched_countries.len()
    );
    Ok(())
}

fn cmd_benchmarks_list(config: RunConfig) -> qce::Result<()> {
    let resolved = config.resolve()?;
    for benchmark in resolved.benchmark_set.benchmarks() {
        let coords: Vec<String> = benchmark
            .position()
            .scores()
            .iter()
            .map(|v| fmt_dp(*v, resolved.round_dp))
            .collect();
        println!("{} ({})", benchmark.name(), coords.join(", "));
    }
    Ok(())
}

fn cmd_benchmarks_derive(args: DeriveArgs) -> qce::Result<()> {
    let countries: Vec<CountryId> = args
        .countries
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| CountryId::new(s.trim()))
        .collect::<qce::Result<_>>()?;
    let text = read_file(&args.panel)?;
    let panel = read_canonical_csv(text.as_bytes(), &args.panel.display().to_string())?;
    let window = (
        args.window_start
            .unwrap_or(qce::config::DEFAULT_WINDOW_START),
        args.window_end.unwrap_or(qce::config::DEFAULT_WINDOW_END),
    );
    let benchmark = derive_benchmark_from_panel(
        &panel,
        &args.name,
        &countries,
        window,
        args.min_years.unwrap_or(qce::config::DEFAULT_MIN_YEARS),
    )?;

    let display: Vec<String> = benchmark
        .position()
        .scores()
        .iter()
        .map(|v| fmt_dp(*v, 2))
        .collect();
    println!("{} ({})", benchmark.name(), display.join(", "));
    println!();
    println!("[[benchmark]]");
    println!("name = \"{}\"", benchmark.name());
    let full: Vec<String> = benchmark
        .position()
        .scores()
        .iter()
        .map(f64::to_string)
        .collect();
    println!("position = [{}]", full.join(", "));
    Ok(())
}

fn cmd_validate(config: RunConfig) -> qce::Result<()> {
    let resolved = config.resolve()?;
    println!("mode = {}", resolved.mode.as_str());
    println!("avg_order = {}", resolved.avg_order.as_str());
    println!(
        "window = {}-{} (min_years {})",
        resolved.window.0, resolved.window.1, resolved.min_years
    );
    println!(
        "weights = [{}]",
        resolved
            .weights
            .weights()
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("round_dp = {}", resolved.round_dp);
    println!(
        "mapping = country:{:?} year:{:?} mo:{:?} po:{:?} sg:{:?}",
        resolved.mapping.country,
        resolved.mapping.year,
        resolved.mapping.mo.column,
        resolved.mapping.po.column,
        resolved.mapping.sg.column
    );
    println!("benchmarks = {}", resolved.benchmark_set.names().join(", "));
    println!("config OK");
    Ok(())
}

fn parse_f64_list(raw: &str) -> qce::Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number {s:?} in list {raw:?}")))
        })
        .collect()
}
