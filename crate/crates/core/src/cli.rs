//! Batch command-line front end.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::canonical::MAX_PATTERN_SIZE;
use crate::graph::{
    parse_lg_patterns, read_graph_file, write_patterns_lg, DataGraph, Directedness, GraphError, GraphFormat,
    PatternGraph, SnapOptions,
};
use crate::matcher::DEFAULT_ENUMERATION_LIMIT;
use crate::metrics::{self, MetricError, MetricKind, MiningConfig, Slider};
use crate::miner::{mine_with, LevelStats, MiningError, MiningReport, Termination};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_ORACLE_LIMIT: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "flexis",
    version,
    about = "Frequent subgraph mining on a single labeled graph"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mine all frequent patterns of a data graph.
    Mine(MineArgs),
    /// Evaluate one metric for one pattern.
    Metric(MetricArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "lg")]
    pub format: GraphFormat,
    /// Read every edge as a pair of opposite directed edges.
    #[arg(long)]
    pub undirected: bool,
    /// Number of random vertex labels for SNAP input.
    #[arg(long, default_value_t = 1)]
    pub vlabels: usize,
    /// Number of random edge labels for SNAP input.
    #[arg(long, default_value_t = 1)]
    pub elabels: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl InputArgs {
    fn snap_options(&self) -> SnapOptions {
        SnapOptions {
            vertex_labels: self.vlabels,
            edge_labels: self.elabels,
            seed: self.seed,
            directedness: Directedness::from_flag(self.undirected),
        }
    }

    fn format_name(&self) -> &'static str {
        match self.format {
            GraphFormat::Lg => "lg",
            GraphFormat::Snap => "snap",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub support: u64,
    #[arg(long, default_value = "1")]
    pub lambda: String,
    #[arg(long, default_value_t = 10)]
    pub max_size: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value = "mal")]
    pub metric: MetricKind,
    /// Per-pattern cap on search steps for the greedy matcher.
    #[arg(long)]
    pub step_budget: Option<u64>,
    /// Embedding cap for the exact metrics.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enumeration_limit: usize,
    /// Results file (JSON lines); standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Summary file (JSON); standard error when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Write each level's candidates as LG files into this directory.
    #[arg(long)]
    pub dump_candidates: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MetricArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long, default_value = "mal")]
    pub metric: MetricKind,
    #[arg(long)]
    pub tau: Option<u64>,
    /// Embedding cap for the exact metrics.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enumeration_limit: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    OracleLimit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::OracleLimit(_) => EXIT_ORACLE_LIMIT,
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::EnumerationLimit(_) => CliError::OracleLimit(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MiningError> for CliError {
    fn from(e: MiningError) -> Self {
        match e {
            MiningError::Config(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn output_error(path: &Path, e: io::Error) -> CliError {
    CliError::Input(format!("cannot write {}: {e}", path.display()))
}

/// Parses arguments, runs the command and maps failures to exit codes.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mine(args) => cmd_mine(&args),
        Command::Metric(args) => cmd_metric(&args),
    }
}

fn load_graph(input: &InputArgs) -> Result<DataGraph, CliError> {
    read_graph_file(&input.input, input.format, input.snap_options()).map_err(|e| input_error(&input.input, e))
}

fn mining_config(args: &MineArgs) -> Result<MiningConfig, CliError> {
    let lambda: Slider = args.lambda.parse()?;
    let timeout = match args.timeout {
        Some(secs) if !(secs.is_finite() && secs >= 0.0) => {
            return Err(CliError::Usage(format!("invalid timeout {secs}")));
        }
        Some(secs) => Some(Duration::from_secs_f64(secs)),
        None => None,
    };
    let cfg = MiningConfig {
        support: args.support,
        lambda,
        max_size: args.max_size,
        timeout,
        metric: args.metric,
        seed: args.input.seed,
        vertex_labels: args.input.vlabels,
        edge_labels: args.input.elabels,
        threads: args.threads,
        step_budget: args.step_budget,
        enumeration_limit: args.enumeration_limit,
    };
    cfg.validate()?;
    if args.threads == 0 {
        return Err(CliError::Usage("threads must be at least 1".into()));
    }
    Ok(cfg)
}

/// One results-file line.
#[derive(Serialize)]
struct ResultLine<'a> {
    size: usize,
    canonical: String,
    vertices: Vec<&'a str>,
    edges: Vec<(usize, usize, &'a str)>,
    count: metrics::Count,
    tau: Option<u64>,
    level: usize,
}

fn pattern_tokens<'a>(g: &'a DataGraph, p: &PatternGraph) -> (Vec<&'a str>, Vec<(usize, usize, &'a str)>) {
    let vertices = p
        .labels()
        .iter()
        .map(|&l| g.vertex_label_table().token(l).unwrap_or("?"))
        .collect();
    let edges = p
        .edges()
        .map(|(u, v, l)| (u, v, g.edge_label_table().token(l).unwrap_or("?")))
        .collect();
    (vertices, edges)
}

fn write_results(g: &DataGraph, report: &MiningReport, out: &mut dyn Write) -> io::Result<()> {
    for f in &report.frequent {
        let (vertices, edges) = pattern_tokens(g, &f.pattern);
        let line = ResultLine {
            size: f.pattern.size(),
            canonical: f.pattern.canonical().hex(),
            vertices,
            edges,
            count: f.result.count,
            tau: f.result.tau,
            level: f.pattern.size(),
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Peak resident set size in KiB from `/proc/self/status`, where available.
pub fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.trim().trim_end_matches("kB").trim().parse().ok())
}

fn summary_json(args: &MineArgs, g: &DataGraph, report: &MiningReport, elapsed: Duration) -> serde_json::Value {
    let levels: &[LevelStats] = &report.levels;
    json!({
        "input": args.input.input.display().to_string(),
        "format": args.input.format_name(),
        "config": {
            "undirected": args.input.undirected,
            "vlabels": args.input.vlabels,
            "elabels": args.input.elabels,
            "seed": args.input.seed,
            "support": args.support,
            "lambda": args.lambda,
            "max_size": args.max_size,
            "timeout": args.timeout,
            "threads": args.threads,
            "metric": args.metric,
            "step_budget": args.step_budget,
            "enumeration_limit": args.enumeration_limit,
        },
        "graph": {
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "dropped_edges": g.dropped_edges(),
        },
        "levels": levels,
        "termination": report.termination,
        "frequent_total": report.frequent.len(),
        "peak_rss_kib_best_effort": peak_rss_kib(),
        "elapsed_ms": elapsed.as_millis() as u64,
    })
}

fn cmd_mine(args: &MineArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = mining_config(args)?;
    let g = load_graph(&args.input)?;
    if let Some(dir) = &args.dump_candidates {
        fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    }

    let mut dump_error = None;
    let report = mine_with(&g, &cfg, |size, candidates| {
        let Some(dir) = &args.dump_candidates else { return };
        let path = dir.join(format!("candidates_size{size}.lg"));
        let text = write_patterns_lg(candidates, g.vertex_label_table(), g.edge_label_table());
        if let Err(e) = fs::write(&path, text) {
            dump_error.get_or_insert(output_error(&path, e));
        }
    })?;
    if let Some(e) = dump_error {
        return Err(e);
    }

    match &args.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| output_error(path, e))?;
            write_results(&g, &report, &mut BufWriter::new(file)).map_err(|e| output_error(path, e))?;
        }
        None => write_results(&g, &report, &mut io::stdout().lock()).map_err(|e| CliError::Input(e.to_string()))?,
    }

    let summary = summary_json(args, &g, &report, start.elapsed());
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match &args.summary {
        Some(path) => fs::write(path, text + "\n").map_err(|e| output_error(path, e))?,
        None => eprintln!("{text}"),
    }
    if report.termination == Termination::Timeout {
        log::warn!("mining stopped at the time limit; results are partial");
    }
    Ok(())
}

fn cmd_metric(args: &MetricArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let file = File::open(&args.pattern).map_err(|e| input_error(&args.pattern, e))?;
    let mut vt = g.vertex_label_table().clone();
    let mut et = g.edge_label_table().clone();
    let mut patterns = parse_lg_patterns(
        BufReader::new(file),
        &mut vt,
        &mut et,
        Directedness::from_flag(args.input.undirected),
    )
    .map_err(|e: GraphError| input_error(&args.pattern, e))?;
    if patterns.len() != 1 {
        return Err(input_error(
            &args.pattern,
            format!("expected exactly one pattern, found {}", patterns.len()),
        ));
    }
    let p = patterns.pop().expect("one pattern");
    if p.size() > MAX_PATTERN_SIZE {
        return Err(input_error(
            &args.pattern,
            format!("pattern has {} vertices, limit is {MAX_PATTERN_SIZE}", p.size()),
        ));
    }
    if args.tau == Some(0) {
        return Err(CliError::Usage("tau must be at least 1".into()));
    }
    let result = metrics::evaluate(args.metric, &g, &p, args.tau, args.enumeration_limit)?;
    let out = json!({
        "metric": args.metric,
        "count": result.count,
        "tau": result.tau,
        "frequent": result.frequent,
        "early_terminated": result.early_terminated,
    });
    println!("{out}");
    Ok(())
}
