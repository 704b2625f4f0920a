//! Command-line front end: single solves, discount-factor sweeps and their
//! artifacts (JSON report, CSV trace, SVG figure).

mod svg;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::aps::{solve, ApsError, Report, SolverConfig, StopReason};
use crate::game_model::{parse_game, GameError, ParseOptions, StageGame};

pub use svg::emit_svg;

pub const REPORT_FILE: &str = "report.json";
pub const TRACE_FILE: &str = "trace.csv";
pub const SVG_FILE: &str = "final.svg";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "PPE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solver(#[from] ApsError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    ReportJson,
    TraceCsv,
    Svg,
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "report_json" | "json" => Ok(Output::ReportJson),
            "trace_csv" | "csv" => Ok(Output::TraceCsv),
            "svg" => Ok(Output::Svg),
            other => Err(format!(
                "unknown output {other:?} (expected report_json, trace_csv or svg)"
            )),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::ReportJson => "report_json",
            Output::TraceCsv => "trace_csv",
            Output::Svg => "svg",
        })
    }
}

/// Parses a comma-separated output list.
pub fn parse_outputs(s: &str) -> Result<Vec<Output>, String> {
    let mut out: Vec<Output> = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let o = part.parse()?;
        if !out.contains(&o) {
            out.push(o);
        }
    }
    if out.is_empty() {
        return Err("at least one output is required".into());
    }
    Ok(out)
}

/// Parses a comma-separated, strictly ascending list of discount factors.
pub fn parse_delta_grid(s: &str) -> Result<Vec<f64>, String> {
    let values = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid discount factor {p:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("the discount factor grid is empty".into());
    }
    if let Some(v) = values.iter().find(|v| !(0.0..1.0).contains(*v)) {
        return Err(format!("discount factor {v} is outside [0, 1)"));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err("discount factors must be strictly ascending".into());
    }
    Ok(values)
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub game_path: PathBuf,
    pub config: SolverConfig,
    pub outputs: Vec<Output>,
    pub out_dir: PathBuf,
    pub parse: ParseOptions,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub run: RunSpec,
    pub delta_values: Vec<f64>,
}

pub fn load_game(path: &Path, opts: &ParseOptions) -> Result<StageGame, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_game(&text, opts)?)
}

/// Exit status for a finished run.
pub fn exit_code(report: &Report) -> i32 {
    match report.stop_reason {
        StopReason::MaxIter | StopReason::Truncated => 2,
        _ => 0,
    }
}

/// One-line human summary of a run.
pub fn summary_line(report: &Report) -> String {
    format!(
        "delta={} iterations={} final_area={:.6} vertices={} stop_reason={}",
        report.config.delta,
        report.iterations(),
        report.final_area(),
        report.final_set.len(),
        report.stop_reason
    )
}

/// Runs `f` on a pool sized by `PPE_THREADS`, or on rayon's default pool.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok());
    match threads.filter(|&n| n > 0) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool construction")
            .install(f),
        None => f(),
    }
}

/// Solves one game and writes the selected artifacts.
pub fn run_solve(spec: &RunSpec) -> Result<Report, CliError> {
    if spec.outputs.is_empty() {
        return Err(CliError::Usage("at least one output is required".into()));
    }
    let game = load_game(&spec.game_path, &spec.parse)?;
    spec.config.validate()?;
    let report = with_thread_pool(|| solve(&game, &spec.config))?;
    write_artifacts(&report, &spec.outputs, &spec.out_dir)?;
    Ok(report)
}

/// `solve` subcommand: prints a summary line and returns the exit status.
pub fn cmd_solve(spec: &RunSpec, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    match run_solve(spec) {
        Ok(report) => {
            let _ = writeln!(stdout, "{}", summary_line(&report));
            exit_code(&report)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Directory name for one discount factor of a sweep.
pub fn delta_dir_name(delta: f64) -> String {
    format!("delta_{delta}")
}

/// `sweep` subcommand: one subdirectory per discount factor plus a summary table.
pub fn cmd_sweep(spec: &SweepSpec, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    if spec.delta_values.is_empty() {
        let _ = writeln!(stderr, "error: the discount factor grid is empty");
        return 1;
    }
    if let Err(e) = create_dir(&spec.run.out_dir) {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    let summary_path = spec.run.out_dir.join(SUMMARY_FILE);
    let mut rows = vec![["delta", "iterations", "final_area", "stop_reason"].map(String::from)];
    let mut status = 0;
    for &delta in &spec.delta_values {
        let run = RunSpec {
            config: SolverConfig {
                delta,
                ..spec.run.config
            },
            out_dir: spec.run.out_dir.join(delta_dir_name(delta)),
            ..spec.run.clone()
        };
        let (row, code) = match run_solve(&run) {
            Ok(report) => {
                let _ = writeln!(stdout, "{}", summary_line(&report));
                let row = [
                    delta.to_string(),
                    report.iterations().to_string(),
                    report.final_area().to_string(),
                    report.stop_reason.to_string(),
                ];
                (row, exit_code(&report))
            }
            Err(e) => {
                let _ = writeln!(stderr, "error at delta={delta}: {e}");
                (
                    [
                        delta.to_string(),
                        String::new(),
                        String::new(),
                        format!("error: {e}"),
                    ],
                    e.exit_code(),
                )
            }
        };
        rows.push(row);
        if status == 0 {
            status = code;
        }
    }
    if let Err(e) = write_csv(&summary_path, &rows) {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    status
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

pub fn write_artifacts(report: &Report, outputs: &[Output], dir: &Path) -> Result<(), CliError> {
    create_dir(dir)?;
    for o in outputs {
        match o {
            Output::ReportJson => {
                let path = dir.join(REPORT_FILE);
                write_file(&path, report_json(report).as_bytes())?;
            }
            Output::TraceCsv => {
                let path = dir.join(TRACE_FILE);
                write_csv(&path, &trace_rows(report))?;
            }
            Output::Svg => {
                let path = dir.join(SVG_FILE);
                emit_svg(report, &path).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Header plus one row per trace entry.
pub fn trace_rows(report: &Report) -> Vec<[String; 7]> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut rows = vec![[
        "iteration",
        "vertex_count",
        "area",
        "area_diff",
        "hausdorff_diff",
        "wall_ms",
        "vertices",
    ]
    .map(String::from)];
    for t in &report.trace {
        let dump = t
            .vertices
            .iter()
            .map(|p| format!("{}:{}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(";");
        rows.push([
            t.iteration.to_string(),
            t.vertex_count().to_string(),
            t.area.to_string(),
            opt(t.area_diff),
            opt(t.hausdorff_diff),
            opt(t.wall_ms),
            dump,
        ]);
    }
    rows
}

fn write_csv<const N: usize>(path: &Path, rows: &[[String; N]]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Write {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.flush().map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}
