use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ppe::aps::{ProjectionMethod, SolverConfig};
use ppe::cli::{cmd_solve, cmd_sweep, parse_delta_grid, parse_outputs, Output, RunSpec, SweepSpec};
use ppe::game_model::ParseOptions;
use ppe::vertex_enum::DEFAULT_MAX_VERTICES;

/// Outer bounds on perfect public equilibrium payoffs of two-player repeated games.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the set operator for one discount factor.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        delta: f64,
    },
    /// Solve for each discount factor of a grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly ascending values in [0, 1).
        #[arg(long, value_parser = parse_delta_grid)]
        delta_grid: std::vec::Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    DoubleDescription,
    SupportLp,
}

impl From<Method> for ProjectionMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => ProjectionMethod::Auto,
            Method::DoubleDescription => ProjectionMethod::DoubleDescription,
            Method::SupportLp => ProjectionMethod::SupportLp,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Game file (JSON).
    #[arg(long)]
    game: PathBuf,
    /// Area-difference stopping threshold.
    #[arg(long, default_value_t = 0.005)]
    epsilon: f64,
    /// RDP simplification threshold; 0 disables it.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Stop threshold once the iterate has (nearly) no area.
    #[arg(long, default_value_t = 1e-6)]
    hausdorff_epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Comma-separated subset of report_json, trace_csv, svg.
    #[arg(long, default_value = "report_json,trace_csv", value_parser = parse_outputs)]
    emit: std::vec::Vec<Output>,
    /// How enforceable sets are computed: auto, double-description or support-lp.
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Record per-iteration wall time (makes traces run-dependent).
    #[arg(long)]
    record_timings: bool,
    /// Accept games beyond three actions per player or four signals.
    #[arg(long)]
    allow_large: bool,
}

impl Common {
    fn run_spec(self, delta: f64) -> RunSpec {
        RunSpec {
            game_path: self.game,
            config: SolverConfig {
                delta,
                epsilon: self.epsilon,
                theta: self.theta,
                max_iter: self.max_iter,
                hausdorff_epsilon: self.hausdorff_epsilon,
                max_vertices: self.max_vertices,
                method: self.method.into(),
                record_timings: self.record_timings,
            },
            outputs: self.emit,
            out_dir: self.out,
            parse: ParseOptions {
                allow_large: self.allow_large,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Command::Solve { common, delta } => cmd_solve(&common.run_spec(delta), &mut out, &mut err),
        Command::Sweep { common, delta_grid } => {
            let spec = SweepSpec {
                delta_values: delta_grid,
                run: common.run_spec(0.0),
            };
            cmd_sweep(&spec, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
