//! `pcsteiner`: generate, solve, reduce, verify, trace and benchmark
//! prize-collecting Steiner instances stored as JSON.

mod artifact;
mod bench;
mod failure;
mod gen;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pcsteiner::clustering::submodular_pc_clustering;
use pcsteiner::oracle::OracleBudget;
use pcsteiner::reduction::{reduction_pipeline, write_bundle};
use pcsteiner::solution::SolutionReport;
use pcsteiner::{Instance, Problem};
use serde::Serialize;

use artifact::Artifact;
use failure::{CliResult, Failure, EXIT_VERIFY};
use run::{Algorithm, InitialArg, ProblemArg, RunConfig};

/// Prize-collecting Steiner network solvers.
///
/// Oracle budgets come from the `PCSTEINER_ORACLE_MAX_{EDGES,TERMINALS,
/// DEMANDS,STATES}` variables. Exit codes: 1 verification failure,
/// 2 unreadable input, 3 over budget, 4 invalid configuration.
#[derive(Debug, Parser)]
#[command(name = "pcsteiner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: gen::GenKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Solve one instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Exact)]
        alg: Algorithm,
        #[command(flatten)]
        run: RunArgs,
        /// Tree decomposition in PACE format for `--alg dp`.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a verifiable artifact here.
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
    /// Restrict, merge and write one subinstance per merged tree.
    Reduce {
        instance: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Directory for `piece_*.json` and `manifest.json`.
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
    /// Re-check an artifact; exit 0 iff every check passes.
    Verify {
        artifact: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Clustering event trace as JSON lines.
    Trace {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run algorithms over every instance of a directory and write CSV.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "exact,cluster")]
        alg: Vec<Algorithm>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Defaults to `tree` for rooted instances and `forest` otherwise.
    #[arg(long, value_enum)]
    problem: Option<ProblemArg>,
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Initial solver used by demand restriction.
    #[arg(long, value_enum, default_value_t = InitialArg::Exact)]
    initial: InitialArg,
    /// Omit wall-clock times so outputs are byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

impl RunArgs {
    fn config(&self, td: Option<&Path>) -> CliResult<RunConfig> {
        Ok(RunConfig {
            problem: self.problem,
            epsilon: run::parse_epsilon(&self.epsilon)?,
            initial: self.initial,
            td: td.map(run::load_td).transpose()?,
            budget: OracleBudget::from_env(),
        })
    }
}

#[derive(Serialize)]
struct SolveOutput {
    algorithm: Algorithm,
    problem: Problem,
    #[serde(flatten)]
    solution: SolutionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

/// Writes `text` to `path`, or to stdout.
pub(crate) fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { kind, output } => gen::gen(&kind, output.as_deref()),
        Command::Solve { instance, alg, run, td, output, artifact } => {
            let cfg = run.config(td.as_deref())?;
            let inst = Instance::load(&instance)?;
            let start = Instant::now();
            let result = run::run(&inst, alg, &cfg)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            log::info!("{alg:?} on {}: total {}", instance.display(), result.solution.report().total);
            if let Some(path) = artifact {
                result.artifact.save(&path)?;
            }
            let out = SolveOutput {
                algorithm: alg,
                problem: result.problem,
                solution: result.solution.report(),
                wall_time_ms: (!run.no_timing).then_some(elapsed),
            };
            emit(&pretty(&out)?, output.as_deref())
        }
        Command::Reduce { instance, run, out_dir, artifact } => {
            let cfg = run.config(None)?;
            let inst = Instance::load(&instance)?;
            if cfg.problem_for(&inst) != Problem::Forest {
                return Err(Failure::config("reduce works on forest instances"));
            }
            let out = reduction_pipeline(&inst, &cfg.epsilon, cfg.initial_solver().as_ref())?;
            let manifest = write_bundle(&out_dir, &out)?;
            if let Some(path) = artifact {
                run::merge_artifact(&inst, &out).save(&path)?;
            }
            emit(&pretty(&manifest)?, None)
        }
        Command::Verify { artifact, output } => {
            let report = Artifact::load(&artifact)?.verify()?;
            emit(&pretty(&report)?, output.as_deref())?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::new(EXIT_VERIFY, format!("{} check(s) failed", report.violations.len())))
            }
        }
        Command::Trace { instance, output } => {
            let inst = Instance::load(&instance)?;
            let out = submodular_pc_clustering(&inst)?;
            let mut text = String::new();
            for ev in &out.trace {
                text.push_str(&serde_json::to_string(ev)?);
                text.push('\n');
            }
            emit(&text, output.as_deref())
        }
        Command::Bench { corpus, alg, run, output } => {
            let cfg = run.config(None)?;
            let rows = bench::bench(&corpus, &alg, &cfg, !run.no_timing)?;
            bench::write_csv(&rows, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
