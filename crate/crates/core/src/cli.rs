//! Command-line surface: `ic`, `run`, `sweep`, `analyze`, `verify`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a run ended
//! INVALID or DIVERGED, 3 verification or internal-consistency failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand};

use crate::dynamics::VoigtParams;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::harness::{analyze_sweep, run_sweep, CriterionVerdict, SweepAnalysis};
use crate::integrate::{integrate_with_state, RunStatus, RunSummary};
use crate::io::checkpoint::{write_checkpoint, Checkpoint};
use crate::io::config::Config;
use crate::io::files::{write_json, write_series};
use crate::io::generate_ic;
use crate::io::summary::{
    reanalyze, run_dir_name, SweepSetup, SweepSummary, ANALYSIS, RUN_SUMMARY, SERIES, SWEEP_SUMMARY,
};
use crate::par;
use crate::spectral::inverse_vector;
use crate::verify::{run_suite, Suite};

pub const OUTPUT_ENV: &str = "VOIGT_OUTPUT_DIR";
pub const DEFAULT_OUTPUT: &str = "output";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUN_FAILED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "euler-voigt", version, about = "Euler-Voigt pseudospectral solver and blow-up criterion sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir and $VOIGT_OUTPUT_DIR).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for random-solenoidal initial data.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the initial condition as a checkpoint.
    Ic {
        #[command(flatten)]
        common: Common,
    },
    /// Integrate a single α and write its series and summary.
    Run {
        #[command(flatten)]
        common: Common,
        /// Regularization length; defaults to the single entry of voigt.alphas.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run every α of voigt.alphas and evaluate both criteria.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Recompute curves, fits and verdict from a finished sweep directory.
    Analyze {
        /// Sweep directory; defaults to --output, then $VOIGT_OUTPUT_DIR.
        dir: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in property suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Parses `argv` (program name first), runs the command, returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::AllRunsInvalid | Error::Diverged { .. } => EXIT_RUN_FAILED,
        Error::OrderingViolation { .. } => EXIT_VERIFY_FAILED,
        _ => EXIT_USAGE,
    }
}

/// `--output` beats `output.dir`, which beats `$VOIGT_OUTPUT_DIR`.
fn output_dir(flag: Option<&Path>, config: Option<&Path>) -> PathBuf {
    flag.or(config)
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
}

fn resolve_workers(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    match flag.or(config) {
        Some(0) => Err(Error::Config("workers must be at least 1".into())),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn load(common: &Common) -> Result<(Config, PathBuf)> {
    let mut cfg = Config::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg = cfg.with_seed(seed)?;
    }
    let out = output_dir(common.output.as_deref(), cfg.output_dir.as_deref());
    fs::create_dir_all(&out)?;
    Ok((cfg, out))
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Ic { common } => cmd_ic(&common),
        Command::Run { common, alpha, workers } => cmd_run(&common, alpha, workers),
        Command::Sweep { common, workers } => cmd_sweep(&common, workers),
        Command::Analyze { dir, output } => {
            let dir = dir.unwrap_or_else(|| output_dir(output.as_deref(), None));
            cmd_analyze(&dir)
        }
        Command::Verify { suite, workers } => cmd_verify(suite.parse()?, resolve_workers(workers, None)?),
    }
}

fn cmd_ic(common: &Common) -> Result<i32> {
    let (cfg, out) = load(common)?;
    let grid = Grid::new(cfg.n)?;
    let u0 = generate_ic(&cfg.ic, &grid)?;
    let path = out.join("ic.evck");
    write_checkpoint(
        &path,
        &Checkpoint {
            n: cfg.n,
            alpha: 0.0,
            t: 0.0,
            velocity: inverse_vector(&u0, &grid)?,
        },
    )?;
    println!("{} initial condition, n = {}: {}", cfg.ic.name(), cfg.n, path.display());
    Ok(EXIT_OK)
}

fn print_run(s: &RunSummary) {
    println!(
        "alpha = {}: M = {:.9e} at t = {:.6}, q(T) = {:.9e}, drift = {:.3e}, steps = {}, {}",
        s.alpha, s.m, s.t_argmax, s.q_final, s.drift, s.steps, s.status
    );
}

fn cmd_run(common: &Common, alpha: Option<f64>, workers: Option<usize>) -> Result<i32> {
    let (cfg, out) = load(common)?;
    let alpha = match (alpha, cfg.alphas.as_slice()) {
        (Some(a), _) => a,
        (None, [a]) => *a,
        (None, _) => {
            return Err(Error::Config(
                "pass --alpha or list exactly one value in voigt.alphas".into(),
            ))
        }
    };
    let workers = resolve_workers(workers, cfg.workers)?;
    let grid = Grid::new(cfg.n)?;
    let params = VoigtParams::new(alpha, &grid)?;
    let u0 = generate_ic(&cfg.ic, &grid)?;
    let mut series = Vec::new();
    let (mut summary, state) = par::with_workers(workers, || {
        integrate_with_state(u0, &params, &grid, &cfg.integrator, &mut series)
    })?;
    write_series(&out.join(SERIES), &series)?;
    summary.series = Some(SERIES.to_string());
    write_json(&out.join(RUN_SUMMARY), &summary)?;
    write_checkpoint(
        &out.join("final.evck"),
        &Checkpoint {
            n: cfg.n,
            alpha,
            t: state.t,
            velocity: inverse_vector(&state.u, &grid)?,
        },
    )?;
    print_run(&summary);
    Ok(if summary.status == RunStatus::Valid {
        EXIT_OK
    } else {
        EXIT_RUN_FAILED
    })
}

fn print_verdict(v: &CriterionVerdict) {
    let fit = |f: &Option<crate::harness::FitResult>| match f {
        Some(f) => format!("beta = {:.6}, r2 = {:.6}, limit proxy = {:.6e}", f.beta, f.r2, f.limit_proxy()),
        None => "no fit".to_string(),
    };
    println!("new criterion: {} ({})", v.new_criterion_evidence, fit(&v.fit_new));
    println!("old criterion: {} ({})", v.old_criterion_evidence, fit(&v.fit_old));
}

fn report_analysis(a: &SweepAnalysis) -> i32 {
    print_verdict(&a.verdict);
    println!(
        "ordering: {} samples checked, {} violations; ceiling violations: {}",
        a.ordering.checked_samples,
        a.ordering.violations,
        a.ceiling_violations.len()
    );
    if a.ceiling_violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn cmd_sweep(common: &Common, workers: Option<usize>) -> Result<i32> {
    let (cfg, out) = load(common)?;
    let workers = resolve_workers(workers, cfg.workers)?;
    let sweep_cfg = cfg.sweep_config(workers)?;
    let result = run_sweep(&sweep_cfg)?;

    let mut runs = Vec::with_capacity(result.runs.len());
    for (i, run) in result.runs.iter().enumerate() {
        let name = run_dir_name(i);
        let dir = out.join(&name);
        fs::create_dir_all(&dir)?;
        write_series(&dir.join(SERIES), &run.series)?;
        let mut summary = run.summary.clone();
        summary.series = Some(format!("{name}/{SERIES}"));
        let mut local = run.summary.clone();
        local.series = Some(SERIES.to_string());
        write_json(&dir.join(RUN_SUMMARY), &local)?;
        print_run(&summary);
        runs.push(summary);
    }

    let analysis = analyze_sweep(&result, &sweep_cfg.time_grid(), &sweep_cfg.thresholds)?;
    let doc = SweepSummary {
        setup: SweepSetup::from(&sweep_cfg),
        runs,
        analysis,
    };
    write_json(&out.join(SWEEP_SUMMARY), &doc)?;
    let code = report_analysis(&doc.analysis);
    if doc.runs.iter().any(|r| r.status != RunStatus::Valid) {
        return Ok(EXIT_RUN_FAILED);
    }
    Ok(code)
}

fn cmd_analyze(dir: &Path) -> Result<i32> {
    let analysis = reanalyze(dir)?;
    write_json(&dir.join(ANALYSIS), &analysis)?;
    Ok(report_analysis(&analysis))
}

fn cmd_verify(suite: Suite, workers: usize) -> Result<i32> {
    let checks = run_suite(suite, workers)?;
    let mut failed = 0;
    for c in &checks {
        println!("{c}");
        failed += usize::from(!c.passed);
    }
    println!("{} checks, {} failed", checks.len(), failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
