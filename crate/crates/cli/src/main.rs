//! `debate-lab`: solve, verify, sweep and simulate debate games from JSON
//! config files.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input,
//! 3 numerical failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use debate_core::export::{write_counts, write_rows};
use debate_core::*;
use serde_json::{json, Value};

/// Bumped whenever a field of the JSON report changes meaning or disappears.
const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "debate-lab", version, about = "Equilibrium analysis of pre-election debate games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the equilibrium: debate, no debate or knife edge.
    Solve {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every structural and Monte Carlo check; exit 1 if any fails.
    Verify {
        config: PathBuf,
        /// Trials per Monte Carlo comparison.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the equilibrium over a range of one parameter, as CSV.
    Sweep {
        config: PathBuf,
        /// q_I, q_C or prior.<name>
        #[arg(long)]
        param: String,
        /// Inclusive range written lo:hi
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the challenger's vote share.
    Simulate {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = ScenarioArg::DebateExAnte)]
        scenario: ScenarioArg,
        /// Challenger quality for the conditional scenario.
        #[arg(long)]
        q_c: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the raw win counts as CSV to this path.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    NoDebate,
    DebateExAnte,
    DebateConditional,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| format!("lower bound: {e}"))?;
    let hi = b.trim().parse::<f64>().map_err(|e| format!("upper bound: {e}"))?;
    Ok((lo, hi))
}

/// Why a run stopped early.
enum Failure {
    Input(String),
    Numeric(String),
    /// Verification ran to the end but some checks failed.
    Checks(Vec<String>),
}

impl From<DebateError> for Failure {
    fn from(e: DebateError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<GameConfig, Failure> {
    GameConfig::from_path(path).map_err(|e| match e {
        DebateError::InvalidConfig { path: field, message } if field == path.display().to_string() => {
            Failure::Input(format!("{field}: {message}"))
        }
        DebateError::InvalidConfig { path: field, message } => {
            Failure::Input(format!("{}: {field}: {message}", path.display()))
        }
        e => e.into(),
    })
}

/// Analyses below assume the contest function is well behaved.
fn require_valid_csf(config: &GameConfig) -> Result<(), Failure> {
    let report = validate_csf(config.csf(), config.q_i(), config.numerics())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "csf: fails {}",
            report.failures().join(", ")
        )))
    }
}

fn report(command: &str, config: &GameConfig, results: Value) -> Value {
    json!({
        "tool": "debate-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config.to_json_value(),
        "results": results,
    })
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("report is plain JSON");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

fn solve(config_path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let config = load(config_path)?;
    require_valid_csf(&config)?;
    let outcome = classify_equilibrium(&config)?;
    emit(&report("solve", &config, to_value(&outcome)), out)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: Value,
}

fn check<T: serde::Serialize>(
    name: &'static str,
    result: Result<T>,
    passed: impl FnOnce(&T) -> bool,
) -> Check {
    match result {
        Ok(v) => Check {
            name,
            passed: passed(&v),
            detail: to_value(&v),
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: json!({ "error": e.to_string() }),
        },
    }
}

fn informative_ends(config: &GameConfig, t: &ThresholdPair) -> Result<bool> {
    let label = |q: f64| classify_debate(q, config).map(|r| r.label);
    let low = match t.q_l {
        Some(q) => label(q / 2.0)? == Label::Informative,
        None => true,
    };
    let high = match t.q_h {
        Some(_) => label(t.upper_probe)? == Label::Informative,
        None => true,
    };
    Ok(low && high && t.gap_at_mean >= -config.numerics().tie_tol)
}

fn verify(config_path: &Path, n: u64, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let config = load(config_path)?;
    let mut checks = vec![
        check(
            "validate_csf",
            validate_csf(config.csf(), config.q_i(), config.numerics()),
            |r| r.passed(),
        ),
        check("posterior_ordering", check_posterior_ordering(&config), |r| {
            r.ordering_holds && r.jensen_holds != Some(false)
        }),
        check(
            "threshold_consistency",
            default_strategy_grid(&config).and_then(|g| threshold_consistency_scan(&config, &g)),
            |r| r.always_p_unique,
        ),
        // An indifferent incumbent has no order-free prediction to test.
        check("sequence_invariance", sequence_invariance_check(&config), |r| {
            r.invariant || r.refused
        }),
    ];
    let thresholds = informativeness_thresholds(&config);
    let ends = thresholds
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|t| informative_ends(&config, t));
    checks.push(match (thresholds, ends) {
        (Ok(t), Ok(ok)) => check("informativeness_thresholds", Ok(t), |_| ok),
        (Ok(_), Err(e)) | (Err(e), _) => check::<()>("informativeness_thresholds", Err(e), |_| false),
    });
    checks.push(check("monte_carlo_oracle", oracle_check(&config, n, seed), |r| r.all_pass));

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.to_string())
        .collect();
    let results = json!({
        "all_pass": failed.is_empty(),
        "failed": failed,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    emit(&report("verify", &config, results), out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn sweep(
    config_path: &Path,
    param: &str,
    (lo, hi): (f64, f64),
    steps: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let config = load(config_path)?;
    require_valid_csf(&config)?;
    let param = SweepParameter::parse(param)?;
    let rows = run_sweep(&config, &param, lo, hi, steps)?;
    match out {
        Some(p) => write_rows(File::create(p).map_err(|e| io_failure(p, e))?, &rows)?,
        None => write_rows(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn simulate(
    config_path: &Path,
    scenario: ScenarioArg,
    q_c: Option<f64>,
    n: u64,
    seed: u64,
    out: Option<&Path>,
    counts: Option<&Path>,
) -> Result<(), Failure> {
    let config = load(config_path)?;
    require_valid_csf(&config)?;
    let scenario = match (scenario, q_c) {
        (ScenarioArg::DebateConditional, Some(q)) => Scenario::DebateConditional(q),
        (ScenarioArg::DebateConditional, None) => {
            return Err(Failure::Input("--q-c: required by the debate-conditional scenario".into()))
        }
        (_, Some(_)) => {
            return Err(Failure::Input("--q-c: only used by the debate-conditional scenario".into()))
        }
        (ScenarioArg::NoDebate, None) => Scenario::NoDebate,
        (ScenarioArg::DebateExAnte, None) => Scenario::DebateExAnte,
    };
    let result = simulate_election(&SimulationSpec { scenario, n, seed }, &config)?;
    if let Some(p) = counts {
        write_counts(File::create(p).map_err(|e| io_failure(p, e))?, &[result])?;
    }
    emit(&report("simulate", &config, to_value(&result)), out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Solve { config, out } => solve(config, out.as_deref()),
        Command::Verify { config, n, seed, out } => verify(config, *n, *seed, out.as_deref()),
        Command::Sweep {
            config,
            param,
            range,
            steps,
            out,
        } => sweep(config, param, *range, *steps, out.as_deref()),
        Command::Simulate {
            config,
            scenario,
            q_c,
            n,
            seed,
            out,
            counts,
        } => simulate(config, *scenario, *q_c, *n, *seed, out.as_deref(), counts.as_deref()),
    };
    // Timing stays off stdout so reports are reproducible byte for byte.
    eprintln!("debate-lab: finished in {} ms", start.elapsed().as_millis());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(names)) => {
            eprintln!("verification failed: {}", names.join(", "));
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
