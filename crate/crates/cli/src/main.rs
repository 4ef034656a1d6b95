use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use twosample_cli::dataset::write_csv;
use twosample_cli::run::{
    exit_code, run_test, BackendArg, FamilyArg, MethodArg, PriorArg, TestConfig, EXIT_ERROR,
};
use twosample_cli::simulate::{generate, Generator, SimulateConfig};

/// Bayesian two-sample tests with conjugate and Dirichlet-process-mixture models.
#[derive(Parser)]
#[command(name = "twosample", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether two CSV samples come from the same distribution.
    ///
    /// Writes a JSON report to stdout. Exit code 0 means H0_same,
    /// 1 means H1_different, 2 means a usage or data error.
    Test(TestArgs),
    /// Write a seeded synthetic sample pair as two CSV files.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct TestArgs {
    /// CSV file with sample X.
    x: PathBuf,
    /// CSV file with sample Y.
    y: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// DPM evidence backend; `auto` uses exact enumeration up to 12 pooled points.
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
    /// DP concentration.
    #[arg(long, default_value_t = twosample::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "default")]
    prior: PriorArg,
    /// JSON prior with family-native hyperparameters, e.g. {"family":"bernoulli","a":1,"b":1}.
    #[arg(long)]
    prior_file: Option<PathBuf>,
    /// Log prior odds of H1 against H0, added to the log Bayes factor.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    log_prior_odds: f64,
    /// Input files have no header line.
    #[arg(long)]
    no_header: bool,
    /// Write BHC merge traces for X, Y and the pooled sample to this file.
    #[arg(long)]
    bhc_trace: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    generator: Generator,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Size of both samples unless --m1/--m2 are given.
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long)]
    m2: Option<usize>,
    /// Mean shift of Y (gaussian-shift).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    shift: f64,
    /// Standard deviation of Y (gaussian-scale).
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Success rate of X (bernoulli-rate).
    #[arg(long, default_value_t = 0.5)]
    p1: f64,
    /// Success rate of Y (bernoulli-rate).
    #[arg(long, default_value_t = 0.5)]
    p2: f64,
    /// Half-distance between the mixture modes (mixture-vs-unimodal).
    #[arg(long, default_value_t = 2.0)]
    separation: f64,
    #[arg(long, default_value = "x.csv")]
    out_x: PathBuf,
    #[arg(long, default_value = "y.csv")]
    out_y: PathBuf,
}

fn test(args: TestArgs) -> anyhow::Result<i32> {
    let cfg = TestConfig {
        x_path: args.x,
        y_path: args.y,
        method: args.method,
        family: args.family,
        backend: args.backend,
        alpha: args.alpha,
        prior: args.prior,
        prior_file: args.prior_file,
        log_prior_odds: args.log_prior_odds,
        has_header: !args.no_header,
        bhc_trace: args.bhc_trace,
    };
    let report = run_test(&cfg)?;
    println!("{}", report.to_json());
    eprintln!("{}", report.summary());
    Ok(exit_code(report.decision))
}

fn simulate(args: SimulateArgs) -> anyhow::Result<i32> {
    let cfg = SimulateConfig {
        generator: args.generator,
        dim: args.dim,
        m1: args.m1.unwrap_or(args.m),
        m2: args.m2.unwrap_or(args.m),
        shift: args.shift,
        scale: args.scale,
        p1: args.p1,
        p2: args.p2,
        separation: args.separation,
        seed: args.seed,
    };
    let (x, y) = generate(&cfg)?;
    write_csv(&args.out_x, &x)
        .with_context(|| format!("{}: cannot write", args.out_x.display()))?;
    write_csv(&args.out_y, &y)
        .with_context(|| format!("{}: cannot write", args.out_y.display()))?;
    eprintln!(
        "wrote {} rows to {} and {} rows to {}",
        x.len(),
        args.out_x.display(),
        y.len(),
        args.out_y.display()
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match cli.command {
        Command::Test(args) => test(args),
        Command::Simulate(args) => simulate(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
