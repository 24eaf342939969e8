use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use densel::harness::{
    self, lowerbound_csv, parse_backend, run_bench, run_lowerbound, run_select, run_verify, summary_path, Algo,
    BenchArgs, HarnessError, InstanceFile, LowerboundArgs, SelectArgs, SUITES,
};
use densel::lowerbound::Learner;
use densel::oracle::BackendKind;
use densel::rational::{parse_rational, ratio, Rational};

#[derive(Parser)]
#[command(name = "densel", version, about = "Density selection from a finite candidate family")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trial-parallel commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Score with exact rational arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    rational: bool,
    /// Score with floating-point arithmetic.
    #[arg(long, global = true)]
    float: bool,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one learner on an instance file.
    Select(SelectCmd),
    /// Run the two-family distinguishing experiment.
    Lowerbound(LowerboundCmd),
    /// Run a verification suite.
    Verify(VerifyCmd),
    /// Compare oracle backends under A1.
    Bench(BenchCmd),
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct SelectCmd {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    algo: Algo,
    #[arg(long, value_parser = rational_arg, default_value = "1/10")]
    epsilon: Rational,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, value_parser = parse_backend, default_value = "fresh")]
    oracle: BackendKind,
    #[arg(long, default_value_t = 0.01)]
    gauss_sigma: f64,
    /// Shared sample size for the reuse and gauss oracles.
    #[arg(long)]
    shared_m: Option<usize>,
    /// Sample size for yatracos and static.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct LowerboundCmd {
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    beta: Rational,
    #[arg(long = "N", default_value_t = 10)]
    n_half: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Comma-separated learners: yatracos, bayes, exact, a1.
    #[arg(long, value_delimiter = ',', default_value = "yatracos")]
    algo: Vec<String>,
    #[arg(long, value_parser = rational_arg, default_value = "1/10")]
    epsilon: Rational,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// `separation-demo` fixes beta, N, m and learners.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
}

#[derive(Args)]
struct BenchCmd {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    domain_size: usize,
    #[arg(long, value_parser = rational_arg, default_value = "1/5")]
    epsilon: Rational,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 200)]
    shared_m: usize,
    #[arg(long, default_value_t = 0.01)]
    gauss_sigma: f64,
}

fn learner(name: &str, cmd: &LowerboundCmd) -> Result<Learner, HarnessError> {
    Ok(match name {
        "yatracos" => Learner::Yatracos,
        "bayes" => Learner::Bayes,
        "exact" => Learner::Exact {
            epsilon: cmd.epsilon.clone(),
        },
        "a1" => Learner::A1Fresh {
            epsilon: cmd.epsilon.clone(),
            delta: cmd.delta,
        },
        other => return Err(HarnessError::Schema(format!("unknown learner `{other}`"))),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => harness::write_file(path, text),
        None => {
            // A closed pipe (e.g. `| head`) is not an error for a report writer.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    if cli.threads > 0 {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match cli.command {
        Command::Select(cmd) => {
            let instance = InstanceFile::load(&cmd.instance)?.resolve()?;
            let args = SelectArgs {
                algo: cmd.algo,
                epsilon: cmd.epsilon,
                delta: cmd.delta,
                oracle: cmd.oracle,
                gauss_sigma: cmd.gauss_sigma,
                shared_m: cmd.shared_m,
                samples: cmd.samples,
                seed: cli.seed,
                float: cli.float,
            };
            emit(&cli.out, &run_select(&instance, &args)?.to_json())
        }
        Command::Lowerbound(cmd) => {
            let args = match cmd.preset.as_deref() {
                Some("separation-demo") => LowerboundArgs::separation_demo(cmd.trials, cli.seed)?,
                Some(other) => return Err(HarnessError::Schema(format!("unknown preset `{other}`"))),
                None => LowerboundArgs {
                    beta: cmd.beta.clone(),
                    n_half: cmd.n_half,
                    m: cmd.m,
                    trials: cmd.trials,
                    learners: cmd.algo.iter().map(|a| learner(a, &cmd)).collect::<Result<_, _>>()?,
                    seed: cli.seed,
                },
            };
            let (report, experiments) = run_lowerbound(&args)?;
            match &cli.out {
                Some(path) => {
                    harness::write_file(path, &lowerbound_csv(&experiments))?;
                    harness::write_file(&summary_path(path), &report.to_json())
                }
                None => emit(&None, &report.to_json()),
            }
        }
        Command::Verify(cmd) => {
            let suites: Vec<&str> = if cmd.suite == "all" {
                SUITES.to_vec()
            } else {
                vec![cmd.suite.as_str()]
            };
            let mut reports = Vec::new();
            for suite in suites {
                reports.push(run_verify(suite, cli.seed)?);
            }
            emit(&cli.out, &serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
            match reports.iter().find(|r| !r.passed()) {
                Some(r) => Err(HarnessError::VerifyFailed {
                    suite: r.suite.clone(),
                    failures: r.failures.len(),
                }),
                None => Ok(()),
            }
        }
        Command::Bench(cmd) => {
            let args = BenchArgs {
                n: cmd.n,
                domain_size: cmd.domain_size,
                epsilon: cmd.epsilon,
                delta: cmd.delta,
                trials: cmd.trials,
                shared_m: cmd.shared_m,
                gauss_sigma: cmd.gauss_sigma,
                seed: cli.seed,
            };
            if args.epsilon <= ratio(0, 1) {
                return Err(HarnessError::Schema("epsilon must be positive".into()));
            }
            emit(&cli.out, &run_bench(&args)?.to_json())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
