use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crossed::scenario::{run_scenario, Overrides, ScenarioError};
use crossed::suites::{run_suite, SuiteFamily};
use crossed::{builtins, Config, Mode};

#[derive(Parser)]
#[command(name = "crossed", version, about = "Run crossed-product scenarios and randomized law suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, or a bundled scenario by name.
    Run {
        scenario: String,
        #[command(flatten)]
        opts: Opts,
        /// Root seed, overriding the scenario's.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a seeded randomized suite: section2, section3 or l-algebra.
    Fuzz {
        family: SuiteFamily,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: Opts,
    },
    /// List the bundled scenarios.
    Builtins,
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    tol: Option<f64>,
    /// Closure size limit.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Also write the text report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the machine-readable (JSON) report here.
    #[arg(long)]
    machine_report: Option<PathBuf>,
}

fn write(path: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(()),
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run(scenario: &str, opts: &Opts, seed: Option<u64>) -> ExitCode {
    let overrides = Overrides { tol: opts.tol, bound: opts.bound, mode: opts.mode, seed };
    let path = Path::new(scenario);
    let result = if path.exists() {
        run_scenario(path, &overrides)
    } else if builtins::source(scenario).is_some() {
        builtins::run_builtin(scenario, &overrides)
    } else {
        Err(ScenarioError::Io(format!("`{scenario}` is neither a file nor a bundled scenario")))
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let text = report.to_text();
    print!("{text}");
    if let Err(e) = write(&opts.report, &text).and_then(|_| write(&opts.machine_report, &report.to_json())) {
        return input_error(e);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn fuzz(family: SuiteFamily, count: u64, seed: u64, opts: &Opts) -> ExitCode {
    let mut cfg = Config::default().with_seed(seed);
    if let Some(t) = opts.tol {
        cfg = cfg.with_tol(t);
    }
    if let Some(b) = opts.bound {
        cfg = cfg.with_bound(b);
    }
    if let Some(m) = opts.mode {
        cfg = cfg.with_mode(m);
    }
    if let Err(e) = cfg.validate() {
        return input_error(e);
    }
    let report = match run_suite(family, count, seed, &cfg) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let text = report.to_text();
    print!("{text}");
    if let Err(e) = write(&opts.report, &text).and_then(|_| write(&opts.machine_report, &report.to_json())) {
        return input_error(e);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { scenario, opts, seed } => run(&scenario, &opts, seed),
        Command::Fuzz { family, count, seed, opts } => fuzz(family, count, seed, &opts),
        Command::Builtins => {
            for name in builtins::names() {
                println!("{name:28} {}", builtins::summary(name).unwrap_or(""));
            }
            ExitCode::SUCCESS
        }
    }
}
