//! `elastica run` evolves one scenario and writes trajectory, diagnostics and
//! a report; `elastica verify` runs the acceptance suite.
//!
//! Exit codes: 0 all checks pass, 2 evolution aborted, 3 invariant violated,
//! 4 configuration error (nothing is written).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elastica_core::verify::{verify, VerifyOptions};

use elastica_cli::config::{RunConfig, Settings, OUT_DIR_ENV};
use elastica_cli::run;

const CONFIG_ERROR: u8 = 4;

#[derive(Parser)]
#[command(name = "elastica", version, about = "Dynamics of closed inextensible elastic loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one scenario
    Run {
        /// TOML file with the same keys as the flags
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        settings: Box<Settings>,
    },
    /// Run the acceptance suite
    Verify {
        #[arg(long = "N", alias = "n", default_value_t = 64)]
        grid: usize,
        /// Flip the sign of the cubic nonlinearity (the suite should fail)
        #[arg(long)]
        mutation: bool,
        /// Directory for report.json (default: $ELASTICA_OUT_DIR, else nothing is written)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(CONFIG_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run { config, settings } => run_command(config, *settings),
        Command::Verify { grid, mutation, out } => verify_command(grid, mutation, out),
    }
}

fn run_command(config: Option<PathBuf>, flags: Settings) -> ExitCode {
    let file = match config.as_deref().map(Settings::from_file).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let cfg = match RunConfig::resolve(flags.over(file)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    match run::run(&cfg) {
        Ok(report) => {
            for p in &report.paths {
                let status = if p.completed { "completed" } else { "aborted" };
                println!("{} ({status}, {} samples)", p.solver, p.samples);
                if let Some(f) = &p.failure {
                    println!("  failure: {f}");
                }
                for m in &p.checks {
                    println!("  {} {m}", if m.passed() { "ok  " } else { "FAIL" });
                }
            }
            for m in &report.comparison {
                println!("{} {m}", if m.passed() { "ok  " } else { "FAIL" });
            }
            println!("outputs in {}", cfg.out.display());
            ExitCode::from(report.outcome.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verify_command(grid: usize, mutation: bool, out: Option<PathBuf>) -> ExitCode {
    if elastica_core::spectral::check_grid(grid).is_err() || !(32..=64).contains(&grid) {
        eprintln!("error: verify supports N = 32 or 64, got {grid}");
        return ExitCode::from(CONFIG_ERROR);
    }
    let report = verify(&VerifyOptions {
        grid,
        mutation,
        ..VerifyOptions::default()
    });
    println!("{report}");
    let out = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    if let Some(dir) = out {
        let written = std::fs::create_dir_all(&dir)
            .map_err(|e| e.to_string())
            .and_then(|_| serde_json::to_string_pretty(&report).map_err(|e| e.to_string()))
            .and_then(|text| std::fs::write(dir.join("verify.json"), text).map_err(|e| e.to_string()));
        if let Err(e) = written {
            eprintln!("error: cannot write report to {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
