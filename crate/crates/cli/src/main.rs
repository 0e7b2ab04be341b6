//! `aqg`: runs, sweeps, verification suites and the restart experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use aqg_core::harness::{self, exit, HarnessError, VerifySuite};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "aqg",
    version,
    about = "Anisotropic SQG simulator and verification harness"
)]
struct Cli {
    /// Directory for all artifacts.
    #[arg(long, global = true, default_value = "aqg-out")]
    out: PathBuf,
    /// Overrides the seed of generated data.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one configuration and classify the trajectory.
    Run { config: PathBuf },
    /// Run every (alpha, beta) point of a sweep file.
    Sweep { config: PathBuf },
    /// Run an inequality or solver suite: lemma1, lemma2, lemma3, lemma6, solver, all.
    Verify { suite: String },
    /// Restart from an intermediate state and compare the overlap.
    Restart { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn dispatch(cli: &Cli) -> Result<i32, HarnessError> {
    match &cli.command {
        Command::Run { config } => {
            let record = harness::cmd_run(config, &cli.out, cli.seed)?;
            if let Some(abort) = &record.aborted {
                eprintln!(
                    "warning: run stopped at t = {:e}: {}",
                    abort.t, abort.reason
                );
            }
            println!("{}", record.summary());
            println!("report: {}", record.report_path.display());
            Ok(exit::SUCCESS)
        }
        Command::Sweep { config } => {
            let (rows, path) = harness::cmd_sweep(config, &cli.out, cli.seed)?;
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: ({}, {}) failed: {}",
                    r.alpha,
                    r.beta,
                    r.error.as_deref().unwrap_or("")
                );
            }
            let bounded = rows.iter().filter(|r| r.bounded).count();
            println!(
                "{} points, {bounded} bounded; wrote {}",
                rows.len(),
                path.display()
            );
            Ok(exit::SUCCESS)
        }
        Command::Verify { suite } => {
            let suite: VerifySuite = suite.parse()?;
            let (outcome, path) = harness::cmd_verify(suite, &cli.out, cli.seed)?;
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            for r in &outcome.reports {
                let status = if r.passed() { "ok" } else { "FAIL" };
                println!(
                    "{status:>4} {} [{}] max={:e} violations={}",
                    r.lemma, r.params, r.max_ratio, r.violations
                );
            }
            println!("wrote {}", path.display());
            match outcome.worst() {
                None => Ok(exit::SUCCESS),
                Some(w) => {
                    eprintln!(
                        "verification failed; reproduce with --seed {} ({} [{}])",
                        w.worst_case_seed, w.lemma, w.params
                    );
                    Ok(exit::VERIFICATION_FAILED)
                }
            }
        }
        Command::Restart { config } => {
            let o = harness::cmd_restart(config, &cli.out, cli.seed)?;
            if let Some(w) = &o.warning {
                eprintln!("warning: {w}");
            }
            println!(
                "restart at t0 = {:e}: max L2 discrepancy {:e} over {} samples",
                o.t0, o.discrepancy, o.compared
            );
            println!("comparison: {}", o.comparison_path.display());
            Ok(if o.passed() {
                exit::SUCCESS
            } else {
                exit::VERIFICATION_FAILED
            })
        }
    }
}
