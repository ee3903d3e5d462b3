//! Command-line front end: instance generation, single solves, suite
//! benchmarking, ranking, and reference verification.
//!
//! Exit codes: 0 success, 1 configuration error, 2 instance I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qubo_suite::bench::{
    self, emit_table, parse_report_csv, run_suite, verify_reference, BenchSuite, SolverId,
    TableFormat,
};
use qubo_suite::heuristics::ParamLedger;
use qubo_suite::instances::io::{load_instance, save_instance, Family, Instance};
use qubo_suite::qis::ModeId;
use qubo_suite::result::Budget;
use qubo_suite::Error;

#[derive(Parser)]
#[command(name = "qubo-suite", about = "QUBO/Ising solver suite and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance file
    Generate {
        /// Instance family: maxcut | nae3sat | sk (maxcut is parse-only)
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clauses-per-variable ratio (nae3sat only; default 2.11)
        #[arg(long)]
        ratio: Option<f64>,
        /// Output path (JSON)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one solver on one instance
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Solver id: sa | pt | ga | sb | cim | qis | bnb
        #[arg(long)]
        solver: String,
        #[arg(long)]
        budget_ms: Option<u64>,
        /// Iteration cap (bit-deterministic when used without --budget-ms)
        #[arg(long)]
        iters: Option<u64>,
        #[arg(long, default_value_t = 1)]
        batch: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pin a single hybrid-solver mode, e.g. G2-R3 (qis only)
        #[arg(long)]
        mode: Option<String>,
        /// Restrict the hybrid solver to its reduced mode catalogue
        #[arg(long)]
        legacy: bool,
        /// Fraction of the budget the hybrid solver spends probing modes
        #[arg(long)]
        probe_fraction: Option<f64>,
        /// Parameter ledger file (TOML); defaults to the built-in ledger
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Run a benchmark suite over an instance x solver grid
    Bench {
        #[arg(long)]
        suite: PathBuf,
        /// Output directory (a timestamped subdirectory is created)
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Recompute competition ranks from a report CSV
    Rank {
        #[arg(long)]
        report: PathBuf,
    },
    /// Verify a report CSV against a published reference table
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn ledger(params: &Option<PathBuf>) -> Result<ParamLedger, Error> {
    match params {
        Some(p) => ParamLedger::from_file(p),
        None => Ok(ParamLedger::builtin()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { family, n, seed, ratio, out } => {
            let family: Family = family.parse()?;
            let inst = Instance::generate(family, n, seed, ratio)?;
            save_instance(&out, &inst)?;
            println!("wrote {} ({} variables) to {}", inst.name(), inst.n(), out.display());
            Ok(())
        }
        Command::Solve {
            instance,
            solver,
            budget_ms,
            iters,
            batch,
            seed,
            mode,
            legacy,
            probe_fraction,
            params,
        } => {
            let inst = load_instance(&instance)?;
            let id: SolverId = solver.parse()?;
            let mode = mode.as_deref().map(ModeId::parse).transpose()?;
            if mode.is_some() && id != SolverId::Qis {
                return Err(Error::Config("--mode applies to the qis solver only".into()));
            }
            if budget_ms.is_none() && iters.is_none() {
                return Err(Error::Config("set --budget-ms and/or --iters".into()));
            }
            let mut ledger = ledger(&params)?;
            ledger.qis.legacy = legacy;
            if let Some(f) = probe_fraction {
                ledger.qis.probe_fraction = f;
            }
            let budget = Budget {
                wall: budget_ms.map(std::time::Duration::from_millis),
                max_iters: iters,
            };
            let (best, members) = qubo_suite::heuristics::run_batch(batch, seed, |s| {
                bench::run_solver(id, &inst, budget, s, &ledger, mode)
            })?;
            for (r, m) in members.iter().enumerate() {
                println!(
                    "member {r}: objective {} (time_to_best {:.4}, evaluations {})",
                    inst.objective(m.best_energy),
                    m.time_to_best,
                    m.evaluations
                );
            }
            println!("best objective: {}", inst.objective(best.best_energy));
            println!("best raw energy: {}", best.best_energy);
            let spins = best.best_assignment.as_spins();
            if let Some((metric, value)) = inst.domain_metric(&spins)? {
                println!("{metric}: {value}");
            }
            Ok(())
        }
        Command::Bench { suite, out, workers, params } => {
            let suite = BenchSuite::from_file(&suite)?;
            let ledger = ledger(&params)?;
            let outcome = run_suite(&suite, &ledger, workers)?;
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .expect("system clock after 1970")
                .as_millis();
            let dir = out.join(format!("bench-{stamp}"));
            bench::persist_outcome(&dir, &outcome)?;
            for e in &outcome.errors {
                eprintln!("warning: {e}");
            }
            print!("{}", emit_table(&outcome.report, TableFormat::Markdown)?);
            println!("results written to {}", dir.display());
            Ok(())
        }
        Command::Rank { report } => {
            let text = std::fs::read_to_string(&report)?;
            let report = parse_report_csv(&text)?;
            let ranked = bench::compute_ranks(&report)?;
            for w in &ranked.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", emit_table(&report, TableFormat::Markdown)?);
            Ok(())
        }
        Command::Verify { report, reference } => {
            let text = std::fs::read_to_string(&report)?;
            let report = parse_report_csv(&text)?;
            let summary = verify_reference(&report, &reference)?;
            print!("{summary}");
            Ok(())
        }
    }
}
