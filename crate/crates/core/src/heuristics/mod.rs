//! The five baseline solvers plus the shared batch-aggregation contract.

pub mod cim;
pub mod ga;
pub mod params;
pub mod pt;
pub mod sa;
pub mod sb;

pub use cim::cim_heuristic;
pub use ga::genetic_algorithm;
pub use params::{CimParams, GaParams, ParamLedger, PtParams, QisParams, SaParams, SbParams};
pub use pt::parallel_tempering;
pub use sa::simulated_annealing;
pub use sb::simulated_bifurcation;

use crate::error::Result;
use crate::result::SolverResult;

/// Batch of `batch` seeded runs (seed = base + replica index); the batch
/// result is the elementwise best member, so it is <= every member.
pub fn run_batch(
    batch: usize,
    seed_base: u64,
    mut run: impl FnMut(u64) -> Result<SolverResult>,
) -> Result<(SolverResult, Vec<SolverResult>)> {
    assert!(batch >= 1);
    let mut members = Vec::with_capacity(batch);
    for replica in 0..batch {
        members.push(run(seed_base + replica as u64)?);
    }
    let best = members
        .iter()
        .min_by(|a, b| a.best_energy.total_cmp(&b.best_energy))
        .expect("batch >= 1")
        .clone();
    Ok((best, members))
}
