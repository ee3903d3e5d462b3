//! Binary quadratic optimization toolkit: QUBO/Ising models, exact
//! solvers, five metaheuristic baselines, a hybrid adaptive solver with
//! automatic mode selection, benchmark instance generators/parsers, and
//! a time-budgeted benchmark harness with competition ranking.

pub mod bench;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod instances;
pub mod problem;
pub mod qis;
pub mod result;
pub mod rng;

pub use error::{Error, Result};
pub use problem::{Assignment, BinaryAssignment, IsingProblem, QuboProblem, SpinAssignment};
pub use result::{Budget, SolverResult};

#[cfg(test)]
pub(crate) mod test_util {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    use crate::problem::{BinaryAssignment, QuboProblem};

    /// Dense random QUBO with coefficients uniform in [-1, 1).
    pub fn random_qubo(n: usize, seed: u64) -> QuboProblem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push(((i, j), rng.gen_range(-1.0..1.0)));
            }
        }
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        QuboProblem::new(n, pairs, diag, 0.0).expect("valid random problem")
    }

    pub fn random_bits(n: usize, seed: u64) -> BinaryAssignment {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect())
    }
}
