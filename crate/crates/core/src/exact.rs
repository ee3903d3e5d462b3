//! Exact optimization for small instances: a Gray-code enumeration oracle
//! and a depth-first branch-and-bound solver that doubles as the
//! subproblem engine inside the hybrid solver.


use crate::error::{Error, Result};
use crate::problem::{Assignment, BinaryAssignment, QuboProblem};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

const BRUTE_FORCE_LIMIT: usize = 24;

/// Exact global minimum by Gray-code enumeration with incremental flips.
pub fn brute_force(p: &QuboProblem) -> Result<(f64, BinaryAssignment)> {
    let n = p.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity(format!(
            "brute force is guarded at n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )));
    }
    let mut x = BinaryAssignment::zeros(n);
    let mut cache = p.local_fields(&x);
    let mut energy = p.evaluate(&x)?;
    let mut best = energy;
    let mut best_x = x.clone();
    for code in 1u64..(1u64 << n) {
        let i = code.trailing_zeros() as usize;
        energy += p.delta_flip(&x, i, &cache);
        p.commit_flip(&mut x, i, &mut cache);
        if energy < best {
            best = energy;
            best_x = x.clone();
        }
    }
    Ok((best, best_x))
}

#[derive(Debug, Clone)]
pub struct BnbOutcome {
    pub result: SolverResult,
    pub proven_optimal: bool,
    pub nodes_visited: u64,
}

struct BnbState<'a> {
    p: &'a QuboProblem,
    order: Vec<usize>,
    /// fixed[i]: 2 = free, 0/1 = branch value
    fixed: Vec<u8>,
    /// diag_i + sum over fixed neighbors j of quad_ij x_j, for each variable
    cond_linear: Vec<f64>,
    /// sum over free-free pairs of min(0, quad_ij)
    free_pair_slack: f64,
    incumbent: f64,
    incumbent_x: Vec<u8>,
    nodes: u64,
    clock: RunClock,
    timed_out: bool,
}

impl<'a> BnbState<'a> {
    /// Admissible bound on the best completion of the current partial
    /// assignment: fixed-part energy plus the term-wise relaxation
    /// sum_i min(0, conditional linear) + sum_{free pairs} min(0, quad).
    fn lower_bound(&self, partial_energy: f64) -> f64 {
        let mut bound = partial_energy + self.free_pair_slack;
        for i in 0..self.p.n() {
            if self.fixed[i] == 2 {
                bound += self.cond_linear[i].min(0.0);
            }
        }
        bound
    }

    fn dive(&mut self, depth: usize, partial_energy: f64) {
        self.nodes += 1;
        self.clock.bump(1); // one iteration = one search node
        if (self.nodes % 1024 == 0 || self.clock.iters_left() == Some(0))
            && !self.clock.should_continue()
        {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        if depth == self.order.len() {
            if partial_energy < self.incumbent {
                self.incumbent = partial_energy;
                self.incumbent_x = self.fixed.clone();
            }
            return;
        }
        if self.lower_bound(partial_energy) >= self.incumbent {
            return;
        }
        let var = self.order[depth];
        let gain = self.cond_linear[var];
        // value minimizing the immediate partial-energy increase first
        let values: [u8; 2] = if gain < 0.0 { [1, 0] } else { [0, 1] };
        for value in values {
            let child_energy = partial_energy + if value == 1 { gain } else { 0.0 };
            self.fix(var, value);
            self.dive(depth + 1, child_energy);
            self.unfix(var, value);
            if self.timed_out {
                return;
            }
        }
    }

    fn fix(&mut self, var: usize, value: u8) {
        self.fixed[var] = value;
        for &(j, w) in self.p.neighbors(var) {
            let j = j as usize;
            if self.fixed[j] == 2 {
                self.free_pair_slack -= w.min(0.0);
                if value == 1 {
                    self.cond_linear[j] += w;
                }
            }
        }
    }

    fn unfix(&mut self, var: usize, value: u8) {
        self.fixed[var] = 2;
        for &(j, w) in self.p.neighbors(var) {
            let j = j as usize;
            if self.fixed[j] == 2 {
                self.free_pair_slack += w.min(0.0);
                if value == 1 {
                    self.cond_linear[j] -= w;
                }
            }
        }
    }
}

/// Depth-first branch and bound. Within budget the result is exactly
/// optimal and `proven_optimal` is set; otherwise the best incumbent is
/// returned. A warm-start incumbent never worsens the outcome.
pub fn branch_and_bound(
    p: &QuboProblem,
    budget: Budget,
    incumbent: Option<&BinaryAssignment>,
) -> Result<BnbOutcome> {
    let n = p.n();
    let clock = RunClock::start(budget);
    let mut recorder = Recorder::new();

    let warm = match incumbent {
        Some(x) => x.clone(),
        None => BinaryAssignment::zeros(n),
    };
    let warm_energy = p.evaluate(&warm)?;
    recorder.evaluations += 1;
    recorder.offer(warm_energy, &Assignment::Binary(warm.clone()), clock.now());

    // branch on high-influence variables first
    let mut order: Vec<usize> = (0..n).collect();
    let influence: Vec<f64> = (0..n)
        .map(|i| {
            p.diag()[i].abs() + p.neighbors(i).iter().map(|&(_, w)| w.abs()).sum::<f64>()
        })
        .collect();
    order.sort_by(|&a, &b| influence[b].total_cmp(&influence[a]));

    let free_pair_slack: f64 = p.pairs().iter().map(|&(_, _, w)| w.min(0.0)).sum();
    let mut state = BnbState {
        p,
        order,
        fixed: vec![2; n],
        cond_linear: p.diag().to_vec(),
        free_pair_slack,
        incumbent: warm_energy,
        incumbent_x: warm.0.clone(),
        nodes: 0,
        clock,
        timed_out: false,
    };
    state.dive(0, p.offset());

    if state.incumbent < warm_energy {
        let x = BinaryAssignment(state.incumbent_x.iter().map(|&v| if v == 1 { 1 } else { 0 }).collect());
        recorder.evaluations += 1;
        recorder.offer(state.incumbent, &Assignment::Binary(x), state.clock.now());
    }
    recorder.evaluations += state.nodes;

    let result = recorder.finish(state.clock.now());
    Ok(BnbOutcome { result, proven_optimal: !state.timed_out, nodes_visited: state.nodes })
}
