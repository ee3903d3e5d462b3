//! Run budgets, trace recording, and the shared solver result type.
//!
//! A budget carries an optional wall-clock limit and an optional iteration
//! cap; every solver checks both at sweep/step granularity. When only the
//! iteration cap is set the run is bit-deterministic, and all reported
//! times are logical (iteration counts) rather than wall seconds so that
//! repeated runs produce identical records.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::problem::Assignment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub wall: Option<Duration>,
    pub max_iters: Option<u64>,
}

impl Budget {
    pub fn wall_ms(ms: u64) -> Self {
        Self { wall: Some(Duration::from_millis(ms)), max_iters: None }
    }

    pub fn iters(cap: u64) -> Self {
        Self { wall: None, max_iters: Some(cap) }
    }

    pub fn wall_ms_and_iters(ms: u64, cap: u64) -> Self {
        Self { wall: Some(Duration::from_millis(ms)), max_iters: Some(cap) }
    }

    /// Split off a fraction of this budget (used for probe slices).
    pub fn fraction(&self, f: f64) -> Budget {
        Budget {
            wall: self.wall.map(|d| d.mul_f64(f)),
            max_iters: self.max_iters.map(|c| ((c as f64) * f).floor() as u64),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.wall.is_none() && self.max_iters.is_some()
    }
}

/// Per-run clock: tracks elapsed wall time and consumed iterations.
#[derive(Debug)]
pub struct RunClock {
    start: Instant,
    budget: Budget,
    iters: u64,
}

impl RunClock {
    pub fn start(budget: Budget) -> Self {
        Self { start: Instant::now(), budget, iters: 0 }
    }

    pub fn bump(&mut self, n: u64) {
        self.iters += n;
    }

    pub fn iters(&self) -> u64 {
        self.iters
    }

    pub fn should_continue(&self) -> bool {
        if let Some(cap) = self.budget.max_iters {
            if self.iters >= cap {
                return false;
            }
        }
        if let Some(wall) = self.budget.wall {
            if self.start.elapsed() >= wall {
                return false;
            }
        }
        true
    }

    /// Remaining iterations under the cap, if capped.
    pub fn iters_left(&self) -> Option<u64> {
        self.budget.max_iters.map(|c| c.saturating_sub(self.iters))
    }

    /// Logical or wall time, in seconds (iterations when deterministic).
    pub fn now(&self) -> f64 {
        if self.budget.is_deterministic() {
            self.iters as f64
        } else {
            self.start.elapsed().as_secs_f64()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TracePoint {
    pub time: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub best_energy: f64,
    pub best_assignment: Assignment,
    pub time_to_best: f64,
    pub wall_time: f64,
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
}

impl SolverResult {
    /// Pick the better of two results (ties keep `self`).
    pub fn min(self, other: SolverResult) -> SolverResult {
        if other.best_energy < self.best_energy {
            other
        } else {
            self
        }
    }
}

/// Accumulates the best-so-far incumbent and its improvement trace.
/// Only strict improvements are recorded, so trace energies are strictly
/// decreasing and times non-decreasing by construction.
#[derive(Debug)]
pub struct Recorder {
    best: Option<(f64, Assignment)>,
    time_to_best: f64,
    trace: Vec<TracePoint>,
    pub evaluations: u64,
}

impl Recorder {
    pub fn new() -> Self {
        Self { best: None, time_to_best: 0.0, trace: Vec::new(), evaluations: 0 }
    }

    pub fn best_energy(&self) -> Option<f64> {
        self.best.as_ref().map(|(e, _)| *e)
    }

    pub fn best_assignment(&self) -> Option<&Assignment> {
        self.best.as_ref().map(|(_, a)| a)
    }

    /// Offer a candidate; records it only on strict improvement.
    pub fn offer(&mut self, energy: f64, assignment: &Assignment, now: f64) -> bool {
        let improved = match &self.best {
            Some((e, _)) => energy < *e,
            None => true,
        };
        if improved {
            self.best = Some((energy, assignment.clone()));
            self.time_to_best = now;
            self.trace.push(TracePoint { time: now, energy });
        }
        improved
    }

    pub fn finish(self, wall_time: f64) -> SolverResult {
        let (best_energy, best_assignment) =
            self.best.expect("recorder finished without any candidate");
        SolverResult {
            best_energy,
            best_assignment,
            time_to_best: self.time_to_best,
            wall_time,
            evaluations: self.evaluations,
            trace: self.trace,
        }
    }
}

impl Default for Recorder {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Assignment, BinaryAssignment};

    fn bits(v: Vec<u8>) -> Assignment {
        Assignment::Binary(BinaryAssignment(v))
    }

    #[test]
    fn recorder_trace_monotone() {
        let mut r = Recorder::new();
        assert!(r.offer(5.0, &bits(vec![0]), 0.0));
        assert!(!r.offer(5.0, &bits(vec![0]), 1.0)); // tie not recorded
        assert!(!r.offer(6.0, &bits(vec![1]), 2.0));
        assert!(r.offer(3.0, &bits(vec![1]), 3.0));
        let res = r.finish(4.0);
        assert_eq!(res.best_energy, 3.0);
        assert_eq!(res.time_to_best, 3.0);
        assert_eq!(res.trace.len(), 2);
        assert!(res.trace.windows(2).all(|w| w[1].energy < w[0].energy && w[1].time >= w[0].time));
        assert_eq!(res.trace.last().unwrap().energy, res.best_energy);
    }

    #[test]
    fn iteration_cap_budget_stops() {
        let mut clock = RunClock::start(Budget::iters(10));
        assert!(clock.should_continue());
        clock.bump(10);
        assert!(!clock.should_continue());
        assert_eq!(clock.now(), 10.0); // logical time under pure cap
    }

    #[test]
    fn budget_fraction_splits_iters() {
        let b = Budget::iters(100).fraction(0.3);
        assert_eq!(b.max_iters, Some(30));
    }
}
