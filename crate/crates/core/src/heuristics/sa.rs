//! Simulated annealing: Metropolis single-flip sweeps over a geometric
//! temperature schedule, re-annealing from a fresh start whenever the
//! schedule finishes before the budget does.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::params::SaParams;
use crate::problem::{Assignment, BinaryAssignment, QuboProblem};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

pub fn simulated_annealing(
    p: &QuboProblem,
    budget: Budget,
    seed: u64,
    params: &SaParams,
) -> Result<SolverResult> {
    let n = p.n();
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let t_start = params.t_start.unwrap_or_else(|| (2.0 * p.max_abs_coeff()).max(1e-3));
    let t_end = params.t_end.min(t_start / 2.0);
    let decay = params
        .decay
        .unwrap_or_else(|| (t_end / t_start).powf(1.0 / params.sweeps_per_anneal as f64));

    'outer: loop {
        let mut x = BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect());
        let mut cache = p.local_fields(&x);
        let mut energy = p.evaluate(&x)?;
        recorder.evaluations += 1;
        recorder.offer(energy, &Assignment::Binary(x.clone()), clock.now());

        let mut temperature = t_start;
        for _ in 0..params.sweeps_per_anneal {
            if !clock.should_continue() {
                break 'outer;
            }
            for i in 0..n {
                let delta = p.delta_flip(&x, i, &cache);
                recorder.evaluations += 1;
                let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp();
                if accept {
                    p.commit_flip(&mut x, i, &mut cache);
                    energy += delta;
                    if recorder.best_energy().map_or(true, |b| energy < b) {
                        recorder.offer(energy, &Assignment::Binary(x.clone()), clock.now());
                    }
                }
            }
            temperature = (temperature * decay).max(t_end);
            clock.bump(1);
        }
        // schedule exhausted: greedy polish, then re-anneal if budget remains
        descend(p, &mut x, &mut cache, &mut energy, &mut recorder, &clock);
        if !clock.should_continue() {
            break;
        }
    }

    Ok(recorder.finish(clock.now()))
}

/// Single-flip steepest descent to a 1-flip-optimal point.
pub(crate) fn descend(
    p: &QuboProblem,
    x: &mut BinaryAssignment,
    cache: &mut crate::problem::FlipCache,
    energy: &mut f64,
    recorder: &mut Recorder,
    clock: &RunClock,
) {
    let n = p.n();
    loop {
        let mut best_i = None;
        let mut best_delta = -1e-12;
        for i in 0..n {
            let delta = p.delta_flip(x, i, cache);
            recorder.evaluations += 1;
            if delta < best_delta {
                best_delta = delta;
                best_i = Some(i);
            }
        }
        match best_i {
            Some(i) => {
                p.commit_flip(x, i, cache);
                *energy += best_delta;
                recorder.offer(*energy, &Assignment::Binary(x.clone()), clock.now());
            }
            None => break,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::test_util::random_qubo;

    #[test]
    fn zero_matrix_is_immediate() {
        let p = QuboProblem::new(6, std::iter::empty(), vec![0.0; 6], 0.0).unwrap();
        let r = simulated_annealing(&p, Budget::iters(5), 0, &SaParams::default()).unwrap();
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn trace_is_monotone() {
        let p = random_qubo(14, 99);
        let r = simulated_annealing(&p, Budget::iters(400), 1, &SaParams::default()).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].energy < w[0].energy && w[1].time >= w[0].time));
        assert_eq!(r.trace.last().unwrap().energy, r.best_energy);
        let e = p.evaluate(&r.best_assignment.as_binary()).unwrap();
        assert!((e - r.best_energy).abs() < 1e-9);
    }

    #[test]
    fn finds_optimum_reliably_on_small_instances() {
        let mut hits = 0;
        for seed in 0..100u64 {
            let p = random_qubo(12, seed);
            let (opt, _) = brute_force(&p).unwrap();
            let r = simulated_annealing(
                &p,
                Budget::wall_ms_and_iters(200, 600),
                seed,
                &SaParams::default(),
            )
            .unwrap();
            if (r.best_energy - opt).abs() < 1e-9 {
                hits += 1;
            }
        }
        assert!(hits >= 90, "SA hit {hits}/100");
    }

    #[test]
    fn deterministic_under_iteration_cap() {
        let p = random_qubo(16, 4);
        let a = simulated_annealing(&p, Budget::iters(200), 7, &SaParams::default()).unwrap();
        let b = simulated_annealing(&p, Budget::iters(200), 7, &SaParams::default()).unwrap();
        assert_eq!(a.best_energy.to_bits(), b.best_energy.to_bits());
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_assignment, b.best_assignment);
    }
}
