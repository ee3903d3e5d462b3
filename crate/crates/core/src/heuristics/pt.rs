//! Parallel tempering: K Metropolis chains on a geometric temperature
//! ladder with periodic adjacent replica swaps.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::params::PtParams;
use crate::problem::{Assignment, BinaryAssignment, FlipCache, QuboProblem};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

struct Replica {
    x: BinaryAssignment,
    cache: FlipCache,
    energy: f64,
}

pub fn parallel_tempering(
    p: &QuboProblem,
    budget: Budget,
    seed: u64,
    params: &PtParams,
) -> Result<SolverResult> {
    let n = p.n();
    let k = params.replicas;
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let t_hot = params.t_hot.unwrap_or_else(|| (2.0 * p.max_abs_coeff()).max(1e-3));
    let t_cold = params.t_cold.min(t_hot);
    let ladder: Vec<f64> = (0..k)
        .map(|r| {
            if k == 1 {
                t_cold
            } else {
                t_cold * (t_hot / t_cold).powf(r as f64 / (k - 1) as f64)
            }
        })
        .collect();

    let mut replicas: Vec<Replica> = (0..k)
        .map(|_| {
            let x = BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect());
            let cache = p.local_fields(&x);
            let energy = p.evaluate(&x).unwrap();
            Replica { x, cache, energy }
        })
        .collect();
    recorder.evaluations += k as u64;
    for r in &replicas {
        recorder.offer(r.energy, &Assignment::Binary(r.x.clone()), clock.now());
    }

    let mut sweep: u64 = 0;
    while clock.should_continue() {
        for (r, &t) in replicas.iter_mut().zip(&ladder) {
            for i in 0..n {
                let delta = p.delta_flip(&r.x, i, &r.cache);
                recorder.evaluations += 1;
                if delta <= 0.0 || rng.gen::<f64>() < (-delta / t).exp() {
                    p.commit_flip(&mut r.x, i, &mut r.cache);
                    r.energy += delta;
                    if recorder.best_energy().map_or(true, |b| r.energy < b) {
                        recorder.offer(r.energy, &Assignment::Binary(r.x.clone()), clock.now());
                    }
                }
            }
        }
        sweep += 1;
        clock.bump(1);
        if sweep % params.swap_interval == 0 {
            for a in 0..k - 1 {
                let b = a + 1;
                let exponent =
                    (1.0 / ladder[a] - 1.0 / ladder[b]) * (replicas[a].energy - replicas[b].energy);
                let accept = exponent >= 0.0 || rng.gen::<f64>() < exponent.exp();
                if accept {
                    replicas.swap(a, b);
                }
            }
        }
    }

    Ok(recorder.finish(clock.now()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::test_util::random_qubo;

    #[test]
    fn finds_optimum_reliably() {
        let mut hits = 0;
        for seed in 0..100u64 {
            let p = random_qubo(12, 1000 + seed);
            let (opt, _) = brute_force(&p).unwrap();
            let r = parallel_tempering(
                &p,
                Budget::wall_ms_and_iters(200, 200),
                seed,
                &PtParams::default(),
            )
            .unwrap();
            if (r.best_energy - opt).abs() < 1e-9 {
                hits += 1;
            }
        }
        assert!(hits >= 90, "PT hit {hits}/100");
    }

    #[test]
    fn equal_temperature_swaps_always_accept() {
        // degenerate two-replica ladder: exponent is exactly 0
        let p = random_qubo(8, 5);
        let params = PtParams { replicas: 2, t_hot: Some(0.5), t_cold: 0.5, swap_interval: 1 };
        let r = parallel_tempering(&p, Budget::iters(50), 3, &params).unwrap();
        let (opt, _) = brute_force(&p).unwrap();
        assert!(r.best_energy >= opt - 1e-9);
    }

    #[test]
    fn best_energy_matches_assignment() {
        let p = random_qubo(10, 8);
        let r = parallel_tempering(&p, Budget::iters(80), 2, &PtParams::default()).unwrap();
        let e = p.evaluate(&r.best_assignment.as_binary()).unwrap();
        assert!((e - r.best_energy).abs() < 1e-9);
        assert!(r.trace.windows(2).all(|w| w[1].energy < w[0].energy));
    }
}
