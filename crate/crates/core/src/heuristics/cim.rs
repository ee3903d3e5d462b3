//! Coherent-Ising-machine style mean-field amplitude dynamics:
//!     dx_i = [(-1 + p(t) - x_i^2) x_i - eps (sum_j J_ij x_j + h_i)] dt
//!            + noise * sqrt(dt) * N(0,1)
//! with the pump p(t) ramping linearly over a restart and spins read out
//! as sign(x). Restarts repeat until the budget is spent.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::params::CimParams;
use crate::problem::{Assignment, IsingProblem, SpinAssignment};
use crate::result::{Budget, Recorder, RunClock, SolverResult};
use crate::rng::normal_quantile;

const AMPLITUDE_CLAMP: f64 = 1.5;

pub fn cim_heuristic(
    p: &IsingProblem,
    budget: Budget,
    seed: u64,
    params: &CimParams,
) -> Result<SolverResult> {
    let n = p.n();
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let eps = params.coupling_scale / (n as f64).sqrt();
    let steps = params.steps_per_restart.max(1);
    let noise_scale = params.noise * params.dt.sqrt();

    'outer: loop {
        let mut x: Vec<f64> = (0..n)
            .map(|_| {
                if params.init_spread == 0.0 {
                    0.0
                } else {
                    rng.gen_range(-params.init_spread..=params.init_spread)
                }
            })
            .collect();
        let mut force = vec![0.0; n];

        for step in 0..steps {
            if !clock.should_continue() {
                break 'outer;
            }
            let pump = params.pump_start
                + (params.pump_max - params.pump_start) * step as f64 / steps as f64;
            for f in force.iter_mut() {
                *f = 0.0;
            }
            for &(i, j, w) in p.pairs() {
                force[i as usize] += w * x[j as usize];
                force[j as usize] += w * x[i as usize];
            }
            for (f, &h) in force.iter_mut().zip(p.fields()) {
                *f += h;
            }
            for i in 0..n {
                let drift = (-1.0 + pump - x[i] * x[i]) * x[i] - eps * force[i];
                let mut v = x[i] + params.dt * drift;
                if noise_scale > 0.0 {
                    v += noise_scale * standard_normal(&mut rng);
                }
                x[i] = v.clamp(-AMPLITUDE_CLAMP, AMPLITUDE_CLAMP);
            }
            let spins = readout(&x);
            let energy = p.evaluate(&spins)?;
            recorder.evaluations += 1;
            recorder.offer(energy, &Assignment::Spin(spins), clock.now());
            clock.bump(1);
        }
        if !clock.should_continue() {
            break;
        }
    }

    Ok(recorder.finish(clock.now()))
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen_range(1e-15..1.0);
    normal_quantile(u)
}

fn readout(x: &[f64]) -> SpinAssignment {
    SpinAssignment(x.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
}
