//! Ballistic simulated bifurcation on the spin model.
//!
//! Positions x_i in [-1,1] and momenta y_i evolve under
//!     x_i += dt * y_i
//!     y_i += dt * [ -(1 - a(t)) * x_i - c * (sum_j J~_ij x_j + h_i) ]
//! with inelastic walls (|x_i| >= 1 clamps x_i to its sign and zeroes
//! y_i). J~ is the symmetrized coupling (J~_ij = J_ij for both orders),
//! a(t) ramps linearly over one restart, and spins read out as sign(x).
//! Restarts repeat from fresh random positions until the budget ends.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::params::SbParams;
use crate::problem::{Assignment, IsingProblem, SpinAssignment};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

pub fn simulated_bifurcation(
    p: &IsingProblem,
    budget: Budget,
    seed: u64,
    params: &SbParams,
) -> Result<SolverResult> {
    let n = p.n();
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let sigma = p.coupling_rms();
    let coupling = if sigma > 0.0 {
        params.coupling_scale / ((n as f64).sqrt() * sigma)
    } else {
        0.0
    };
    let steps = params.steps_per_restart.max(1);

    'outer: loop {
        let mut x: Vec<f64> =
            (0..n).map(|_| rng.gen_range(-params.init_spread..=params.init_spread)).collect();
        let mut y = vec![0.0; n];
        let mut force = vec![0.0; n];

        for step in 0..steps {
            if !clock.should_continue() {
                break 'outer;
            }
            let pump =
                params.a_start + (params.a_end - params.a_start) * step as f64 / steps as f64;
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
                y[i] += params.dt * (-(1.0 - pump) * x[i] - coupling * force[i]);
                x[i] += params.dt * y[i];
                if x[i].abs() >= 1.0 {
                    x[i] = x[i].signum();
                    y[i] = 0.0;
                }
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

fn readout(x: &[f64]) -> SpinAssignment {
    SpinAssignment(x.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
}
