//! Ensemble seeding: four strategies drawn proportionally to adaptive
//! weights, with a multiplicative-weights update from each round's
//! energy ranking.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::problem::{round_relaxed, BinaryAssignment, QuboProblem};

pub const STRATEGY_COUNT: usize = 4;
pub const STRATEGY_NAMES: [&str; STRATEGY_COUNT] =
    ["uniform", "greedy", "relaxation", "antithetic"];

/// Normalized weights over the four seeding strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SeederWeights(pub [f64; STRATEGY_COUNT]);

impl SeederWeights {
    pub fn uniform() -> Self {
        Self([1.0 / STRATEGY_COUNT as f64; STRATEGY_COUNT])
    }

    pub fn normalized(mut w: [f64; STRATEGY_COUNT]) -> Self {
        let sum: f64 = w.iter().sum();
        assert!(w.iter().all(|&v| v >= 0.0) && sum > 0.0, "weights must be nonnegative");
        for v in w.iter_mut() {
            *v /= sum;
        }
        Self(w)
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen::<f64>();
        let mut acc = 0.0;
        for (k, &w) in self.0.iter().enumerate() {
            acc += w;
            if u < acc {
                return k;
            }
        }
        STRATEGY_COUNT - 1
    }
}

/// Draw `count` seeds, evaluate them, and return them with the updated
/// strategy weights (w_k <- w_k * exp(-eta * rank_k), renormalized).
pub fn seed_ensemble(
    p: &QuboProblem,
    count: usize,
    weights: &SeederWeights,
    eta: f64,
    seed: u64,
) -> Result<(Vec<(BinaryAssignment, f64)>, SeederWeights)> {
    assert!(count >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeds: Vec<(usize, BinaryAssignment, f64)> = Vec::with_capacity(count);
    let mut best_so_far: Option<(f64, BinaryAssignment)> = None;

    for _ in 0..count {
        let strategy = weights.sample(&mut rng);
        let x = match strategy {
            0 => uniform_seed(p.n(), &mut rng),
            1 => greedy_seed(p, &mut rng),
            2 => relaxation_seed(p, &mut rng),
            _ => {
                // antithetic complement of the best seed so far
                let base = best_so_far
                    .as_ref()
                    .map(|(_, b)| b.clone())
                    .unwrap_or_else(|| uniform_seed(p.n(), &mut rng));
                BinaryAssignment(base.0.iter().map(|&b| b ^ 1).collect())
            }
        };
        let e = p.evaluate(&x)?;
        if best_so_far.as_ref().map_or(true, |(be, _)| e < *be) {
            best_so_far = Some((e, x.clone()));
        }
        seeds.push((strategy, x, e));
    }

    // per-strategy mean energy; unused strategies keep their weight
    let mut sums = [0.0; STRATEGY_COUNT];
    let mut counts = [0usize; STRATEGY_COUNT];
    for (k, _, e) in &seeds {
        sums[*k] += e;
        counts[*k] += 1;
    }
    let mut used: Vec<(usize, f64)> = (0..STRATEGY_COUNT)
        .filter(|&k| counts[k] > 0)
        .map(|k| (k, sums[k] / counts[k] as f64))
        .collect();
    used.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut next = weights.0;
    for (rank, &(k, _)) in used.iter().enumerate() {
        next[k] *= (-eta * rank as f64).exp();
    }
    let updated = SeederWeights::normalized(next);

    Ok((seeds.into_iter().map(|(_, x, e)| (x, e)).collect(), updated))
}

fn uniform_seed(n: usize, rng: &mut impl Rng) -> BinaryAssignment {
    BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect())
}

/// Greedy construction: visit variables in random order, setting each bit
/// whenever its conditional field is negative.
fn greedy_seed(p: &QuboProblem, rng: &mut impl Rng) -> BinaryAssignment {
    let n = p.n();
    let mut x = BinaryAssignment::zeros(n);
    let mut cache = p.local_fields(&x);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in order {
        if cache.fields[i] < 0.0 {
            p.commit_flip(&mut x, i, &mut cache);
        }
    }
    x
}

/// Short projected gradient descent from a jittered center, then rounding.
fn relaxation_seed(p: &QuboProblem, rng: &mut impl Rng) -> BinaryAssignment {
    let n = p.n();
    let mut x: Vec<f64> = (0..n).map(|_| 0.5 + rng.gen_range(-0.05..0.05)).collect();
    let lr = 0.5 / (1.0 + p.max_abs_coeff());
    for _ in 0..30 {
        let (_, grad) = p.relaxed_energy_and_gradient(&x).expect("point stays in the box");
        for (v, g) in x.iter_mut().zip(grad) {
            *v = (*v - lr * g).clamp(0.0, 1.0);
        }
    }
    round_relaxed(&x, 0.5)
}
