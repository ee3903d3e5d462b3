//! Genetic algorithm: tournament selection, uniform crossover, per-bit
//! mutation, and elitism over binary assignments.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::params::GaParams;
use crate::problem::{Assignment, BinaryAssignment, QuboProblem};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

pub fn genetic_algorithm(
    p: &QuboProblem,
    budget: Budget,
    seed: u64,
    params: &GaParams,
) -> Result<SolverResult> {
    let n = p.n();
    let pop_size = params.population.max(2);
    let mutation = params.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut population: Vec<(f64, BinaryAssignment)> = (0..pop_size)
        .map(|_| {
            let x = BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect());
            let e = p.evaluate(&x).unwrap();
            (e, x)
        })
        .collect();
    recorder.evaluations += pop_size as u64;
    population.sort_by(|a, b| a.0.total_cmp(&b.0));
    recorder.offer(population[0].0, &Assignment::Binary(population[0].1.clone()), clock.now());

    while clock.should_continue() {
        let mut next: Vec<(f64, BinaryAssignment)> =
            population.iter().take(params.elite).cloned().collect();
        while next.len() < pop_size {
            let p1 = tournament(&population, params.tournament, &mut rng);
            let p2 = tournament(&population, params.tournament, &mut rng);
            let mut child = if rng.gen::<f64>() < params.crossover_rate {
                // uniform crossover
                BinaryAssignment(
                    p1.0.iter()
                        .zip(&p2.0)
                        .map(|(&a, &b)| if rng.gen_bool(0.5) { a } else { b })
                        .collect(),
                )
            } else {
                p1.clone()
            };
            for i in 0..n {
                if rng.gen::<f64>() < mutation {
                    child.flip(i);
                }
            }
            let e = p.evaluate(&child)?;
            recorder.evaluations += 1;
            next.push((e, child));
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        population = next;
        if recorder.best_energy().map_or(true, |b| population[0].0 < b) {
            recorder.offer(population[0].0, &Assignment::Binary(population[0].1.clone()), clock.now());
        }
        clock.bump(1);
    }

    Ok(recorder.finish(clock.now()))
}

fn tournament<'a>(
    population: &'a [(f64, BinaryAssignment)],
    size: usize,
    rng: &mut impl Rng,
) -> &'a BinaryAssignment {
    let mut best = rng.gen_range(0..population.len());
    for _ in 1..size.max(1) {
        let c = rng.gen_range(0..population.len());
        if population[c].0 < population[best].0 {
            best = c;
        }
    }
    &population[best].1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::test_util::random_qubo;

    #[test]
    fn finds_optimum_with_generous_budget() {
        let mut hits = 0;
        for seed in 0..100u64 {
            let p = random_qubo(10, 2000 + seed);
            let (opt, _) = brute_force(&p).unwrap();
            let r = genetic_algorithm(
                &p,
                Budget::wall_ms_and_iters(250, 120),
                seed,
                &GaParams::default(),
            )
            .unwrap();
            if (r.best_energy - opt).abs() < 1e-9 {
                hits += 1;
            }
        }
        assert!(hits >= 80, "GA hit {hits}/100");
    }

    #[test]
    fn all_elite_population_is_a_fixed_point() {
        let p = random_qubo(10, 3);
        let params = GaParams {
            population: 16,
            tournament: 2,
            crossover_rate: 0.0,
            mutation_rate: Some(0.0),
            elite: 16,
        };
        let r = genetic_algorithm(&p, Budget::iters(20), 1, &params).unwrap();
        // with the whole population carried over, the best never worsens
        // and the trace has exactly the initial incumbent
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn crossover_of_clones_is_the_clone() {
        // zero mutation on a flat problem keeps energies identical
        let p = QuboProblem::new(8, std::iter::empty(), vec![0.0; 8], 0.0).unwrap();
        let params = GaParams { mutation_rate: Some(0.0), ..GaParams::default() };
        let r = genetic_algorithm(&p, Budget::iters(10), 2, &params).unwrap();
        assert_eq!(r.best_energy, 0.0);
    }
}
