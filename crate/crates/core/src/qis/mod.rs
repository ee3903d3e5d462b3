//! The hybrid adaptive solver: ensemble seeding, a nine-mode catalogue
//! combining three global strategies (thermal sweeps, tunneling cluster
//! moves, bifurcation flow) with three refinement strategies (steepest
//! descent, projected-gradient relaxation, exact micro-solves), automatic
//! mode selection from probe slices, and on-line hyperparameter tuning.

pub mod landscape;
pub mod seeding;
pub mod subproblem;
pub mod tuner;

pub use landscape::LandscapeStats;
pub use seeding::{seed_ensemble, SeederWeights};
pub use subproblem::{decompose_subproblem, Subproblem};
pub use tuner::{tune_hyperparams, ModeHyper};


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::branch_and_bound;
use crate::heuristics::params::QisParams;
use crate::problem::{round_relaxed, Assignment, BinaryAssignment, FlipCache, QuboProblem};
use crate::result::{Budget, Recorder, RunClock, SolverResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlobalStrategy {
    Thermal,
    Tunneling,
    BifurcationFlow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefineStrategy {
    SteepestDescent,
    GradientRelaxation,
    BnbMicroSolve,
}

/// One of the nine (global, refine) combinations, identified as "Gg-Rr".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeId {
    pub global: GlobalStrategy,
    pub refine: RefineStrategy,
}

impl ModeId {
    pub fn catalogue() -> [ModeId; 9] {
        let globals =
            [GlobalStrategy::Thermal, GlobalStrategy::Tunneling, GlobalStrategy::BifurcationFlow];
        let refines = [
            RefineStrategy::SteepestDescent,
            RefineStrategy::GradientRelaxation,
            RefineStrategy::BnbMicroSolve,
        ];
        let mut out = [ModeId { global: globals[0], refine: refines[0] }; 9];
        for (gi, &g) in globals.iter().enumerate() {
            for (ri, &r) in refines.iter().enumerate() {
                out[gi * 3 + ri] = ModeId { global: g, refine: r };
            }
        }
        out
    }

    /// Catalogue without bifurcation-flow modes (the legacy ablation).
    pub fn legacy_catalogue() -> Vec<ModeId> {
        Self::catalogue()
            .into_iter()
            .filter(|m| m.global != GlobalStrategy::BifurcationFlow)
            .collect()
    }

    pub fn index(&self) -> usize {
        Self::catalogue().iter().position(|m| m == self).expect("mode is in the catalogue")
    }

    pub fn parse(s: &str) -> Result<ModeId> {
        let global = match s.get(0..2) {
            Some("G1") => GlobalStrategy::Thermal,
            Some("G2") => GlobalStrategy::Tunneling,
            Some("G3") => GlobalStrategy::BifurcationFlow,
            _ => return Err(Error::Config(format!("unknown mode id '{s}'"))),
        };
        let refine = match s.get(2..) {
            Some("-R1") => RefineStrategy::SteepestDescent,
            Some("-R2") => RefineStrategy::GradientRelaxation,
            Some("-R3") => RefineStrategy::BnbMicroSolve,
            _ => return Err(Error::Config(format!("unknown mode id '{s}'"))),
        };
        Ok(ModeId { global, refine })
    }
}

impl std::fmt::Display for ModeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = match self.global {
            GlobalStrategy::Thermal => 1,
            GlobalStrategy::Tunneling => 2,
            GlobalStrategy::BifurcationFlow => 3,
        };
        let r = match self.refine {
            RefineStrategy::SteepestDescent => 1,
            RefineStrategy::GradientRelaxation => 2,
            RefineStrategy::BnbMicroSolve => 3,
        };
        write!(f, "G{g}-R{r}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeConfig {
    pub id: ModeId,
    pub hyper: ModeHyper,
}

impl ModeConfig {
    pub fn new(id: ModeId) -> Self {
        Self { id, hyper: ModeHyper::default_cell() }
    }
}

/// Lift to the unit box, run projected gradient descent, round at 0.5,
/// then descend to a 1-flip-optimal point; never worse than the input.
pub fn refine_gradient(
    p: &QuboProblem,
    x0: &BinaryAssignment,
    steps: u64,
    lr: f64,
) -> Result<BinaryAssignment> {
    let start_energy = p.evaluate(x0)?;
    // lift toward the box interior so corner saddles have nonzero gradient
    let mut x: Vec<f64> = x0.0.iter().map(|&b| 0.5 + (b as f64 - 0.5) * 0.6).collect();
    let scale = lr / (1.0 + p.max_abs_coeff());
    for _ in 0..steps {
        let (_, grad) = p.relaxed_energy_and_gradient(&x)?;
        for (v, g) in x.iter_mut().zip(grad) {
            *v = (*v - scale * g).clamp(0.0, 1.0);
        }
    }
    let mut candidate = round_relaxed(&x, 0.5);
    let mut cache = p.local_fields(&candidate);
    let mut energy = p.evaluate(&candidate)?;
    descend_inplace(p, &mut candidate, &mut cache, &mut energy);
    if energy <= start_energy {
        Ok(candidate)
    } else {
        let mut fallback = x0.clone();
        let mut cache = p.local_fields(&fallback);
        let mut energy = start_energy;
        descend_inplace(p, &mut fallback, &mut cache, &mut energy);
        Ok(fallback)
    }
}

fn descend_inplace(
    p: &QuboProblem,
    x: &mut BinaryAssignment,
    cache: &mut FlipCache,
    energy: &mut f64,
) {
    let n = p.n();
    loop {
        let mut best_i = None;
        let mut best_delta = -1e-12;
        for i in 0..n {
            let delta = p.delta_flip(x, i, cache);
            if delta < best_delta {
                best_delta = delta;
                best_i = Some(i);
            }
        }
        match best_i {
            Some(i) => {
                p.commit_flip(x, i, cache);
                *energy += best_delta;
            }
            None => return,
        }
    }
}

#[cfg(test)]
fn is_one_flip_optimal(p: &QuboProblem, x: &BinaryAssignment) -> bool {
    let cache = p.local_fields(x);
    (0..p.n()).all(|i| p.delta_flip(x, i, &cache) >= -1e-12)
}

/// Flip a connected cluster in the variable-interaction graph: pivot
/// weighted by |flip gain|, size drawn geometric with mean scaled up by
/// stagnation. Returns the candidate and the realized cluster size;
/// acceptance is the caller's policy.
pub fn tunnel_move(
    p: &QuboProblem,
    x: &BinaryAssignment,
    stats: &LandscapeStats,
    cluster_mean: f64,
    rng: &mut impl Rng,
) -> (BinaryAssignment, usize) {
    let n = p.n();
    let mean = (cluster_mean * (1.0 + stats.stagnation as f64 / 20.0)).min(n as f64).max(1.0);
    let size = if mean <= 1.0 {
        1
    } else {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let k = 1 + (u.ln() / (1.0 - 1.0 / mean).ln()).floor() as usize;
        k.min(n)
    };
    tunnel_move_with_size(p, x, size, rng)
}

/// Cluster flip with a forced target size (degenerate cases in tests).
pub fn tunnel_move_with_size(
    p: &QuboProblem,
    x: &BinaryAssignment,
    size: usize,
    rng: &mut impl Rng,
) -> (BinaryAssignment, usize) {
    let n = p.n();
    let size = size.clamp(1, n);
    let cache = p.local_fields(x);

    // pivot weighted by |flip gain| (plus a floor so flat points still move)
    let gains: Vec<f64> = (0..n).map(|i| p.delta_flip(x, i, &cache).abs() + 1e-9).collect();
    let total: f64 = gains.iter().sum();
    let mut pick = rng.gen::<f64>() * total;
    let mut pivot = n - 1;
    for (i, &g) in gains.iter().enumerate() {
        pick -= g;
        if pick <= 0.0 {
            pivot = i;
            break;
        }
    }

    // grow a connected set by random frontier expansion
    let mut in_cluster = vec![false; n];
    let mut cluster = vec![pivot];
    in_cluster[pivot] = true;
    let mut frontier: Vec<usize> = p
        .neighbors(pivot)
        .iter()
        .map(|&(j, _)| j as usize)
        .filter(|&j| !in_cluster[j])
        .collect();
    while cluster.len() < size && !frontier.is_empty() {
        let k = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(k);
        if in_cluster[v] {
            continue;
        }
        in_cluster[v] = true;
        cluster.push(v);
        for &(j, _) in p.neighbors(v) {
            let j = j as usize;
            if !in_cluster[j] {
                frontier.push(j);
            }
        }
    }

    let mut candidate = x.clone();
    for &i in &cluster {
        candidate.flip(i);
    }
    (candidate, cluster.len())
}

struct ModeRun<'a> {
    p: &'a QuboProblem,
    ising: crate::problem::IsingProblem,
    params: &'a QisParams,
    rng: ChaCha8Rng,
    x: BinaryAssignment,
    cache: FlipCache,
    energy: f64,
    temperature: f64,
    base_temperature: f64,
    stagnation: u64,
    /// max uphill delta accepted per global step, windowed to the last 10
    uphill_window: std::collections::VecDeque<f64>,
    step_uphill: f64,
}

impl<'a> ModeRun<'a> {
    /// Barrier-depth proxy: largest accepted uphill move in the window.
    fn barrier(&self) -> f64 {
        self.uphill_window.iter().copied().fold(self.step_uphill, f64::max)
    }

    fn thermal_sweep(&mut self, recorder: &mut Recorder, clock: &RunClock) {
        let n = self.p.n();
        for i in 0..n {
            let delta = self.p.delta_flip(&self.x, i, &self.cache);
            recorder.evaluations += 1;
            let accept =
                delta <= 0.0 || self.rng.gen::<f64>() < (-delta / self.temperature).exp();
            if accept {
                if delta > 0.0 {
                    self.step_uphill = self.step_uphill.max(delta);
                }
                self.p.commit_flip(&mut self.x, i, &mut self.cache);
                self.energy += delta;
                if recorder.best_energy().map_or(true, |b| self.energy < b) {
                    recorder.offer(self.energy, &Assignment::Binary(self.x.clone()), clock.now());
                }
            }
        }
    }

    fn tunnel_step(&mut self, hyper: &ModeHyper, recorder: &mut Recorder, clock: &RunClock) {
        let stats = LandscapeStats::measure(
            self.p,
            &self.x,
            &self.cache,
            self.barrier(),
            self.stagnation,
        );
        let (candidate, _) =
            tunnel_move(self.p, &self.x, &stats, hyper.cluster_mean, &mut self.rng);
        let cand_energy = self.p.evaluate(&candidate).expect("candidate has problem length");
        recorder.evaluations += 1;
        let delta = cand_energy - self.energy;
        let accept = delta <= 0.0 || self.rng.gen::<f64>() < (-delta / self.temperature).exp();
        if accept {
            if delta > 0.0 {
                self.step_uphill = self.step_uphill.max(delta);
            }
            self.x = candidate;
            self.cache = self.p.local_fields(&self.x);
            self.energy = cand_energy;
            if recorder.best_energy().map_or(true, |b| self.energy < b) {
                recorder.offer(self.energy, &Assignment::Binary(self.x.clone()), clock.now());
            }
        }
    }

    /// Short ballistic-bifurcation burst seeded from the current point;
    /// the best readout is offered as a Metropolis proposal.
    fn bifurcation_burst(&mut self, recorder: &mut Recorder, clock: &RunClock) {
        let n = self.p.n();
        let sigma = self.ising.coupling_rms();
        let coupling = if sigma > 0.0 { 0.5 / ((n as f64).sqrt() * sigma) } else { 0.0 };
        let steps = 40u64;
        let dt = 0.5;
        let mut pos: Vec<f64> = self
            .x
            .0
            .iter()
            .map(|&b| {
                let s = if b == 1 { 0.3 } else { -0.3 };
                s + self.rng.gen_range(-0.05..0.05)
            })
            .collect();
        let mut vel = vec![0.0; n];
        let mut best: Option<(f64, BinaryAssignment)> = None;
        for step in 0..steps {
            let pump = step as f64 / steps as f64;
            let mut force = vec![0.0; n];
            for &(i, j, w) in self.ising.pairs() {
                force[i as usize] += w * pos[j as usize];
                force[j as usize] += w * pos[i as usize];
            }
            for (f, &h) in force.iter_mut().zip(self.ising.fields()) {
                *f += h;
            }
            for i in 0..n {
                vel[i] += dt * (-(1.0 - pump) * pos[i] - coupling * force[i]);
                pos[i] += dt * vel[i];
                if pos[i].abs() >= 1.0 {
                    pos[i] = pos[i].signum();
                    vel[i] = 0.0;
                }
            }
            let bits =
                BinaryAssignment(pos.iter().map(|&v| u8::from(v > 0.0)).collect());
            let e = self.p.evaluate(&bits).expect("readout has problem length");
            recorder.evaluations += 1;
            if best.as_ref().map_or(true, |(be, _)| e < *be) {
                best = Some((e, bits));
            }
        }
        if let Some((cand_energy, candidate)) = best {
            let delta = cand_energy - self.energy;
            let accept = delta <= 0.0 || self.rng.gen::<f64>() < (-delta / self.temperature).exp();
            if accept {
                if delta > 0.0 {
                    self.step_uphill = self.step_uphill.max(delta);
                }
                self.x = candidate;
                self.cache = self.p.local_fields(&self.x);
                self.energy = cand_energy;
                if recorder.best_energy().map_or(true, |b| self.energy < b) {
                    recorder.offer(self.energy, &Assignment::Binary(self.x.clone()), clock.now());
                }
            }
        }
    }

    fn refine(
        &mut self,
        strategy: RefineStrategy,
        hyper: &ModeHyper,
        recorder: &mut Recorder,
        clock: &RunClock,
    ) -> Result<()> {
        match strategy {
            RefineStrategy::SteepestDescent => {
                descend_inplace(self.p, &mut self.x, &mut self.cache, &mut self.energy);
            }
            RefineStrategy::GradientRelaxation => {
                let refined = refine_gradient(
                    self.p,
                    &self.x,
                    self.params.gradient_steps,
                    hyper.learning_rate,
                )?;
                let e = self.p.evaluate(&refined)?;
                recorder.evaluations += 1;
                if e <= self.energy {
                    self.x = refined;
                    self.cache = self.p.local_fields(&self.x);
                    self.energy = e;
                }
            }
            RefineStrategy::BnbMicroSolve => {
                let k = self.params.bnb_k.min(self.p.n()).min(subproblem::MAX_SUBPROBLEM);
                let sub = decompose_subproblem(self.p, &self.x, k)?;
                let warm = sub.restrict(&self.x);
                let out = branch_and_bound(&sub.qubo, Budget::iters(200_000), Some(&warm))?;
                recorder.evaluations += out.nodes_visited;
                if out.result.best_energy < self.energy - 1e-12 {
                    sub.embed(&out.result.best_assignment.as_binary(), &mut self.x);
                    self.cache = self.p.local_fields(&self.x);
                    self.energy = out.result.best_energy;
                }
            }
        }
        if recorder.best_energy().map_or(true, |b| self.energy < b) {
            recorder.offer(self.energy, &Assignment::Binary(self.x.clone()), clock.now());
        }
        Ok(())
    }
}

/// Run a single mode until the budget ends. One iteration = one global
/// step plus one refinement.
pub fn run_mode(
    p: &QuboProblem,
    mode: &ModeConfig,
    budget: Budget,
    seed: u64,
    incumbent: Option<&BinaryAssignment>,
    params: &QisParams,
) -> Result<SolverResult> {
    let mut clock = RunClock::start(budget);
    let mut recorder = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let x = match incumbent {
        Some(inc) => inc.clone(),
        None => BinaryAssignment((0..p.n()).map(|_| rng.gen_range(0..2u8)).collect()),
    };
    let cache = p.local_fields(&x);
    let energy = p.evaluate(&x)?;
    recorder.evaluations += 1;
    recorder.offer(energy, &Assignment::Binary(x.clone()), clock.now());

    let base_temperature = (mode.hyper.temp_scale * p.max_abs_coeff()).max(1e-3);
    let mut run = ModeRun {
        p,
        ising: p.to_ising(),
        params,
        rng,
        x,
        cache,
        energy,
        temperature: base_temperature,
        base_temperature,
        stagnation: 0,
        uphill_window: std::collections::VecDeque::new(),
        step_uphill: 0.0,
    };

    while clock.should_continue() {
        let best_before = recorder.best_energy().unwrap_or(f64::INFINITY);
        run.step_uphill = 0.0;
        match mode.id.global {
            GlobalStrategy::Thermal => run.thermal_sweep(&mut recorder, &clock),
            GlobalStrategy::Tunneling => run.tunnel_step(&mode.hyper, &mut recorder, &clock),
            GlobalStrategy::BifurcationFlow => run.bifurcation_burst(&mut recorder, &clock),
        }
        run.refine(mode.id.refine, &mode.hyper, &mut recorder, &clock)?;
        run.uphill_window.push_back(run.step_uphill);
        if run.uphill_window.len() > 10 {
            run.uphill_window.pop_front();
        }
        clock.bump(1);

        // stagnation raises diversification, improvement cools back down
        if recorder.best_energy().unwrap_or(f64::INFINITY) < best_before - 1e-12 {
            run.stagnation = 0;
            run.temperature = (run.temperature * 0.9).max(run.base_temperature * 0.1);
        } else {
            run.stagnation += 1;
            run.temperature = (run.temperature * 1.1).min(run.base_temperature * 10.0);
        }
    }

    // final refinement: the returned point must be 1-flip-optimal
    if let Some(best) = recorder.best_assignment() {
        let mut polished = best.as_binary();
        let mut cache = p.local_fields(&polished);
        let mut energy = p.evaluate(&polished)?;
        descend_inplace(p, &mut polished, &mut cache, &mut energy);
        recorder.offer(energy, &Assignment::Binary(polished), clock.now());
    }

    Ok(recorder.finish(clock.now()))
}

#[derive(Debug, Clone)]
pub struct QisOutcome {
    pub result: SolverResult,
    pub selected_mode: ModeId,
    /// best energy known at the end of the probe phase (for manual runs,
    /// the best seed); the final result never loses to this
    pub probe_best: f64,
}

/// Automatic mode selection: a probe phase splits `probe_fraction` of the
/// budget round-robin across the catalogue with a shared incumbent, then
/// the winning mode (lowest probe energy, ties to the lowest mode index)
/// runs for the remainder with on-line hyperparameter tuning.
pub fn qis_solve(
    p: &QuboProblem,
    budget: Budget,
    seed: u64,
    manual_mode: Option<ModeId>,
    params: &QisParams,
) -> Result<QisOutcome> {
    if !(0.0 < params.probe_fraction && params.probe_fraction < 1.0) {
        return Err(Error::Config("probe_fraction must lie in (0,1)".into()));
    }
    let clock = RunClock::start(budget);
    let mut recorder = Recorder::new();

    // ensemble seeding supplies the initial incumbent
    let (seeds, _weights) =
        seed_ensemble(p, params.seed_count, &SeederWeights::uniform(), params.seeding_eta, seed)?;
    recorder.evaluations += seeds.len() as u64;
    let mut incumbent: Option<BinaryAssignment> = None;
    for (x, e) in &seeds {
        if recorder.offer(*e, &Assignment::Binary(x.clone()), clock.now()) {
            incumbent = Some(x.clone());
        }
    }

    if let Some(mode) = manual_mode {
        let config = ModeConfig::new(mode);
        let probe_best = recorder.best_energy().expect("seeding offered a candidate");
        let r = run_mode(p, &config, budget, seed, incumbent.as_ref(), params)?;
        recorder.evaluations += r.evaluations;
        recorder.offer(r.best_energy, &r.best_assignment, clock.now());
        return Ok(QisOutcome {
            result: recorder.finish(clock.now()),
            selected_mode: mode,
            probe_best,
        });
    }

    let catalogue: Vec<ModeId> =
        if params.legacy { ModeId::legacy_catalogue() } else { ModeId::catalogue().to_vec() };

    // phase 1: equal probe slices, shared incumbent
    let probe_total = budget.fraction(params.probe_fraction);
    let slice = probe_total.fraction(1.0 / catalogue.len() as f64);
    let mut winner = catalogue[0];
    let mut winner_energy = f64::INFINITY;
    for (k, &mode) in catalogue.iter().enumerate() {
        let config = ModeConfig::new(mode);
        let r = run_mode(p, &config, slice, seed.wrapping_add(k as u64 + 1), incumbent.as_ref(), params)?;
        recorder.evaluations += r.evaluations;
        if recorder.offer(r.best_energy, &r.best_assignment, clock.now()) {
            incumbent = Some(r.best_assignment.as_binary());
        }
        if r.best_energy < winner_energy {
            winner_energy = r.best_energy;
            winner = mode;
        }
    }

    let probe_best = recorder.best_energy().expect("seeding offered a candidate");

    // phase 2: the winner runs the remainder, tuned episodically
    let remainder = budget.fraction(1.0 - params.probe_fraction);
    if params.legacy {
        let config = ModeConfig::new(winner);
        let r = run_mode(p, &config, remainder, seed.wrapping_add(101), incumbent.as_ref(), params)?;
        recorder.evaluations += r.evaluations;
        recorder.offer(r.best_energy, &r.best_assignment, clock.now());
    } else {
        let episodes = 4u64;
        let episode_budget = remainder.fraction(1.0 / episodes as f64);
        let mut history: Vec<(ModeHyper, f64)> = Vec::new();
        for ep in 0..episodes {
            let hyper = tune_hyperparams(&history);
            let config = ModeConfig { id: winner, hyper };
            let r = run_mode(
                p,
                &config,
                episode_budget,
                seed.wrapping_add(201 + ep),
                incumbent.as_ref(),
                params,
            )?;
            recorder.evaluations += r.evaluations;
            history.push((hyper, r.best_energy));
            if recorder.offer(r.best_energy, &r.best_assignment, clock.now()) {
                incumbent = Some(r.best_assignment.as_binary());
            }
        }
    }

    Ok(QisOutcome {
        result: recorder.finish(clock.now()),
        selected_mode: winner,
        probe_best,
    })
}
