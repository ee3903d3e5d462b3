//! Default hyperparameters for every solver, kept in one ledger so runs
//! are reproducible. The shipped `data/params.toml` is the canonical
//! source; it is embedded as the compiled default and can be overridden
//! by a user-supplied file or per-run CLI flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SaParams {
    /// Starting temperature; if absent, 2 * max |coefficient| of the problem.
    pub t_start: Option<f64>,
    pub t_end: f64,
    /// Geometric decay per sweep; if absent, derived so the schedule spans
    /// `sweeps_per_anneal` sweeps from t_start to t_end.
    pub decay: Option<f64>,
    pub sweeps_per_anneal: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { t_start: None, t_end: 1e-3, decay: None, sweeps_per_anneal: 300 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct PtParams {
    pub replicas: usize,
    /// Hot end of the geometric ladder; if absent, 2 * max |coefficient|.
    pub t_hot: Option<f64>,
    pub t_cold: f64,
    pub swap_interval: u64,
}

impl Default for PtParams {
    fn default() -> Self {
        Self { replicas: 8, t_hot: None, t_cold: 1e-2, swap_interval: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct GaParams {
    pub population: usize,
    pub tournament: usize,
    pub crossover_rate: f64,
    /// Per-bit mutation probability; if absent, 1/n.
    pub mutation_rate: Option<f64>,
    pub elite: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self { population: 64, tournament: 4, crossover_rate: 0.9, mutation_rate: None, elite: 2 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SbParams {
    pub dt: f64,
    /// Coupling strength c = coupling_scale / (sqrt(n) * rms(J)).
    pub coupling_scale: f64,
    /// Pump a(t) ramps linearly a_start -> a_end over one restart.
    pub a_start: f64,
    pub a_end: f64,
    pub steps_per_restart: u64,
    pub init_spread: f64,
}

impl Default for SbParams {
    fn default() -> Self {
        Self {
            dt: 0.5,
            coupling_scale: 0.5,
            a_start: 0.0,
            a_end: 1.0,
            steps_per_restart: 400,
            init_spread: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct CimParams {
    pub dt: f64,
    /// Mean-field coupling eps = coupling_scale / sqrt(n).
    pub coupling_scale: f64,
    /// Pump p(t) ramps linearly pump_start -> pump_max over one restart.
    pub pump_start: f64,
    pub pump_max: f64,
    pub noise: f64,
    pub steps_per_restart: u64,
    pub init_spread: f64,
}

impl Default for CimParams {
    fn default() -> Self {
        Self {
            dt: 0.15,
            coupling_scale: 1.0,
            pump_start: 0.0,
            pump_max: 2.0,
            noise: 0.1,
            steps_per_restart: 400,
            init_spread: 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct QisParams {
    pub probe_fraction: f64,
    /// Subproblem size for the branch-and-bound micro-solve (capped at 25).
    pub bnb_k: usize,
    /// Multiplicative-weights learning rate for the seeding ensemble.
    pub seeding_eta: f64,
    pub seed_count: usize,
    pub gradient_steps: u64,
    pub learning_rate: f64,
    /// Disable on-line tuning and the bifurcation-flow modes (ablation).
    pub legacy: bool,
}

impl Default for QisParams {
    fn default() -> Self {
        Self {
            probe_fraction: 0.3,
            bnb_k: 20,
            seeding_eta: 0.5,
            seed_count: 8,
            gradient_steps: 50,
            learning_rate: 0.2,
            legacy: false,
        }
    }
}

/// The full parameter ledger, one section per solver.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ParamLedger {
    pub sa: SaParams,
    pub pt: PtParams,
    pub ga: GaParams,
    pub sb: SbParams,
    pub cim: CimParams,
    pub qis: QisParams,
}

pub const DEFAULT_LEDGER_TOML: &str = include_str!("../../data/params.toml");

impl ParamLedger {
    pub fn builtin() -> Self {
        toml::from_str(DEFAULT_LEDGER_TOML).expect("shipped params.toml is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let ledger: ParamLedger =
            toml::from_str(&text).map_err(|e| Error::Config(format!("bad params file: {e}")))?;
        ledger.validate()?;
        Ok(ledger)
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(ts), te) = (self.sa.t_start, self.sa.t_end) {
            if ts <= te {
                return Err(Error::Config("SA requires t_start > t_end".into()));
            }
        }
        if self.sa.t_end <= 0.0 || self.sa.sweeps_per_anneal == 0 {
            return Err(Error::Config("SA temperatures and sweep count must be positive".into()));
        }
        if self.pt.replicas < 2 {
            return Err(Error::Config("PT needs at least 2 replicas".into()));
        }
        if self.pt.t_cold <= 0.0 || self.pt.swap_interval == 0 {
            return Err(Error::Config("PT ladder and swap interval must be positive".into()));
        }
        if self.ga.population < 2 || self.ga.tournament == 0 {
            return Err(Error::Config("GA population must be >= 2 with tournament >= 1".into()));
        }
        if self.ga.elite > self.ga.population {
            return Err(Error::Config("GA elite count cannot exceed the population".into()));
        }
        if self.sb.dt <= 0.0 || self.cim.dt <= 0.0 {
            return Err(Error::Config("integrator time steps must be positive".into()));
        }
        if !(0.0 < self.qis.probe_fraction && self.qis.probe_fraction < 1.0) {
            return Err(Error::Config("probe_fraction must lie in (0,1)".into()));
        }
        if self.qis.bnb_k == 0 || self.qis.bnb_k > 25 {
            return Err(Error::Config("bnb_k must lie in 1..=25".into()));
        }
        Ok(())
    }
}
