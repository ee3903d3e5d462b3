//! Benchmark harness: suite configuration, budgeted batch execution over
//! an instance × solver grid, run-record persistence, table emission, and
//! verification against shipped published-result tables.

pub mod report;

pub use report::{
    best_set, compute_ranks, compute_row_ranks, emit_table, parse_reference, parse_report_csv,
    report_from_reference, verify_reference, BenchReport, CellSummary, RankedReport, ReportRow,
    TableFormat, VerifySummary,
};

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::branch_and_bound;
use crate::heuristics::{
    cim_heuristic, genetic_algorithm, parallel_tempering, run_batch, simulated_annealing,
    simulated_bifurcation, ParamLedger,
};
use crate::instances::io::{load_instance, Family, Instance};
use crate::qis::{qis_solve, ModeId};
use crate::result::{Budget, SolverResult, TracePoint};

/// One instance source in a suite: either a file to load or generator
/// parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub path: Option<PathBuf>,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub ratio: Option<f64>,
}

impl InstanceSpec {
    pub fn resolve(&self) -> Result<Instance> {
        match (&self.path, self.family) {
            (Some(p), None) => load_instance(p),
            (None, Some(f)) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Config("generated instance needs `n`".into()))?;
                Instance::generate(f, n, self.seed.unwrap_or(0), self.ratio)
            }
            _ => Err(Error::Config(
                "instance spec needs exactly one of `path` or `family`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSuite {
    pub instances: Vec<InstanceSpec>,
    pub solvers: Vec<String>,
    /// wall budget per run, milliseconds (omit for pure iteration caps)
    pub budget_ms: Option<u64>,
    /// iteration cap per run; with no wall budget the suite is
    /// bit-deterministic and re-runs produce byte-identical reports
    pub iteration_cap: Option<u64>,
    pub batch: usize,
    pub seed_base: u64,
}

impl BenchSuite {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let suite: BenchSuite = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("bad suite file: {e}")))?;
        suite.validate()?;
        Ok(suite)
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch < 1 {
            return Err(Error::Config("batch must be >= 1".into()));
        }
        if self.budget_ms == Some(0) {
            return Err(Error::Config("budget must be > 0".into()));
        }
        if self.budget_ms.is_none() && self.iteration_cap.is_none() {
            return Err(Error::Config("set budget_ms and/or iteration_cap".into()));
        }
        if self.instances.is_empty() || self.solvers.is_empty() {
            return Err(Error::Config("suite needs instances and solvers".into()));
        }
        for s in &self.solvers {
            s.parse::<SolverId>()?; // invalid solver id fails before any run
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget { wall: self.budget_ms.map(std::time::Duration::from_millis), max_iters: self.iteration_cap }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverId {
    Sa,
    Pt,
    Ga,
    Sb,
    Cim,
    Qis,
    Bnb,
}

impl std::str::FromStr for SolverId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" => Ok(SolverId::Sa),
            "pt" => Ok(SolverId::Pt),
            "ga" => Ok(SolverId::Ga),
            "sb" => Ok(SolverId::Sb),
            "cim" => Ok(SolverId::Cim),
            "qis" => Ok(SolverId::Qis),
            "bnb" => Ok(SolverId::Bnb),
            other => Err(Error::Config(format!("unknown solver id '{other}'"))),
        }
    }
}

/// Run one solver on one instance; energies are raw Ising energies (the
/// family objective is applied at report time).
pub fn run_solver(
    id: SolverId,
    inst: &Instance,
    budget: Budget,
    seed: u64,
    ledger: &ParamLedger,
    mode: Option<ModeId>,
) -> Result<SolverResult> {
    let ising = inst.to_ising();
    match id {
        SolverId::Sb => simulated_bifurcation(&ising, budget, seed, &ledger.sb),
        SolverId::Cim => cim_heuristic(&ising, budget, seed, &ledger.cim),
        _ => {
            let qubo = ising.to_qubo();
            match id {
                SolverId::Sa => simulated_annealing(&qubo, budget, seed, &ledger.sa),
                SolverId::Pt => parallel_tempering(&qubo, budget, seed, &ledger.pt),
                SolverId::Ga => genetic_algorithm(&qubo, budget, seed, &ledger.ga),
                SolverId::Qis => {
                    qis_solve(&qubo, budget, seed, mode, &ledger.qis).map(|o| o.result)
                }
                SolverId::Bnb => branch_and_bound(&qubo, budget, None).map(|o| o.result),
                SolverId::Sb | SolverId::Cim => unreachable!("handled above"),
            }
        }
    }
}

/// One persisted run record (JSON), plus a runs.csv line.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub solver: String,
    pub seed: u64,
    pub best_energy: f64,
    pub time_to_best_s: f64,
    pub wall_s: f64,
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub report: BenchReport,
    pub records: Vec<RunRecord>,
    /// per-instance resolution failures (the suite continues past them)
    pub errors: Vec<String>,
}

/// Execute the full instance × solver grid. Cells run concurrently up to
/// `workers` threads; each cell is a batch of `batch` seeded runs
/// (seed_base + replica index) reduced to its elementwise best.
pub fn run_suite(suite: &BenchSuite, ledger: &ParamLedger, workers: usize) -> Result<SuiteOutcome> {
    suite.validate()?;
    let workers = workers.max(1);
    let budget = suite.budget();

    let mut errors = Vec::new();
    let mut instances: Vec<Option<Instance>> = Vec::new();
    for spec in &suite.instances {
        match spec.resolve() {
            Ok(inst) => instances.push(Some(inst)),
            Err(e) => {
                errors.push(format!("instance {spec:?}: {e}"));
                instances.push(None);
            }
        }
    }
    let solver_ids: Vec<SolverId> =
        suite.solvers.iter().map(|s| s.parse()).collect::<Result<_>>()?;

    // flatten present cells; results keyed by (instance idx, solver idx)
    let cells: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..solver_ids.len()).map(move |k| (i, k)))
        .filter(|(i, _)| instances[*i].is_some())
        .collect();

    type CellOut = (usize, usize, CellSummary, Vec<RunRecord>);
    let done: Mutex<Vec<CellOut>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers.min(cells.len().max(1)) {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                if c >= cells.len() {
                    return;
                }
                let (i, k) = cells[c];
                let inst = instances[i].as_ref().expect("filtered to present instances");
                let out = run_batch(suite.batch, suite.seed_base, |seed| {
                    run_solver(solver_ids[k], inst, budget, seed, ledger, None)
                });
                match out {
                    Ok((best, members)) => {
                        let records: Vec<RunRecord> = members
                            .iter()
                            .enumerate()
                            .map(|(r, m)| RunRecord {
                                instance: inst.name().to_string(),
                                solver: suite.solvers[k].clone(),
                                seed: suite.seed_base + r as u64,
                                best_energy: inst.objective(m.best_energy),
                                time_to_best_s: m.time_to_best,
                                wall_s: m.wall_time,
                                evaluations: m.evaluations,
                                trace: m.trace.clone(),
                            })
                            .collect();
                        let cell = CellSummary {
                            best_energy: inst.objective(best.best_energy),
                            time_to_best: best.time_to_best,
                            members: members.iter().map(|m| inst.objective(m.best_energy)).collect(),
                        };
                        done.lock().expect("no poisoned lock").push((i, k, cell, records));
                    }
                    Err(e) => {
                        *failure.lock().expect("no poisoned lock") = Some(e);
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = failure.into_inner().expect("no poisoned lock") {
        return Err(e);
    }

    let mut outs = done.into_inner().expect("no poisoned lock");
    // deterministic assembly regardless of completion order
    outs.sort_by_key(|(i, k, _, _)| (*i, *k));

    let mut rows: Vec<ReportRow> = instances
        .iter()
        .enumerate()
        .filter_map(|(i, inst)| {
            inst.as_ref().map(|inst| ReportRow {
                instance: format!("{}#{i}", inst.name()),
                cells: vec![None; solver_ids.len()],
            })
        })
        .collect();
    // map original instance index -> row position
    let row_of: Vec<Option<usize>> = {
        let mut pos = 0;
        instances
            .iter()
            .map(|inst| {
                inst.as_ref().map(|_| {
                    let p = pos;
                    pos += 1;
                    p
                })
            })
            .collect()
    };
    let mut records = Vec::new();
    for (i, k, cell, recs) in outs {
        rows[row_of[i].expect("cell came from a present instance")].cells[k] = Some(cell);
        records.extend(recs);
    }
    // drop the disambiguating #index suffix when names are already unique
    let names: Vec<String> = rows.iter().map(|r| r.instance.clone()).collect();
    for row in &mut rows {
        let base = row.instance.split('#').next().expect("split yields at least one").to_string();
        let dup = names
            .iter()
            .filter(|n| n.split('#').next() == Some(base.as_str()))
            .count();
        if dup == 1 {
            row.instance = base;
        }
    }

    Ok(SuiteOutcome { report: BenchReport { solvers: suite.solvers.clone(), rows }, records, errors })
}

/// Persist a suite outcome: one JSON file per run record, a runs.csv with
/// the flat schema, report.csv and report.md.
pub fn persist_outcome(out_dir: &Path, outcome: &SuiteOutcome) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut runs_csv =
        String::from("instance,solver,seed,best_energy,time_to_best_s,wall_s,evaluations\n");
    for (idx, rec) in outcome.records.iter().enumerate() {
        let path = out_dir.join(format!("run_{idx:05}_{}_{}_{}.json", rec.instance, rec.solver, rec.seed));
        std::fs::write(&path, serde_json::to_string_pretty(rec).expect("record serializes"))?;
        runs_csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            rec.instance,
            rec.solver,
            rec.seed,
            rec.best_energy,
            rec.time_to_best_s,
            rec.wall_s,
            rec.evaluations
        ));
    }
    std::fs::write(out_dir.join("runs.csv"), runs_csv)?;
    std::fs::write(out_dir.join("report.csv"), emit_table(&outcome.report, TableFormat::Csv)?)?;
    std::fs::write(out_dir.join("report.md"), emit_table(&outcome.report, TableFormat::Markdown)?)?;
    if !outcome.errors.is_empty() {
        std::fs::write(out_dir.join("errors.txt"), outcome.errors.join("\n") + "\n")?;
    }
    Ok(())
}

/// Rebuild the report from persisted run records (the reduction is the
/// per-cell member minimum, so reloads reproduce the report exactly).
pub fn report_from_records(records: &[RunRecord], solvers: &[String]) -> BenchReport {
    let mut order: Vec<String> = Vec::new();
    for r in records {
        if !order.contains(&r.instance) {
            order.push(r.instance.clone());
        }
    }
    let rows = order
        .iter()
        .map(|inst| ReportRow {
            instance: inst.clone(),
            cells: solvers
                .iter()
                .map(|s| {
                    let members: Vec<&RunRecord> = records
                        .iter()
                        .filter(|r| &r.instance == inst && &r.solver == s)
                        .collect();
                    if members.is_empty() {
                        return None;
                    }
                    let best = members
                        .iter()
                        .min_by(|a, b| a.best_energy.total_cmp(&b.best_energy))
                        .expect("non-empty members");
                    Some(CellSummary {
                        best_energy: best.best_energy,
                        time_to_best: best.time_to_best_s,
                        members: members.iter().map(|m| m.best_energy).collect(),
                    })
                })
                .collect(),
        })
        .collect();
    BenchReport { solvers: solvers.to_vec(), rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn toy_suite(dir: &Path) -> BenchSuite {
        let gset = dir.join("toy.txt");
        let mut f = std::fs::File::create(&gset).unwrap();
        write!(f, "4 5\n1 2 1\n1 3 1\n1 4 1\n2 3 1\n3 4 1\n").unwrap();
        BenchSuite {
            instances: vec![InstanceSpec {
                path: Some(gset),
                family: None,
                n: None,
                seed: None,
                ratio: None,
            }],
            solvers: vec!["sa".into(), "bnb".into()],
            budget_ms: None,
            iteration_cap: Some(50),
            batch: 2,
            seed_base: 7,
        }
    }

    #[test]
    fn toy_suite_produces_expected_records() {
        let dir = tempfile::tempdir().unwrap();
        let suite = toy_suite(dir.path());
        let outcome = run_suite(&suite, &ParamLedger::builtin(), 2).unwrap();
        // 1 instance x 2 solvers x batch 2 = 4 run records, 1 report row
        assert_eq!(outcome.records.len(), 4);
        assert_eq!(outcome.report.rows.len(), 1);
        assert!(outcome.errors.is_empty());
        for row in &outcome.report.rows {
            for cell in row.cells.iter().flatten() {
                for &m in &cell.members {
                    assert!(cell.best_energy <= m + 1e-12);
                }
            }
        }
        // best cut of this 4-vertex graph is 4 edges -> objective -4
        let bnb_cell = outcome.report.rows[0].cells[1].as_ref().unwrap();
        assert_eq!(bnb_cell.best_energy, -4.0);
    }

    #[test]
    fn iteration_cap_reruns_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let suite = BenchSuite {
            instances: vec![InstanceSpec {
                path: None,
                family: Some(Family::Sk),
                n: Some(24),
                seed: Some(3),
                ratio: None,
            }],
            solvers: vec!["sa".into(), "sb".into(), "qis".into()],
            budget_ms: None,
            iteration_cap: Some(40),
            batch: 3,
            seed_base: 0,
        };
        let a = run_suite(&suite, &ParamLedger::builtin(), 3).unwrap();
        let b = run_suite(&suite, &ParamLedger::builtin(), 1).unwrap();
        assert_eq!(
            emit_table(&a.report, TableFormat::Csv).unwrap(),
            emit_table(&b.report, TableFormat::Csv).unwrap()
        );
        assert_eq!(a.records, b.records);
        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        persist_outcome(&out_a, &a).unwrap();
        persist_outcome(&out_b, &b).unwrap();
        assert_eq!(
            std::fs::read(out_a.join("report.csv")).unwrap(),
            std::fs::read(out_b.join("report.csv")).unwrap()
        );
        assert_eq!(
            std::fs::read(out_a.join("runs.csv")).unwrap(),
            std::fs::read(out_b.join("runs.csv")).unwrap()
        );
    }

    #[test]
    fn missing_instance_recorded_and_suite_continues() {
        let dir = tempfile::tempdir().unwrap();
        let mut suite = toy_suite(dir.path());
        suite.instances.push(InstanceSpec {
            path: Some(PathBuf::from("/nonexistent/file.txt")),
            family: None,
            n: None,
            seed: None,
            ratio: None,
        });
        let outcome = run_suite(&suite, &ParamLedger::builtin(), 1).unwrap();
        assert_eq!(outcome.errors.len(), 1);
        assert_eq!(outcome.report.rows.len(), 1); // the good instance still ran
    }

    #[test]
    fn invalid_solver_id_fails_before_any_run() {
        let dir = tempfile::tempdir().unwrap();
        let mut suite = toy_suite(dir.path());
        suite.solvers.push("groverlike".into());
        assert!(matches!(run_suite(&suite, &ParamLedger::builtin(), 1), Err(Error::Config(_))));
    }

    #[test]
    fn records_round_trip_to_report() {
        let dir = tempfile::tempdir().unwrap();
        let suite = toy_suite(dir.path());
        let outcome = run_suite(&suite, &ParamLedger::builtin(), 1).unwrap();
        let rebuilt = report_from_records(&outcome.records, &outcome.report.solvers);
        assert_eq!(
            emit_table(&rebuilt, TableFormat::Csv).unwrap(),
            emit_table(&outcome.report, TableFormat::Csv).unwrap()
        );
    }

    #[test]
    fn suite_validation_rejects_bad_configs() {
        let dir = tempfile::tempdir().unwrap();
        let mut suite = toy_suite(dir.path());
        suite.batch = 0;
        assert!(suite.validate().is_err());
        suite.batch = 1;
        suite.budget_ms = Some(0);
        assert!(suite.validate().is_err());
        suite.budget_ms = None;
        suite.iteration_cap = None;
        assert!(suite.validate().is_err());
    }
}
