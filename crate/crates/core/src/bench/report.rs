//! Report assembly: competition ranking, table emission (CSV/markdown),
//! and verification against published reference tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// One (instance, solver) cell of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub best_energy: f64,
    pub time_to_best: f64,
    pub members: Vec<f64>,
}

impl CellSummary {
    pub fn point(best_energy: f64) -> Self {
        Self { best_energy, time_to_best: 0.0, members: vec![best_energy] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: String,
    pub cells: Vec<Option<CellSummary>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub solvers: Vec<String>,
    pub rows: Vec<ReportRow>,
}

/// Competition ("1224") ranks for one report: ties share the smallest
/// 1-based position, the next rank skips by the tie size. Missing cells
/// are excluded from their row (with a warning collected by the caller).
#[derive(Debug, Clone, PartialEq)]
pub struct RankedReport {
    /// per row, per solver column; `None` for missing cells
    pub ranks: Vec<Vec<Option<u32>>>,
    /// arithmetic mean over the rows where the solver has a rank
    pub averages: Vec<Option<f64>>,
    pub warnings: Vec<String>,
}

/// Rank one row of energies: rank(i) = 1 + #{j : e_j < e_i}.
pub fn compute_row_ranks(energies: &[Option<f64>]) -> Vec<Option<u32>> {
    energies
        .iter()
        .map(|e| {
            e.map(|ei| {
                1 + energies
                    .iter()
                    .flatten()
                    .filter(|&&ej| ej < ei)
                    .count() as u32
            })
        })
        .collect()
}

pub fn compute_ranks(report: &BenchReport) -> Result<RankedReport> {
    if report.solvers.is_empty() {
        return Err(Error::Config("ranking needs at least one solver".into()));
    }
    let mut warnings = Vec::new();
    let mut ranks = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        let energies: Vec<Option<f64>> =
            row.cells.iter().map(|c| c.as_ref().map(|c| c.best_energy)).collect();
        for (k, e) in energies.iter().enumerate() {
            if e.is_none() {
                warnings.push(format!(
                    "row {}: solver {} has no result and is excluded",
                    row.instance, report.solvers[k]
                ));
            }
        }
        ranks.push(compute_row_ranks(&energies));
    }
    let averages = (0..report.solvers.len())
        .map(|k| {
            let col: Vec<u32> = ranks.iter().filter_map(|r| r[k]).collect();
            if col.is_empty() {
                None
            } else {
                Some(col.iter().sum::<u32>() as f64 / col.len() as f64)
            }
        })
        .collect();
    Ok(RankedReport { ranks, averages, warnings })
}

/// Column indices holding a row's best (most negative) energy, ties
/// included; used for the bold markers in emitted tables.
pub fn best_set(row: &ReportRow) -> Vec<usize> {
    let best = row
        .cells
        .iter()
        .flatten()
        .map(|c| c.best_energy)
        .fold(f64::INFINITY, f64::min);
    row.cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_ref().is_some_and(|c| c.best_energy == best))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::Config(format!("unknown table format '{other}'"))),
        }
    }
}

/// Emit a report as text; byte-stable for a given report.
pub fn emit_table(report: &BenchReport, format: TableFormat) -> Result<String> {
    let ranked = compute_ranks(report)?;
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("instance,solver,best_energy,time_to_best_s,rank,best\n");
            for (r, row) in report.rows.iter().enumerate() {
                let best = best_set(row);
                for (k, cell) in row.cells.iter().enumerate() {
                    let Some(cell) = cell else { continue };
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        row.instance,
                        report.solvers[k],
                        cell.best_energy,
                        cell.time_to_best,
                        ranked.ranks[r][k].expect("present cell has a rank"),
                        u8::from(best.contains(&k)),
                    )
                    .expect("writing to a String cannot fail");
                }
            }
            for (k, avg) in ranked.averages.iter().enumerate() {
                if let Some(avg) = avg {
                    writeln!(out, "average,{},,,{avg},", report.solvers[k])
                        .expect("writing to a String cannot fail");
                }
            }
        }
        TableFormat::Markdown => {
            write!(out, "| instance |").expect("write to String");
            for s in &report.solvers {
                write!(out, " {s} |").expect("write to String");
            }
            out.push('\n');
            out.push_str("|---|");
            out.push_str(&"---|".repeat(report.solvers.len()));
            out.push('\n');
            for (r, row) in report.rows.iter().enumerate() {
                let best = best_set(row);
                write!(out, "| {} |", row.instance).expect("write to String");
                for (k, cell) in row.cells.iter().enumerate() {
                    match cell {
                        Some(c) if best.contains(&k) => {
                            write!(out, " **{}** ({}) |", c.best_energy, ranked.ranks[r][k].unwrap())
                        }
                        Some(c) => {
                            write!(out, " {} ({}) |", c.best_energy, ranked.ranks[r][k].unwrap())
                        }
                        None => write!(out, " — |"),
                    }
                    .expect("write to String");
                }
                out.push('\n');
            }
            write!(out, "| average rank |").expect("write to String");
            for avg in &ranked.averages {
                match avg {
                    Some(a) => write!(out, " {a:.2} |"),
                    None => write!(out, " — |"),
                }
                .expect("write to String");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Parse the CSV produced by [`emit_table`] back into a report (member
/// energies are not part of the CSV, so cells come back as point values).
pub fn parse_report_csv(text: &str) -> Result<BenchReport> {
    let mut solvers: Vec<String> = Vec::new();
    // instance -> solver -> cell, insertion-ordered
    let mut order: Vec<String> = Vec::new();
    let mut grid: BTreeMap<String, BTreeMap<String, CellSummary>> = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        if ln == 0 || line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Parse { line: ln + 1, message: "expected 6 CSV fields".into() });
        }
        if f[0] == "average" {
            continue; // averages are derived, recomputed on emit
        }
        let energy: f64 = f[2].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            message: format!("bad energy '{}'", f[2]),
        })?;
        let time: f64 = f[3].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            message: format!("bad time '{}'", f[3]),
        })?;
        if !solvers.iter().any(|s| s == f[1]) {
            solvers.push(f[1].to_string());
        }
        if !grid.contains_key(f[0]) {
            order.push(f[0].to_string());
        }
        grid.entry(f[0].to_string()).or_default().insert(
            f[1].to_string(),
            CellSummary { best_energy: energy, time_to_best: time, members: vec![energy] },
        );
    }
    let rows = order
        .into_iter()
        .map(|inst| {
            let cells = solvers.iter().map(|s| grid[&inst].get(s).cloned()).collect();
            ReportRow { instance: inst, cells }
        })
        .collect();
    Ok(BenchReport { solvers, rows })
}

/// One cell of a shipped reference table. `table` names the table of
/// origin; `best` mirrors the published bold markers.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub table: String,
    pub instance: String,
    pub solver: String,
    pub value: f64,
    pub best: bool,
}

pub fn parse_reference(text: &str) -> Result<Vec<ReferenceCell>> {
    let mut cells = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if ln == 0 || line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(Error::Parse { line: ln + 1, message: "expected 5 CSV fields".into() });
        }
        let value: f64 = f[3].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            message: format!("bad value '{}'", f[3]),
        })?;
        let best = match f[4] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: format!("bad best flag '{other}'"),
                })
            }
        };
        cells.push(ReferenceCell {
            table: f[0].to_string(),
            instance: f[1].to_string(),
            solver: f[2].to_string(),
            value,
            best,
        });
    }
    Ok(cells)
}

/// Build a report whose cells are a reference table's energy values
/// (used to re-derive rankings from published energies).
pub fn report_from_reference(cells: &[ReferenceCell], table: &str) -> Result<BenchReport> {
    let mut solvers: Vec<String> = Vec::new();
    let mut order: Vec<String> = Vec::new();
    for c in cells.iter().filter(|c| c.table == table) {
        if !solvers.iter().any(|s| *s == c.solver) {
            solvers.push(c.solver.clone());
        }
        if !order.iter().any(|i| *i == c.instance) {
            order.push(c.instance.clone());
        }
    }
    if solvers.is_empty() {
        return Err(Error::Config(format!("reference has no '{table}' rows")));
    }
    let rows = order
        .iter()
        .map(|inst| ReportRow {
            instance: inst.clone(),
            cells: solvers
                .iter()
                .map(|s| {
                    cells
                        .iter()
                        .find(|c| c.table == table && &c.instance == inst && &c.solver == s)
                        .map(|c| CellSummary::point(c.value))
                })
                .collect(),
        })
        .collect();
    Ok(BenchReport { solvers, rows })
}

#[derive(Debug, Clone, Default)]
pub struct VerifySummary {
    pub rank_rows_total: usize,
    pub rank_rows_matched: usize,
    pub average_matches: usize,
    pub average_mismatches: Vec<(String, f64, f64)>,
    pub bold_rows_total: usize,
    pub bold_rows_matched: usize,
    pub lines: Vec<String>,
}

impl std::fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "rank rows matched: {}/{}", self.rank_rows_matched, self.rank_rows_total)?;
        writeln!(f, "bold sets matched: {}/{}", self.bold_rows_matched, self.bold_rows_total)?;
        writeln!(
            f,
            "column averages matched within 0.01: {}; mismatches: {}",
            self.average_matches,
            self.average_mismatches.len()
        )
    }
}

/// Compare a report's recomputed ranks, bold sets, and column averages
/// against a shipped reference file. Discrepancies are reported as data;
/// this never fails beyond a malformed reference file.
pub fn verify_reference(report: &BenchReport, reference_path: &Path) -> Result<VerifySummary> {
    let text = std::fs::read_to_string(reference_path)?;
    let cells = parse_reference(&text)?;
    let ranked = compute_ranks(report)?;
    let mut s = VerifySummary::default();

    // per-row rank comparison against the published rank table
    for (r, row) in report.rows.iter().enumerate() {
        let published: Vec<Option<u32>> = report
            .solvers
            .iter()
            .map(|solver| {
                cells
                    .iter()
                    .find(|c| {
                        c.table.ends_with("rank")
                            && c.instance == row.instance
                            && &c.solver == solver
                    })
                    .map(|c| c.value as u32)
            })
            .collect();
        if published.iter().all(|p| p.is_none()) {
            continue;
        }
        s.rank_rows_total += 1;
        let ours = &ranked.ranks[r];
        if published
            .iter()
            .zip(ours)
            .all(|(p, o)| p.is_none() || p == o)
        {
            s.rank_rows_matched += 1;
            s.lines.push(format!("rank row {}: match", row.instance));
        } else {
            s.lines.push(format!(
                "rank row {}: MISMATCH ours={ours:?} published={published:?}",
                row.instance
            ));
        }

        // bold set comparison against the published energy-table bolds
        let published_bold: Vec<usize> = report
            .solvers
            .iter()
            .enumerate()
            .filter(|(_, solver)| {
                cells.iter().any(|c| {
                    !c.table.ends_with("rank")
                        && !c.table.ends_with("avg")
                        && c.instance == row.instance
                        && &c.solver == *solver
                        && c.best
                })
            })
            .map(|(i, _)| i)
            .collect();
        if !published_bold.is_empty() {
            s.bold_rows_total += 1;
            if best_set(row) == published_bold {
                s.bold_rows_matched += 1;
            } else {
                s.lines.push(format!(
                    "bold set {}: MISMATCH ours={:?} published={:?}",
                    row.instance,
                    best_set(row),
                    published_bold
                ));
            }
        }
    }

    // column averages against the published averages
    for (k, solver) in report.solvers.iter().enumerate() {
        let published = cells
            .iter()
            .find(|c| c.table.ends_with("avg") && &c.solver == solver)
            .map(|c| c.value);
        let (Some(published), Some(ours)) = (published, ranked.averages[k]) else { continue };
        if (ours - published).abs() <= 0.01 {
            s.average_matches += 1;
            s.lines.push(format!("average {solver}: {ours:.4} matches published {published}"));
        } else {
            s.average_mismatches.push((solver.clone(), ours, published));
            s.lines.push(format!(
                "average {solver}: MISMATCH ours={ours:.4} published={published}"
            ));
        }
    }
    Ok(s)
}
