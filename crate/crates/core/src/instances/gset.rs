//! G-Set style Max-Cut instances: text parser, Ising mapping, cut values.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::problem::{IsingProblem, SpinAssignment};

/// Undirected weighted graph in the standard G-Set text format:
/// header "n m", then m lines "i j w" with 1-based vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GsetGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl GsetGraph {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }
}

pub fn parse_gset(text: &str) -> Result<GsetGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (lineno, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
    let mut it = header.split_whitespace();
    let parse_usize = |tok: Option<&str>, lineno: usize, what: &str| -> Result<usize> {
        tok.ok_or(Error::Parse { line: lineno + 1, message: format!("missing {what}") })?
            .parse()
            .map_err(|_| Error::Parse { line: lineno + 1, message: format!("bad {what}") })
    };
    let n = parse_usize(it.next(), lineno, "vertex count")?;
    let m = parse_usize(it.next(), lineno, "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let i = parse_usize(it.next(), lineno, "vertex index")?;
        let j = parse_usize(it.next(), lineno, "vertex index")?;
        let w: f64 = it
            .next()
            .ok_or(Error::Parse { line: lineno + 1, message: "missing weight".into() })?
            .parse()
            .map_err(|_| Error::Parse { line: lineno + 1, message: "bad weight".into() })?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("vertex index out of range (n = {n})"),
            });
        }
        if i == j {
            return Err(Error::Parse { line: lineno + 1, message: format!("self-loop at vertex {i}") });
        }
        let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        if !seen.insert((a, b)) {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("duplicate edge ({i}, {j})"),
            });
        }
        edges.push((a, b, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok(GsetGraph { n, edges })
}

pub fn emit_gset(g: &GsetGraph) -> String {
    let mut out = format!("{} {}\n", g.n, g.edges.len());
    for &(i, j, w) in &g.edges {
        out.push_str(&format!("{} {} {}\n", i + 1, j + 1, w));
    }
    out
}

/// Map to spin form: minimizing E(s) = sum w_ij s_i s_j maximizes the cut,
/// with cut(s) = (W_total - E(s)) / 2.
pub fn maxcut_to_ising(g: &GsetGraph) -> IsingProblem {
    IsingProblem::new(
        g.n,
        g.edges.iter().map(|&(i, j, w)| ((i, j), w)),
        vec![0.0; g.n],
        0.0,
    )
    .expect("graph indices validated at parse time")
}

/// Total weight of edges crossing the partition.
pub fn cut_value(g: &GsetGraph, s: &SpinAssignment) -> Result<f64> {
    if s.len() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, got: s.len() });
    }
    Ok(g
        .edges
        .iter()
        .filter(|&&(i, j, _)| s.0[i] != s.0[j])
        .map(|&(_, _, w)| w)
        .sum())
}
