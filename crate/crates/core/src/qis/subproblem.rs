//! Subproblem decomposition: carve out the k most active variables at
//! the current point as an induced sub-QUBO (everything else fixed and
//! folded into linear terms and the offset) for an exact micro-solve.

use crate::error::{Error, Result};
use crate::problem::{BinaryAssignment, QuboProblem};

pub const MAX_SUBPROBLEM: usize = 25;

#[derive(Debug)]
pub struct Subproblem {
    pub qubo: QuboProblem,
    /// sub-variable index -> full-problem variable index
    pub map: Vec<usize>,
}

impl Subproblem {
    pub fn restrict(&self, x: &BinaryAssignment) -> BinaryAssignment {
        BinaryAssignment(self.map.iter().map(|&i| x.0[i]).collect())
    }

    /// Write a sub-assignment back into the full assignment.
    pub fn embed(&self, sub: &BinaryAssignment, x: &mut BinaryAssignment) {
        for (k, &i) in self.map.iter().enumerate() {
            x.0[i] = sub.0[k];
        }
    }
}

/// Select the k variables with the largest |single-flip gain| at `x` and
/// build the induced sub-QUBO. The sub-energy of the restriction of `x`
/// equals the full energy E(x).
pub fn decompose_subproblem(
    p: &QuboProblem,
    x: &BinaryAssignment,
    k: usize,
) -> Result<Subproblem> {
    let n = p.n();
    if k == 0 || k > n.min(MAX_SUBPROBLEM) {
        return Err(Error::Domain(format!(
            "subproblem size {k} out of range 1..={}",
            n.min(MAX_SUBPROBLEM)
        )));
    }
    let cache = p.local_fields(x);
    let mut by_gain: Vec<usize> = (0..n).collect();
    by_gain.sort_by(|&a, &b| {
        p.delta_flip(x, b, &cache)
            .abs()
            .total_cmp(&p.delta_flip(x, a, &cache).abs())
            .then(a.cmp(&b))
    });
    let mut map: Vec<usize> = by_gain.into_iter().take(k).collect();
    map.sort_unstable();
    let mut sub_index = vec![usize::MAX; n];
    for (s, &i) in map.iter().enumerate() {
        sub_index[i] = s;
    }

    let mut diag: Vec<f64> = map.iter().map(|&i| p.diag()[i]).collect();
    let mut offset = p.offset();
    for i in 0..n {
        if sub_index[i] == usize::MAX && x.0[i] == 1 {
            offset += p.diag()[i];
        }
    }
    let mut quad = Vec::new();
    for &(i, j, w) in p.pairs() {
        let (i, j) = (i as usize, j as usize);
        match (sub_index[i], sub_index[j]) {
            (usize::MAX, usize::MAX) => {
                if x.0[i] == 1 && x.0[j] == 1 {
                    offset += w;
                }
            }
            (si, usize::MAX) => {
                if x.0[j] == 1 {
                    diag[si] += w;
                }
            }
            (usize::MAX, sj) => {
                if x.0[i] == 1 {
                    diag[sj] += w;
                }
            }
            (si, sj) => quad.push(((si, sj), w)),
        }
    }
    Ok(Subproblem { qubo: QuboProblem::new(k, quad, diag, offset)?, map })
}
