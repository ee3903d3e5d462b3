//! Random NAE-3SAT generation at a chosen clause ratio and the spin-glass
//! encoding whose energy equals the number of violated clauses.

use crate::error::{Error, Result};
use crate::problem::{IsingProblem, SpinAssignment};
use crate::rng::SplitMix64;

/// One clause: three (variable, sign) literals; sign -1 means negated.
pub type Clause = [(usize, i8); 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    pub n: usize,
    pub clauses: Vec<Clause>,
}

/// Generate m = round(ratio * n) clauses, each over three distinct
/// variables drawn uniformly without replacement, with independent
/// uniform signs. Deterministic given (n, ratio, seed).
pub fn nae3sat_generate(n: usize, ratio: f64, seed: u64) -> Result<NaeFormula> {
    if n < 3 {
        return Err(Error::Domain(format!("need n >= 3 variables, got {n}")));
    }
    if ratio <= 0.0 {
        return Err(Error::Domain("clause ratio must be positive".into()));
    }
    let m = (ratio * n as f64).round() as usize;
    let mut rng = SplitMix64::new(seed);
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mut vars = [0usize; 3];
        vars[0] = rng.next_below(n as u64) as usize;
        loop {
            vars[1] = rng.next_below(n as u64) as usize;
            if vars[1] != vars[0] {
                break;
            }
        }
        loop {
            vars[2] = rng.next_below(n as u64) as usize;
            if vars[2] != vars[0] && vars[2] != vars[1] {
                break;
            }
        }
        let mut clause = [(0usize, 0i8); 3];
        for (slot, &v) in clause.iter_mut().zip(&vars) {
            let sign = if rng.next_below(2) == 0 { 1i8 } else { -1i8 };
            *slot = (v, sign);
        }
        clauses.push(clause);
    }
    Ok(NaeFormula { n, clauses })
}

/// H(s) = (1/4) sum_m (z1 z2 s s + z2 z3 s s + z3 z1 s s + 1); equal to the
/// count of clauses whose three sign-adjusted spins all agree.
pub fn nae3sat_to_ising(f: &NaeFormula) -> IsingProblem {
    let mut couplings = Vec::with_capacity(f.clauses.len() * 3);
    for clause in &f.clauses {
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (i, zi) = clause[a];
            let (j, zj) = clause[b];
            couplings.push(((i, j), (zi as f64) * (zj as f64) / 4.0));
        }
    }
    IsingProblem::new(f.n, couplings, vec![0.0; f.n], f.clauses.len() as f64 / 4.0)
        .expect("clause indices validated at generation")
}

/// Number of clauses whose three sign-adjusted spins are all equal.
pub fn unsat_count(f: &NaeFormula, s: &SpinAssignment) -> Result<usize> {
    if s.len() != f.n {
        return Err(Error::DimensionMismatch { expected: f.n, got: s.len() });
    }
    Ok(f
        .clauses
        .iter()
        .filter(|clause| {
            let lits: Vec<i8> = clause.iter().map(|&(v, z)| z * s.0[v]).collect();
            lits[0] == lits[1] && lits[1] == lits[2]
        })
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spins(bits: u32, n: usize) -> SpinAssignment {
        SpinAssignment((0..n).map(|i| if (bits >> i) & 1 == 1 { 1 } else { -1 }).collect())
    }

    #[test]
    fn clause_count_at_critical_ratio() {
        let f = nae3sat_generate(100, 2.11, 0).unwrap();
        assert_eq!(f.clauses.len(), 211);
    }

    #[test]
    fn tiny_formula_covers_all_variables() {
        let f = nae3sat_generate(3, 1.0 / 3.0, 5).unwrap();
        assert_eq!(f.clauses.len(), 1);
        let mut vars: Vec<usize> = f.clauses[0].iter().map(|&(v, _)| v).collect();
        vars.sort_unstable();
        assert_eq!(vars, vec![0, 1, 2]);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = nae3sat_generate(50, 2.11, 7).unwrap();
        let b = nae3sat_generate(50, 2.11, 7).unwrap();
        assert_eq!(a, b);
        let c = nae3sat_generate(50, 2.11, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_small_n() {
        assert!(nae3sat_generate(2, 2.11, 0).is_err());
    }

    #[test]
    fn single_clause_hand_values() {
        let f = NaeFormula { n: 3, clauses: vec![[(0, 1), (1, 1), (2, 1)]] };
        let p = nae3sat_to_ising(&f);
        assert_eq!(p.evaluate(&SpinAssignment(vec![1, 1, 1])).unwrap(), 1.0);
        assert_eq!(p.evaluate(&SpinAssignment(vec![1, 1, -1])).unwrap(), 0.0);
    }

    #[test]
    fn energy_equals_violated_clause_count_exhaustively() {
        let f = nae3sat_generate(5, 1.2, 3).unwrap();
        assert_eq!(f.clauses.len(), 6);
        let p = nae3sat_to_ising(&f);
        for bits in 0..32u32 {
            let s = spins(bits, 5);
            let h = p.evaluate(&s).unwrap();
            let count = unsat_count(&f, &s).unwrap() as f64;
            assert!((h - count).abs() < 1e-9, "bits={bits}: H={h} count={count}");
        }
    }

    #[test]
    fn complement_symmetry() {
        let f = nae3sat_generate(8, 2.11, 11).unwrap();
        let p = nae3sat_to_ising(&f);
        for bits in [0u32, 5, 77, 200] {
            let s = spins(bits, 8);
            assert_eq!(p.evaluate(&s).unwrap(), p.evaluate(&s.negate()).unwrap());
        }
    }
}
