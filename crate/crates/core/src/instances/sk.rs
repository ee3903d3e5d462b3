//! Sherrington-Kirkpatrick spin-glass instances: fully connected Gaussian
//! couplings scaled by 1/sqrt(n), reproducible bit-for-bit from (n, seed).

use crate::error::{Error, Result};
use crate::problem::IsingProblem;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct SkInstance {
    pub n: usize,
    pub seed: u64,
    /// J_ij for i < j in row-major pair order, already divided by sqrt(n).
    pub couplings: Vec<f64>,
}

impl SkInstance {
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn to_ising(&self) -> IsingProblem {
        let mut terms = Vec::with_capacity(self.couplings.len());
        let mut k = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                terms.push(((i, j), self.couplings[k]));
                k += 1;
            }
        }
        IsingProblem::new(self.n, terms, vec![0.0; self.n], 0.0)
            .expect("generated indices are in range")
    }
}

/// Draw J_ij ~ Normal(0, 1) / sqrt(n) for every unordered pair i < j,
/// in row-major pair order, from the pinned SplitMix64 + inverse-CDF
/// normal stream seeded by `seed`.
pub fn sk_generate(n: usize, seed: u64) -> Result<SkInstance> {
    if n < 2 {
        return Err(Error::Domain(format!("SK model needs n >= 2 spins, got {n}")));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut rng = SplitMix64::new(seed);
    let couplings = (0..n * (n - 1) / 2).map(|_| rng.next_normal() * scale).collect();
    Ok(SkInstance { n, seed, couplings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_count_and_moments_at_benchmark_scale() {
        let inst = sk_generate(128, 0).unwrap();
        assert_eq!(inst.couplings.len(), 8128);
        let root_n = (128f64).sqrt();
        let raw: Vec<f64> = inst.couplings.iter().map(|&j| j * root_n).collect();
        let m = inst.couplings.len() as f64;
        let mean = raw.iter().sum::<f64>() / m;
        let var = raw.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / m;
        assert!(mean.abs() < 3.0 / m.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
    }

    #[test]
    fn minimal_instance() {
        let inst = sk_generate(2, 1).unwrap();
        assert_eq!(inst.couplings.len(), 1);
        assert!(sk_generate(1, 0).is_err());
    }

    #[test]
    fn bit_identical_reproduction() {
        let a = sk_generate(64, 5).unwrap();
        let b = sk_generate(64, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.couplings.iter().zip(&b.couplings).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_ne!(a, sk_generate(64, 6).unwrap());
    }

    #[test]
    fn ising_form_has_no_fields() {
        let p = sk_generate(16, 2).unwrap().to_ising();
        assert!(!p.has_fields());
        assert_eq!(p.pairs().len(), 120);
    }
}
