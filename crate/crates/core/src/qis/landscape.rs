//! Landscape probes used by the adaptive controller: single-flip gain
//! statistics as a curvature proxy, the deepest accepted uphill move in
//! the recent window as a barrier proxy, and a stagnation counter.

use crate::problem::{BinaryAssignment, FlipCache, QuboProblem};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LandscapeStats {
    pub flip_gain_mean: f64,
    pub flip_gain_variance: f64,
    pub barrier_depth: f64,
    pub stagnation: u64,
}

impl LandscapeStats {
    /// Flip-gain moments at the current point; barrier and stagnation are
    /// carried forward by the caller.
    pub fn measure(
        p: &QuboProblem,
        x: &BinaryAssignment,
        cache: &FlipCache,
        barrier_depth: f64,
        stagnation: u64,
    ) -> Self {
        let n = p.n();
        let mut sum = 0.0;
        let mut sq = 0.0;
        for i in 0..n {
            let d = p.delta_flip(x, i, cache);
            sum += d;
            sq += d * d;
        }
        let mean = sum / n as f64;
        let variance = (sq / n as f64 - mean * mean).max(0.0);
        Self { flip_gain_mean: mean, flip_gain_variance: variance, barrier_depth, stagnation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_nonnegative_and_zero_on_flat_problem() {
        let p = QuboProblem::new(4, std::iter::empty(), vec![0.0; 4], 0.0).unwrap();
        let x = BinaryAssignment::zeros(4);
        let cache = p.local_fields(&x);
        let stats = LandscapeStats::measure(&p, &x, &cache, 0.0, 3);
        assert_eq!(stats.flip_gain_mean, 0.0);
        assert_eq!(stats.flip_gain_variance, 0.0);
        assert_eq!(stats.stagnation, 3);
    }

    #[test]
    fn moments_match_direct_computation() {
        let p = QuboProblem::new(3, [((0, 1), 1.0)], vec![0.5, -0.25, 1.0], 0.0).unwrap();
        let x = BinaryAssignment(vec![1, 0, 0]);
        let cache = p.local_fields(&x);
        let deltas: Vec<f64> = (0..3).map(|i| p.delta_flip(&x, i, &cache)).collect();
        let mean = deltas.iter().sum::<f64>() / 3.0;
        let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / 3.0;
        let stats = LandscapeStats::measure(&p, &x, &cache, 0.0, 0);
        assert!((stats.flip_gain_mean - mean).abs() < 1e-12);
        assert!((stats.flip_gain_variance - var).abs() < 1e-9);
    }
}
