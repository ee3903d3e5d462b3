//! Canonical QUBO and Ising problem representations with sparse storage,
//! exact and incremental energy evaluation, continuous relaxation, and
//! loss-free conversion between the two forms.
//!
//! Quadratic terms are stored strictly upper-triangular with symmetric
//! semantics; asymmetric input is symmetrized on ingestion and diagonal
//! QUBO entries fold into the linear terms (x^2 = x on {0,1}).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Binary assignment over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAssignment(pub Vec<u8>);

/// Spin assignment over {-1,+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinAssignment(pub Vec<i8>);

impl BinaryAssignment {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.iter().any(|&v| v > 1) {
            return Err(Error::Domain("binary values must be 0 or 1".into()));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn to_spins(&self) -> SpinAssignment {
        SpinAssignment(self.0.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect())
    }
}

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Domain("spin values must be -1 or +1".into()));
        }
        Ok(Self(values))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn negate(&self) -> SpinAssignment {
        SpinAssignment(self.0.iter().map(|&s| -s).collect())
    }

    pub fn to_binary(&self) -> BinaryAssignment {
        BinaryAssignment(self.0.iter().map(|&s| if s > 0 { 1 } else { 0 }).collect())
    }
}

/// Either kind of assignment; solvers report in the space they operate in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assignment {
    Binary(BinaryAssignment),
    Spin(SpinAssignment),
}

impl Assignment {
    pub fn len(&self) -> usize {
        match self {
            Assignment::Binary(b) => b.len(),
            Assignment::Spin(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_binary(&self) -> BinaryAssignment {
        match self {
            Assignment::Binary(b) => b.clone(),
            Assignment::Spin(s) => s.to_binary(),
        }
    }

    pub fn as_spins(&self) -> SpinAssignment {
        match self {
            Assignment::Binary(b) => b.to_spins(),
            Assignment::Spin(s) => s.clone(),
        }
    }
}

fn normalize_pairs(
    n: usize,
    quad: impl IntoIterator<Item = ((usize, usize), f64)>,
    diag: &mut [f64],
) -> Result<Vec<(u32, u32, f64)>> {
    let mut merged: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for ((i, j), w) in quad {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        if !w.is_finite() {
            return Err(Error::NonFinite {
                context: format!("quadratic term ({i}, {j})"),
            });
        }
        if i == j {
            // x_i^2 = x_i on {0,1}; for spins s_i^2 = 1 and the caller
            // folds it into the offset before reaching here.
            diag[i] += w;
            continue;
        }
        let key = if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
        *merged.entry(key).or_insert(0.0) += w;
    }
    Ok(merged
        .into_iter()
        .filter(|&(_, w)| w != 0.0)
        .map(|((i, j), w)| (i, j, w))
        .collect())
}

fn build_adjacency(n: usize, pairs: &[(u32, u32, f64)]) -> Vec<Vec<(u32, f64)>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j, w) in pairs {
        adj[i as usize].push((j, w));
        adj[j as usize].push((i, w));
    }
    adj
}

/// Sparse symmetric quadratic form over binary variables:
/// E(x) = offset + sum_i diag_i x_i + sum_{i<j} quad_ij x_i x_j.
#[derive(Debug, Clone)]
pub struct QuboProblem {
    n: usize,
    pairs: Vec<(u32, u32, f64)>,
    diag: Vec<f64>,
    offset: f64,
    adj: Vec<Vec<(u32, f64)>>,
}

impl QuboProblem {
    pub fn new(
        n: usize,
        quad: impl IntoIterator<Item = ((usize, usize), f64)>,
        diag: Vec<f64>,
        offset: f64,
    ) -> Result<Self> {
        if diag.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: diag.len() });
        }
        if diag.iter().any(|d| !d.is_finite()) || !offset.is_finite() {
            return Err(Error::NonFinite { context: "linear terms or offset".into() });
        }
        let mut diag = diag;
        let pairs = normalize_pairs(n, quad, &mut diag)?;
        let adj = build_adjacency(n, &pairs);
        Ok(Self { n, pairs, diag, offset, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Upper-triangular quadratic terms (i < j), sorted by (i, j).
    pub fn pairs(&self) -> &[(u32, u32, f64)] {
        &self.pairs
    }

    pub fn neighbors(&self, i: usize) -> &[(u32, f64)] {
        &self.adj[i]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        let q = self.pairs.iter().map(|&(_, _, w)| w.abs()).fold(0.0, f64::max);
        let d = self.diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
        q.max(d)
    }

    pub fn evaluate(&self, x: &BinaryAssignment) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let mut e = self.offset;
        for (i, &d) in self.diag.iter().enumerate() {
            if x.0[i] == 1 {
                e += d;
            }
        }
        for &(i, j, w) in &self.pairs {
            if x.0[i as usize] == 1 && x.0[j as usize] == 1 {
                e += w;
            }
        }
        Ok(e)
    }

    /// Per-variable local fields at `x`: field_i = diag_i + sum_j quad_ij x_j.
    pub fn local_fields(&self, x: &BinaryAssignment) -> FlipCache {
        let mut fields = self.diag.clone();
        for &(i, j, w) in &self.pairs {
            if x.0[j as usize] == 1 {
                fields[i as usize] += w;
            }
            if x.0[i as usize] == 1 {
                fields[j as usize] += w;
            }
        }
        FlipCache { fields }
    }

    /// Energy change from flipping bit `i`, in O(1) given the cache.
    pub fn delta_flip(&self, x: &BinaryAssignment, i: usize, cache: &FlipCache) -> f64 {
        let f = cache.fields[i];
        if x.0[i] == 1 {
            -f
        } else {
            f
        }
    }

    /// Flip bit `i` in place and update the cache in O(degree(i)).
    pub fn commit_flip(&self, x: &mut BinaryAssignment, i: usize, cache: &mut FlipCache) {
        let delta: f64 = if x.0[i] == 1 { -1.0 } else { 1.0 };
        x.flip(i);
        for &(j, w) in &self.adj[i] {
            cache.fields[j as usize] += w * delta;
        }
    }

    /// Debug audit: recompute fields from scratch and compare.
    pub fn audit_cache(&self, x: &BinaryAssignment, cache: &FlipCache) -> Result<()> {
        let fresh = self.local_fields(x);
        for i in 0..self.n {
            if (fresh.fields[i] - cache.fields[i]).abs() > 1e-9 {
                return Err(Error::Internal(format!("stale local-field cache at variable {i}")));
            }
        }
        Ok(())
    }

    /// Relaxed polynomial energy and gradient at fractional x in [0,1]^n.
    pub fn relaxed_energy_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::Domain("relaxed point outside [0,1]^n".into()));
        }
        let mut e = self.offset;
        let mut grad = self.diag.clone();
        for (i, &d) in self.diag.iter().enumerate() {
            e += d * x[i];
        }
        for &(i, j, w) in &self.pairs {
            let (i, j) = (i as usize, j as usize);
            e += w * x[i] * x[j];
            grad[i] += w * x[j];
            grad[j] += w * x[i];
        }
        Ok((e, grad))
    }

    pub fn to_ising(&self) -> IsingProblem {
        // x = (1+s)/2
        let n = self.n;
        let mut fields = vec![0.0; n];
        let mut offset = self.offset;
        for (i, &d) in self.diag.iter().enumerate() {
            fields[i] += d / 2.0;
            offset += d / 2.0;
        }
        let mut couplings = Vec::with_capacity(self.pairs.len());
        for &(i, j, w) in &self.pairs {
            couplings.push(((i as usize, j as usize), w / 4.0));
            fields[i as usize] += w / 4.0;
            fields[j as usize] += w / 4.0;
            offset += w / 4.0;
        }
        IsingProblem::new(n, couplings, fields, offset).expect("conversion preserves validity")
    }
}

/// Explicit local-field cache for incremental single-flip evaluation.
/// Owned by the solver and kept consistent via `commit_flip`.
#[derive(Debug, Clone)]
pub struct FlipCache {
    pub fields: Vec<f64>,
}

/// Pairwise spin model: E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j.
#[derive(Debug, Clone)]
pub struct IsingProblem {
    n: usize,
    pairs: Vec<(u32, u32, f64)>,
    fields: Vec<f64>,
    offset: f64,
    adj: Vec<Vec<(u32, f64)>>,
}

impl IsingProblem {
    pub fn new(
        n: usize,
        couplings: impl IntoIterator<Item = ((usize, usize), f64)>,
        fields: Vec<f64>,
        offset: f64,
    ) -> Result<Self> {
        if fields.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: fields.len() });
        }
        if fields.iter().any(|h| !h.is_finite()) || !offset.is_finite() {
            return Err(Error::NonFinite { context: "fields or offset".into() });
        }
        let mut offset = offset;
        let mut fold = vec![0.0; n];
        let mut kept = Vec::new();
        for ((i, j), w) in couplings {
            if i == j {
                // s_i^2 = 1
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
                offset += w;
            } else {
                kept.push(((i, j), w));
            }
        }
        let pairs = normalize_pairs(n, kept, &mut fold)?;
        debug_assert!(fold.iter().all(|&v| v == 0.0));
        let mut fields = fields;
        for (f, extra) in fields.iter_mut().zip(fold) {
            *f += extra;
        }
        let adj = build_adjacency(n, &pairs);
        Ok(Self { n, pairs, fields, offset, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn pairs(&self) -> &[(u32, u32, f64)] {
        &self.pairs
    }

    pub fn neighbors(&self, i: usize) -> &[(u32, f64)] {
        &self.adj[i]
    }

    pub fn has_fields(&self) -> bool {
        self.fields.iter().any(|&h| h != 0.0)
    }

    pub fn coupling_rms(&self) -> f64 {
        if self.pairs.is_empty() {
            return 0.0;
        }
        let s: f64 = self.pairs.iter().map(|&(_, _, w)| w * w).sum();
        (s / self.pairs.len() as f64).sqrt()
    }

    pub fn evaluate(&self, s: &SpinAssignment) -> Result<f64> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: s.len() });
        }
        let mut e = self.offset;
        for (i, &h) in self.fields.iter().enumerate() {
            e += h * s.0[i] as f64;
        }
        for &(i, j, w) in &self.pairs {
            e += w * (s.0[i as usize] as f64) * (s.0[j as usize] as f64);
        }
        Ok(e)
    }

    /// Local fields at `s`: field_i = h_i + sum_j J_ij s_j.
    pub fn local_fields(&self, s: &SpinAssignment) -> FlipCache {
        let mut fields = self.fields.clone();
        for &(i, j, w) in &self.pairs {
            fields[i as usize] += w * s.0[j as usize] as f64;
            fields[j as usize] += w * s.0[i as usize] as f64;
        }
        FlipCache { fields }
    }

    /// Energy change from flipping spin `i`: -2 s_i field_i.
    pub fn delta_flip(&self, s: &SpinAssignment, i: usize, cache: &FlipCache) -> f64 {
        -2.0 * s.0[i] as f64 * cache.fields[i]
    }

    pub fn commit_flip(&self, s: &mut SpinAssignment, i: usize, cache: &mut FlipCache) {
        let old = s.0[i] as f64;
        s.flip(i);
        for &(j, w) in &self.adj[i] {
            cache.fields[j as usize] -= 2.0 * w * old;
        }
    }

    pub fn audit_cache(&self, s: &SpinAssignment, cache: &FlipCache) -> Result<()> {
        let fresh = self.local_fields(s);
        for i in 0..self.n {
            if (fresh.fields[i] - cache.fields[i]).abs() > 1e-9 {
                return Err(Error::Internal(format!("stale local-field cache at spin {i}")));
            }
        }
        Ok(())
    }

    pub fn to_qubo(&self) -> QuboProblem {
        // s = 2x - 1
        let n = self.n;
        let mut diag = vec![0.0; n];
        let mut offset = self.offset;
        for (i, &h) in self.fields.iter().enumerate() {
            diag[i] += 2.0 * h;
            offset -= h;
        }
        let mut quad = Vec::with_capacity(self.pairs.len());
        for &(i, j, w) in &self.pairs {
            quad.push(((i as usize, j as usize), 4.0 * w));
            diag[i as usize] -= 2.0 * w;
            diag[j as usize] -= 2.0 * w;
            offset += w;
        }
        QuboProblem::new(n, quad, diag, offset).expect("conversion preserves validity")
    }
}

/// Round a relaxed point: bit i = 1 iff x_i > threshold (ties round to 0).
pub fn round_relaxed(x: &[f64], threshold: f64) -> BinaryAssignment {
    BinaryAssignment(x.iter().map(|&v| u8::from(v > threshold)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_qubo(n: usize, rng: &mut impl Rng) -> QuboProblem {
        let mut quad = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                quad.push(((i, j), rng.gen_range(-1.0..1.0)));
            }
        }
        let diag = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        QuboProblem::new(n, quad, diag, rng.gen_range(-1.0..1.0)).unwrap()
    }

    fn random_bits(n: usize, rng: &mut impl Rng) -> BinaryAssignment {
        BinaryAssignment((0..n).map(|_| rng.gen_range(0..2u8)).collect())
    }

    #[test]
    fn evaluate_trivial_cases() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(p.evaluate(&BinaryAssignment(vec![0, 0])).unwrap(), 0.0);
        assert_eq!(p.evaluate(&BinaryAssignment(vec![1, 1])).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let p = random_qubo(n, &mut rng);
        for _ in 0..20 {
            let x = random_bits(n, &mut rng);
            // dense x^T Q x with Q upper-triangular plus diagonal
            let mut dense = vec![vec![0.0; n]; n];
            for &(i, j, w) in p.pairs() {
                dense[i as usize][j as usize] = w;
            }
            for (i, &d) in p.diag().iter().enumerate() {
                dense[i][i] = d;
            }
            let mut expect = p.offset();
            for i in 0..n {
                for j in 0..n {
                    expect += dense[i][j] * x.0[i] as f64 * x.0[j] as f64;
                }
            }
            assert!((p.evaluate(&x).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_ising_trivial() {
        let p = IsingProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(p.evaluate(&SpinAssignment(vec![1, -1])).unwrap(), -1.0);
        assert_eq!(p.evaluate(&SpinAssignment(vec![1, 1])).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_dimension_error() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        assert!(p.evaluate(&BinaryAssignment(vec![0])).is_err());
    }

    #[test]
    fn delta_flip_trivial() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        let a = BinaryAssignment(vec![1, 1]);
        let cache = p.local_fields(&a);
        assert_eq!(p.delta_flip(&a, 0, &cache), -1.0);
    }

    #[test]
    fn delta_flip_matches_reevaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        for _ in 0..100 {
            let p = random_qubo(n, &mut rng);
            let mut x = random_bits(n, &mut rng);
            let mut cache = p.local_fields(&x);
            let i = rng.gen_range(0..n);
            let before = p.evaluate(&x).unwrap();
            let delta = p.delta_flip(&x, i, &cache);
            p.commit_flip(&mut x, i, &mut cache);
            let after = p.evaluate(&x).unwrap();
            assert!((delta - (after - before)).abs() < 1e-12);
            p.audit_cache(&x, &cache).unwrap();
        }
    }

    #[test]
    fn ising_delta_flip_matches_reevaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 12;
        for _ in 0..100 {
            let q = random_qubo(n, &mut rng);
            let p = q.to_ising();
            let mut s = random_bits(n, &mut rng).to_spins();
            let mut cache = p.local_fields(&s);
            let i = rng.gen_range(0..n);
            let before = p.evaluate(&s).unwrap();
            let delta = p.delta_flip(&s, i, &cache);
            p.commit_flip(&mut s, i, &mut cache);
            let after = p.evaluate(&s).unwrap();
            assert!((delta - (after - before)).abs() < 1e-12);
            p.audit_cache(&s, &cache).unwrap();
        }
    }

    #[test]
    fn stale_cache_detected() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        let mut x = BinaryAssignment(vec![0, 0]);
        let cache = p.local_fields(&x);
        x.flip(1); // not committed through the cache
        assert!(p.audit_cache(&x, &cache).is_err());
    }

    #[test]
    fn conversion_round_trip_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=10 {
            let q = random_qubo(n, &mut rng);
            let ising = q.to_ising();
            let back = ising.to_qubo();
            for bits in 0..(1u32 << n) {
                let x = BinaryAssignment((0..n).map(|i| ((bits >> i) & 1) as u8).collect());
                let s = x.to_spins();
                let eq = q.evaluate(&x).unwrap();
                let ei = ising.evaluate(&s).unwrap();
                let eb = back.evaluate(&x).unwrap();
                assert!((eq - ei).abs() <= 1e-9, "n={n} bits={bits}: {eq} vs {ei}");
                assert!((eq - eb).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn linear_qubo_to_ising_by_hand() {
        // E(x) = x0  ->  h0 = 1/2, offset = 1/2
        let q = QuboProblem::new(1, std::iter::empty(), vec![1.0], 0.0).unwrap();
        let ising = q.to_ising();
        assert_eq!(ising.fields(), &[0.5]);
        assert_eq!(ising.offset(), 0.5);
        assert_eq!(ising.evaluate(&SpinAssignment(vec![1])).unwrap(), 1.0);
        assert_eq!(ising.evaluate(&SpinAssignment(vec![-1])).unwrap(), 0.0);
    }

    #[test]
    fn single_edge_maxcut_ordering_preserved() {
        // Max-Cut QUBO on one +1 edge: maximize x0 + x1 - 2 x0 x1, i.e.
        // minimize 2 x0 x1 - x0 - x1.
        let q = QuboProblem::new(2, [((0, 1), 2.0)], vec![-1.0, -1.0], 0.0).unwrap();
        let ising = q.to_ising();
        let mut qubo_order: Vec<(u32, f64)> = (0..4)
            .map(|b| {
                let x = BinaryAssignment(vec![(b & 1) as u8, ((b >> 1) & 1) as u8]);
                (b, q.evaluate(&x).unwrap())
            })
            .collect();
        let mut ising_order: Vec<(u32, f64)> = (0..4)
            .map(|b| {
                let x = BinaryAssignment(vec![(b & 1) as u8, ((b >> 1) & 1) as u8]);
                (b, ising.evaluate(&x.to_spins()).unwrap())
            })
            .collect();
        qubo_order.sort_by(|a, b| a.1.total_cmp(&b.1));
        ising_order.sort_by(|a, b| a.1.total_cmp(&b.1));
        let qs: Vec<f64> = qubo_order.iter().map(|&(_, e)| e).collect();
        let is: Vec<f64> = ising_order.iter().map(|&(_, e)| e).collect();
        for (a, b) in qs.iter().zip(&is) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn relaxed_energy_hand_case() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        let (e, g) = p.relaxed_energy_and_gradient(&[0.5, 0.5]).unwrap();
        assert!((e - 0.25).abs() < 1e-12);
        assert!((g[0] - 0.5).abs() < 1e-12);
        assert!((g[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn relaxed_energy_agrees_on_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = random_qubo(8, &mut rng);
        for bits in 0..(1u32 << 8) {
            let x = BinaryAssignment((0..8).map(|i| ((bits >> i) & 1) as u8).collect());
            let xf: Vec<f64> = x.0.iter().map(|&b| b as f64).collect();
            let (e, _) = p.relaxed_energy_and_gradient(&xf).unwrap();
            assert!((e - p.evaluate(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let n = 16;
        let h = 1e-6;
        for _ in 0..20 {
            let p = random_qubo(n, &mut rng);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
            let (_, grad) = p.relaxed_energy_and_gradient(&x).unwrap();
            for i in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let (ep, _) = p.relaxed_energy_and_gradient(&xp).unwrap();
                let (em, _) = p.relaxed_energy_and_gradient(&xm).unwrap();
                let fd = (ep - em) / (2.0 * h);
                let scale = grad[i].abs().max(1.0);
                assert!((grad[i] - fd).abs() / scale <= 1e-6, "i={i}: {} vs {}", grad[i], fd);
            }
        }
    }

    #[test]
    fn relaxed_domain_error() {
        let p = QuboProblem::new(2, [((0, 1), 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        assert!(p.relaxed_energy_and_gradient(&[0.5, 1.5]).is_err());
    }

    #[test]
    fn round_relaxed_cases() {
        assert_eq!(round_relaxed(&[0.2, 0.8], 0.5).0, vec![0, 1]);
        assert_eq!(round_relaxed(&[0.5, 0.5], 0.5).0, vec![0, 0]);
        assert_eq!(round_relaxed(&[0.9; 4], 0.5).0, vec![1; 4]);
    }

    #[test]
    fn symmetrization_folds_duplicates_and_diagonal() {
        // (0,1) and (1,0) merge; (1,1) folds into diag.
        let p = QuboProblem::new(
            2,
            [((0, 1), 1.0), ((1, 0), 2.0), ((1, 1), 5.0)],
            vec![0.0, 0.0],
            0.0,
        )
        .unwrap();
        assert_eq!(p.pairs(), &[(0, 1, 3.0)]);
        assert_eq!(p.diag(), &[0.0, 5.0]);
    }
}
