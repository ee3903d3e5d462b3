//! On-line hyperparameter controller: a discrete upper-confidence bandit
//! over a 3x3x3 grid of (temperature scale, cluster-size mean, learning
//! rate), scoring cells by mean improvement plus an optimism bonus for
//! under-sampled cells.

pub const TEMP_SCALES: [f64; 3] = [0.5, 1.0, 2.0];
pub const CLUSTER_MEANS: [f64; 3] = [2.0, 4.0, 8.0];
pub const LEARNING_RATES: [f64; 3] = [0.05, 0.2, 0.5];

/// One hyperparameter cell; also the tunables carried by a mode run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeHyper {
    pub temp_scale: f64,
    pub cluster_mean: f64,
    pub learning_rate: f64,
}

impl ModeHyper {
    /// The designated default cell (all middle levels).
    pub fn default_cell() -> Self {
        Self { temp_scale: TEMP_SCALES[1], cluster_mean: CLUSTER_MEANS[1], learning_rate: LEARNING_RATES[1] }
    }

    pub fn cell_index(&self) -> usize {
        let nearest = |levels: &[f64; 3], v: f64| {
            let mut best = 0;
            for (k, &l) in levels.iter().enumerate() {
                if (v - l).abs() < (v - levels[best]).abs() {
                    best = k;
                }
            }
            best
        };
        nearest(&TEMP_SCALES, self.temp_scale) * 9
            + nearest(&CLUSTER_MEANS, self.cluster_mean) * 3
            + nearest(&LEARNING_RATES, self.learning_rate)
    }

    pub fn from_cell_index(idx: usize) -> Self {
        Self {
            temp_scale: TEMP_SCALES[(idx / 9) % 3],
            cluster_mean: CLUSTER_MEANS[(idx / 3) % 3],
            learning_rate: LEARNING_RATES[idx % 3],
        }
    }
}

impl Default for ModeHyper {
    fn default() -> Self {
        Self::default_cell()
    }
}

const CELLS: usize = 27;
const BONUS: f64 = 0.5;

/// Pick the next cell from the (params, achieved energy) history.
/// Deterministic: ties and the unexplored frontier break by cell index,
/// and the default cell is probed first.
pub fn tune_hyperparams(history: &[(ModeHyper, f64)]) -> ModeHyper {
    if history.is_empty() {
        return ModeHyper::default_cell();
    }
    let mut sums = [0.0f64; CELLS];
    let mut counts = [0u64; CELLS];
    let mut worst = f64::NEG_INFINITY;
    let mut best = f64::INFINITY;
    for (h, e) in history {
        let c = h.cell_index();
        sums[c] += e;
        counts[c] += 1;
        worst = worst.max(*e);
        best = best.min(*e);
    }
    let range = (worst - best).max(1e-12);
    let total: u64 = counts.iter().sum();

    // unexplored cells first, in fixed order starting from the default
    let default_idx = ModeHyper::default_cell().cell_index();
    for offset in 0..CELLS {
        let c = (default_idx + offset) % CELLS;
        if counts[c] == 0 {
            return ModeHyper::from_cell_index(c);
        }
    }

    let mut best_cell = 0;
    let mut best_score = f64::NEG_INFINITY;
    for c in 0..CELLS {
        // normalized improvement: 1 at the best energy seen, 0 at the worst
        let mean_improvement = (worst - sums[c] / counts[c] as f64) / range;
        let bonus = BONUS * ((total as f64).ln_1p() / counts[c] as f64).sqrt();
        let score = mean_improvement + bonus;
        if score > best_score {
            best_score = score;
            best_cell = c;
        }
    }
    ModeHyper::from_cell_index(best_cell)
}
