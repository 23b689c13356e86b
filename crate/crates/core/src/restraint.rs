//! Dynamic restraint: KMMD quality feedback turned into a generator dropout
//! rate.
//!
//! Every generator step produces one raw KMMD value between a fresh generated
//! batch and a real batch. The value is min-max normalised against the whole
//! run history into `q ∈ [0, 1]`, compared with the best index seen so far
//! `q*`, and mapped to a dropout rate by [`f_rate`]:
//!
//! ```text
//! rate = 0                          if q <= q*
//!        α·q* + (α + λ)·(q - q*)    otherwise, clamped to [0, 0.95]
//! ```

use ndarray::{concatenate, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on any dropout rate produced by [`f_rate`].
pub const MAX_DROPOUT_RATE: f64 = 0.95;

/// Lower bound on the median-heuristic bandwidth.
pub const MIN_BANDWIDTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// σ = median pairwise distance over the pooled sample.
    #[default]
    MedianHeuristic,
    /// Sum of Gaussian kernels with the listed bandwidths.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct KmmdConfig {
    pub bandwidth: Bandwidth,
}

/// Squared distances of the upper triangle (`i < j`) of the pooled sample,
/// row-major, from the Gram matrix `‖x‖² + ‖y‖² - 2x·y`.
fn pooled_sq_distances(pool: ArrayView2<f64>) -> Vec<f64> {
    let n = pool.nrows();
    let gram = pool.dot(&pool.t());
    let mut d = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        let gi = gram.row(i);
        for j in i + 1..n {
            d.push((gi[i] + gram[[j, j]] - 2.0 * gi[j]).max(0.0));
        }
    }
    d
}

fn median_distance(sq: &[f64]) -> f64 {
    if sq.is_empty() {
        return MIN_BANDWIDTH;
    }
    // Distances are nonnegative, so their bit patterns sort like the values.
    let mut d: Vec<u64> = sq.iter().map(|v| v.to_bits()).collect();
    let mid = d.len() / 2;
    let (lower, &mut upper, _) = d.select_nth_unstable(mid);
    let upper = f64::from_bits(upper).sqrt();
    let median = if sq.len() % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().max().map_or(upper, |b| f64::from_bits(b).sqrt());
        0.5 * (below + upper)
    };
    median.max(MIN_BANDWIDTH)
}

/// Biased MMD² estimate with a Gaussian kernel. Symmetric in its arguments
/// and never negative.
pub fn kmmd(a: ArrayView2<f64>, b: ArrayView2<f64>, cfg: &KmmdConfig) -> Result<f64> {
    if a.nrows() == 0 || b.nrows() == 0 {
        return Err(Error::arg("kmmd needs nonempty samples"));
    }
    if a.ncols() != b.ncols() {
        return Err(Error::shape(format!(
            "kmmd samples have {} and {} columns",
            a.ncols(),
            b.ncols()
        )));
    }
    if let Bandwidth::Fixed(s) = &cfg.bandwidth {
        if s.is_empty() || s.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::arg("fixed bandwidths must be nonempty and > 0"));
        }
    }
    let pool = concatenate(Axis(0), &[a.view(), b.view()]).map_err(|e| Error::shape(e.to_string()))?;
    let sq = pooled_sq_distances(pool.view());
    let sigmas = match &cfg.bandwidth {
        Bandwidth::MedianHeuristic => vec![median_distance(&sq)],
        Bandwidth::Fixed(s) => s.clone(),
    };
    let gammas: Vec<f64> = sigmas.iter().map(|s| 1.0 / (2.0 * s * s)).collect();
    let kernel = |d: f64| -> f64 {
        match gammas.as_slice() {
            [g] => (-d * g).exp(),
            gs => gs.iter().map(|g| (-d * g).exp()).sum(),
        }
    };

    // Diagonal terms have distance 0; off-diagonal pairs count twice within
    // a sample and once across.
    let (na, nb) = (a.nrows(), b.nrows());
    let n = na + nb;
    let on_diag = kernel(0.0);
    let (mut saa, mut sbb, mut sab) = (na as f64 * on_diag, nb as f64 * on_diag, 0.0);
    let mut k = 0;
    for i in 0..n {
        let row = &sq[k..k + (n - i - 1)];
        k += n - i - 1;
        if i < na {
            let split = na - i - 1;
            saa += 2.0 * row[..split].iter().map(|&d| kernel(d)).sum::<f64>();
            sab += row[split..].iter().map(|&d| kernel(d)).sum::<f64>();
        } else {
            sbb += 2.0 * row.iter().map(|&d| kernel(d)).sum::<f64>();
        }
    }
    let kaa = saa / (na * na) as f64;
    let kbb = sbb / (nb * nb) as f64;
    let kab = sab / (na * nb) as f64;
    Ok((kaa + kbb - 2.0 * kab).max(0.0))
}

/// The piecewise punishment function mapping the current and best quality
/// indices to a dropout rate.
pub fn f_rate(q: f64, q_star: f64, alpha: f64, lambda: f64) -> f64 {
    if q <= q_star {
        0.0
    } else {
        (alpha * q_star + (alpha + lambda) * (q - q_star)).clamp(0.0, MAX_DROPOUT_RATE)
    }
}

/// One evaluation of the restraint schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestraintStep {
    pub raw: f64,
    pub q: f64,
    /// `q*` used to compute `rate` (the best index before this step).
    pub q_star: f64,
    /// `q*` after this step.
    pub q_best: f64,
    pub rate: f64,
}

/// Running state of the dynamic restraint for one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct RestraintState {
    pub alpha: f64,
    pub lambda: f64,
    kmmd_min: f64,
    kmmd_max: f64,
    q_best: f64,
    history: Vec<f64>,
}

impl RestraintState {
    pub const DEFAULT_ALPHA: f64 = 0.2;

    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !(lambda >= 0.0) {
            return Err(Error::arg(format!(
                "alpha and lambda must be >= 0, got {alpha} and {lambda}"
            )));
        }
        Ok(RestraintState {
            alpha,
            lambda,
            kmmd_min: f64::INFINITY,
            kmmd_max: f64::NEG_INFINITY,
            q_best: 1.0,
            history: Vec::new(),
        })
    }

    pub fn kmmd_min(&self) -> f64 {
        self.kmmd_min
    }

    pub fn kmmd_max(&self) -> f64 {
        self.kmmd_max
    }

    pub fn q_best(&self) -> f64 {
        self.q_best
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    /// Fold `raw` into the running extremes and return its normalised index.
    /// A degenerate window (max = min) yields 0. Does not touch `q*`.
    pub fn normalize_q(&mut self, raw: f64) -> Result<f64> {
        if !(raw >= 0.0) {
            return Err(Error::arg(format!("raw KMMD must be >= 0, got {raw}")));
        }
        self.kmmd_min = self.kmmd_min.min(raw);
        self.kmmd_max = self.kmmd_max.max(raw);
        self.history.push(raw);
        let span = self.kmmd_max - self.kmmd_min;
        let q = if span > 0.0 {
            ((raw - self.kmmd_min) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Ok(q)
    }

    /// Normalise, evaluate the rate against the previous best, then update the
    /// best. A new best therefore always gets rate 0 on its own step.
    pub fn step(&mut self, raw: f64) -> Result<RestraintStep> {
        let q = self.normalize_q(raw)?;
        let q_star = self.q_best;
        let rate = f_rate(q, q_star, self.alpha, self.lambda);
        self.q_best = self.q_best.min(q);
        Ok(RestraintStep {
            raw,
            q,
            q_star,
            q_best: self.q_best,
            rate,
        })
    }
}
