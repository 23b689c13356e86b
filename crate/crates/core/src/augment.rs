//! Minority oversampling: SMOTE interpolation or GAN generation.

use ndarray::{Array2, ArrayView2};
use rand::Rng as _;

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::gan::{self, GanModel};
use crate::seed;

pub const DEFAULT_SMOTE_K: usize = 5;

fn sq_dist(a: ndarray::ArrayView1<f64>, b: ndarray::ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` nearest other rows to `i` (Euclidean, ties by index).
fn nearest_neighbors(data: ArrayView2<f64>, i: usize, k: usize) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = (0..data.nrows())
        .filter(|&j| j != i)
        .map(|j| (sq_dist(data.row(i), data.row(j)), j))
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    d.into_iter().take(k).map(|(_, j)| j).collect()
}

/// `n_new` synthetic rows, each `x + u·(x_nn - x)` for a cyclically chosen
/// base row `x`, one of its `k` nearest minority neighbours `x_nn`, and
/// `u ~ U[0, 1)`.
pub fn smote(minority: ArrayView2<f64>, k: usize, n_new: usize, seed: u64) -> Result<Array2<f64>> {
    let d = minority.ncols();
    if n_new == 0 {
        return Ok(Array2::zeros((0, d)));
    }
    if minority.nrows() < 2 {
        return Err(Error::arg("SMOTE needs at least 2 minority rows"));
    }
    if k == 0 {
        return Err(Error::arg("SMOTE needs k >= 1"));
    }
    let k = k.min(minority.nrows() - 1);
    let neighbors: Vec<Vec<usize>> = (0..minority.nrows())
        .map(|i| nearest_neighbors(minority, i, k))
        .collect();
    let mut rng = seed::rng(seed);
    let mut out = Array2::zeros((n_new, d));
    for (t, mut row) in out.rows_mut().into_iter().enumerate() {
        let base = t % minority.nrows();
        let nn = neighbors[base][rng.gen_range(0..k)];
        let u: f64 = rng.gen();
        let x = minority.row(base);
        let y = minority.row(nn);
        for c in 0..d {
            row[c] = x[c] + u * (y[c] - x[c]);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub enum AugmentMethod<'a> {
    None,
    Smote { k: usize },
    Gan(&'a GanModel),
}

#[derive(Debug, Clone, Copy)]
pub struct AugmentPlan<'a> {
    pub method: AugmentMethod<'a>,
    /// Minority:majority ratio after augmentation, in `(0, 1]`.
    pub target_ratio: f64,
    pub seed: u64,
}

impl<'a> AugmentPlan<'a> {
    pub fn balanced(method: AugmentMethod<'a>, seed: u64) -> Self {
        AugmentPlan {
            method,
            target_ratio: 1.0,
            seed,
        }
    }
}

/// Number of minority rows to add so minority/majority reaches `target_ratio`.
pub fn synthetic_count(train: &LabeledDataset, target_ratio: f64) -> usize {
    let (minority, majority) = train.class_counts();
    let target = (target_ratio * majority as f64).round() as usize;
    target.saturating_sub(minority)
}

/// Append synthetic minority rows until the class ratio reaches the plan's
/// target. Original rows are kept, in order, as a prefix of the output.
pub fn apply_plan(train: &LabeledDataset, plan: &AugmentPlan<'_>) -> Result<LabeledDataset> {
    if !(plan.target_ratio > 0.0 && plan.target_ratio <= 1.0) {
        return Err(Error::arg(format!("target ratio {} outside (0, 1]", plan.target_ratio)));
    }
    let n_new = synthetic_count(train, plan.target_ratio);
    let synthetic = match plan.method {
        AugmentMethod::None => return Ok(train.clone()),
        _ if n_new == 0 => return Ok(train.clone()),
        AugmentMethod::Smote { k } => smote(train.minority_rows().view(), k, n_new, plan.seed)?,
        AugmentMethod::Gan(model) => {
            if model.feature_dim() != train.n_features() {
                return Err(Error::shape(format!(
                    "generator emits {} features, dataset has {}",
                    model.feature_dim(),
                    train.n_features()
                )));
            }
            gan::generate(model, n_new, plan.seed)?
        }
    };
    train.append(&synthetic, train.minority_label())
}
