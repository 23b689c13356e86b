//! Gradient boosting on the logistic loss with depth-limited regression trees.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::tree::{build_tree, Tree, TreeParams};
use crate::nn::sigmoid;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoostParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_samples_leaf: usize,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            n_estimators: 100,
            max_depth: 3,
            learning_rate: 0.1,
            min_samples_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Boosted {
    init: f64,
    learning_rate: f64,
    trees: Vec<Tree>,
}

impl Boosted {
    /// Each stage fits a tree to the residuals `y - p` and sets every leaf to
    /// the Newton step `Σ(y - p) / Σ p(1 - p)` over its rows.
    pub fn fit(x: ArrayView2<f64>, y: &[f64], params: &BoostParams, seed: u64) -> Self {
        let n = x.nrows();
        let p0 = (y.iter().sum::<f64>() / n as f64).clamp(1e-12, 1.0 - 1e-12);
        let init = (p0 / (1.0 - p0)).ln();
        let mut f = vec![init; n];
        let tree_params = TreeParams {
            max_depth: Some(params.max_depth),
            min_samples_leaf: params.min_samples_leaf,
            max_features: None,
        };
        let mut rng = seed::rng(seed);
        let mut trees = Vec::with_capacity(params.n_estimators);
        for _ in 0..params.n_estimators {
            let p: Vec<f64> = f.iter().map(|&v| sigmoid(v)).collect();
            let resid: Vec<f64> = y.iter().zip(&p).map(|(y, p)| y - p).collect();
            let newton = |rows: &[usize]| {
                let num: f64 = rows.iter().map(|&i| resid[i]).sum();
                let den: f64 = rows.iter().map(|&i| p[i] * (1.0 - p[i])).sum();
                if den.abs() < 1e-12 {
                    0.0
                } else {
                    num / den
                }
            };
            let tree = build_tree(x, &resid, (0..n).collect(), &tree_params, &mut rng, &newton);
            for (i, fi) in f.iter_mut().enumerate() {
                *fi += params.learning_rate * tree.predict_row(x.row(i));
            }
            trees.push(tree);
        }
        Boosted {
            init,
            learning_rate: params.learning_rate,
            trees,
        }
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|row| {
                let f = self.init + self.learning_rate * self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>();
                sigmoid(f)
            })
            .collect()
    }
}
