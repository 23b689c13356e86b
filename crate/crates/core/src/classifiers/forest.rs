//! Random forest of fully grown Gini trees on bootstrap samples.

use ndarray::ArrayView2;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::tree::{build_tree, mean_of, Tree, TreeParams};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features drawn per split; `None` means ⌈√d⌉.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub(crate) trees: Vec<Tree>,
}

impl Forest {
    pub fn from_trees(trees: Vec<Tree>) -> Self {
        Forest { trees }
    }

    /// Tree `t` draws from its own stream derived from `(seed, t)`, so the
    /// result does not depend on the order trees are grown in.
    pub fn fit(x: ArrayView2<f64>, y: &[f64], params: &ForestParams, seed: u64) -> Self {
        let n = x.nrows();
        let d = x.ncols();
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_samples_leaf: params.min_samples_leaf,
            max_features: Some(
                params
                    .max_features
                    .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
                    .clamp(1, d),
            ),
        };
        let leaf = mean_of(y);
        let trees = (0..params.n_trees)
            .map(|t| {
                let mut rng = seed::rng(seed::derive(seed, &t));
                let idx: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                build_tree(x, y, idx, &tree_params, &mut rng, &leaf)
            })
            .collect();
        Forest { trees }
    }

    /// Mean of the trees' leaf minority fractions; with pure leaves this is
    /// the fraction of trees voting minority.
    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|row| self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64)
            .collect()
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }
}
