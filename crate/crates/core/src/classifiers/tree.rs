//! CART trees on squared-error impurity.
//!
//! With 0/1 targets the weighted squared error of a node is half its weighted
//! Gini impurity, so one builder serves both the classification trees of the
//! random forest and the regression trees of gradient boosting.
//!
//! Splits maximise `S_l²/n_l + S_r²/n_r` (equivalently minimise the children's
//! squared error). Candidate features are scanned in ascending index order and
//! thresholds in ascending order; only a strictly better split replaces the
//! incumbent, so ties go to the lowest feature, then the lowest threshold.

use ndarray::{ArrayView1, ArrayView2};
use rand::seq::SliceRandom;

use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features drawn per split; `None` means all.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub(crate) nodes: Vec<Node>,
}

impl Tree {
    /// A single-leaf tree.
    pub fn constant(value: f64) -> Self {
        Tree {
            nodes: vec![Node::Leaf(value)],
        }
    }

    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(v) => return *v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

fn best_split_on(
    x: ArrayView2<f64>,
    y: &[f64],
    idx: &[usize],
    feature: usize,
    min_leaf: usize,
    buf: &mut Vec<(f64, f64)>,
) -> Option<Split> {
    buf.clear();
    buf.extend(idx.iter().map(|&i| (x[[i, feature]], y[i])));
    buf.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = buf.len();
    if buf[0].0 == buf[n - 1].0 {
        return None;
    }
    let total: f64 = buf.iter().map(|p| p.1).sum();
    let mut left_sum = 0.0;
    let mut best: Option<Split> = None;
    for k in 1..n {
        left_sum += buf[k - 1].1;
        if buf[k].0 == buf[k - 1].0 || k < min_leaf || n - k < min_leaf {
            continue;
        }
        let right_sum = total - left_sum;
        let score = left_sum * left_sum / k as f64 + right_sum * right_sum / (n - k) as f64;
        if best.as_ref().is_none_or(|b| score > b.score) {
            let mut threshold = 0.5 * (buf[k - 1].0 + buf[k].0);
            if threshold >= buf[k].0 {
                threshold = buf[k - 1].0;
            }
            best = Some(Split {
                feature,
                threshold,
                score,
            });
        }
    }
    best
}

/// Grow a tree on rows `idx` of `x` (duplicates act as weights). Leaf values
/// come from `leaf_value` applied to the leaf's rows.
pub fn build_tree(
    x: ArrayView2<f64>,
    y: &[f64],
    idx: Vec<usize>,
    params: &TreeParams,
    rng: &mut Rng,
    leaf_value: &dyn Fn(&[usize]) -> f64,
) -> Tree {
    let d = x.ncols();
    let mut nodes = Vec::new();
    let mut features: Vec<usize> = (0..d).collect();
    let mut buf = Vec::with_capacity(idx.len());
    // (slot to fill, rows, depth)
    let mut stack = vec![(0usize, idx, 0usize)];
    nodes.push(Node::Leaf(0.0));
    let min_leaf = params.min_samples_leaf.max(1);

    while let Some((slot, rows, depth)) = stack.pop() {
        let n = rows.len();
        let first = y[rows[0]];
        let pure = rows.iter().all(|&i| y[i] == first);
        let depth_ok = params.max_depth.is_none_or(|m| depth < m);
        let mut best: Option<Split> = None;
        if !pure && depth_ok && n >= 2 * min_leaf {
            let m = params.max_features.unwrap_or(d).clamp(1, d);
            let (drawn, rest) = if m < d {
                features.sort_unstable();
                let (chosen, others) = features.partial_shuffle(rng, m);
                let mut drawn = chosen.to_vec();
                let mut rest = others.to_vec();
                drawn.sort_unstable();
                rest.sort_unstable();
                (drawn, rest)
            } else {
                ((0..d).collect(), Vec::new())
            };
            for group in [&drawn, &rest] {
                for &f in group.iter() {
                    if let Some(s) = best_split_on(x, y, &rows, f, min_leaf, &mut buf) {
                        if best.as_ref().is_none_or(|b| s.score > b.score) {
                            best = Some(s);
                        }
                    }
                }
                if best.is_some() {
                    break;
                }
            }
        }
        match best {
            None => nodes[slot] = Node::Leaf(leaf_value(&rows)),
            Some(s) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[[i, s.feature]] <= s.threshold);
                let left = nodes.len();
                nodes.push(Node::Leaf(0.0));
                let right = nodes.len();
                nodes.push(Node::Leaf(0.0));
                nodes[slot] = Node::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left,
                    right,
                };
                stack.push((right, r, depth + 1));
                stack.push((left, l, depth + 1));
            }
        }
    }
    Tree { nodes }
}

pub(crate) fn mean_of(y: &[f64]) -> impl Fn(&[usize]) -> f64 + '_ {
    move |rows: &[usize]| rows.iter().map(|&i| y[i]).sum::<f64>() / rows.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use ndarray::{array, Array2};

    fn full() -> TreeParams {
        TreeParams {
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
        }
    }

    #[test]
    fn stump_on_separable_line() {
        let x = array![[0.1], [0.2], [0.3], [0.7], [0.8]];
        let y = [0.0, 0.0, 0.0, 1.0, 1.0];
        let params = TreeParams {
            max_depth: Some(1),
            ..full()
        };
        let t = build_tree(x.view(), &y, (0..5).collect(), &params, &mut seed::rng(0), &mean_of(&y));
        assert_eq!(t.depth(), 1);
        match &t.nodes[0] {
            Node::Split { feature, threshold, .. } => {
                assert_eq!(*feature, 0);
                assert!((threshold - 0.5).abs() < 1e-12);
            }
            _ => panic!("expected a split"),
        }
        for (i, &target) in y.iter().enumerate() {
            assert_eq!(t.predict_row(x.row(i)), target);
        }
    }

    #[test]
    fn full_tree_interpolates_distinct_rows() {
        let x = Array2::from_shape_fn((30, 3), |(i, j)| ((i * 7 + j * 13) % 31) as f64);
        let y: Vec<f64> = (0..30).map(|i| f64::from(u8::from(i % 3 == 0))).collect();
        let t = build_tree(
            x.view(),
            &y,
            (0..30).collect(),
            &full(),
            &mut seed::rng(1),
            &mean_of(&y),
        );
        for (i, &target) in y.iter().enumerate() {
            assert_eq!(t.predict_row(x.row(i)), target);
        }
    }

    #[test]
    fn tie_prefers_lowest_feature() {
        // both columns separate perfectly at the same position
        let x = array![[0.0, 0.0], [1.0, 1.0]];
        let y = [0.0, 1.0];
        let t = build_tree(x.view(), &y, vec![0, 1], &full(), &mut seed::rng(0), &mean_of(&y));
        assert!(matches!(t.nodes[0], Node::Split { feature: 0, .. }));
    }

    #[test]
    fn constant_features_make_a_leaf() {
        let x = Array2::from_elem((4, 2), 0.5);
        let y = [0.0, 1.0, 1.0, 0.0];
        let t = build_tree(x.view(), &y, (0..4).collect(), &full(), &mut seed::rng(0), &mean_of(&y));
        assert_eq!(t.nodes, vec![Node::Leaf(0.5)]);
    }

    #[test]
    fn min_leaf_is_respected() {
        let x = array![[0.0], [1.0], [2.0], [3.0]];
        let y = [1.0, 0.0, 0.0, 0.0];
        let params = TreeParams {
            min_samples_leaf: 2,
            ..full()
        };
        let t = build_tree(x.view(), &y, (0..4).collect(), &params, &mut seed::rng(0), &mean_of(&y));
        assert_eq!(t.predict_row(x.row(0)), 0.5);
    }
}
