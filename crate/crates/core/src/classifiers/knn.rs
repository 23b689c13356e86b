use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

/// Uniform-vote k nearest neighbours; the score is the minority fraction of
/// the k nearest training rows (Euclidean, ties by training order).
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    k: usize,
    x: Array2<f64>,
    y: Vec<f64>,
}

impl Knn {
    pub fn fit(x: ArrayView2<f64>, y: &[f64], params: &KnnParams) -> Self {
        Knn {
            k: params.k.clamp(1, x.nrows()),
            x: x.to_owned(),
            y: y.to_vec(),
        }
    }

    pub fn predict(&self, q: ArrayView2<f64>) -> Vec<f64> {
        let mut d: Vec<(f64, usize)> = Vec::with_capacity(self.x.nrows());
        q.rows()
            .into_iter()
            .map(|row| {
                d.clear();
                d.extend(self.x.rows().into_iter().enumerate().map(|(i, t)| {
                    let s: f64 = t.iter().zip(row.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                    (s, i)
                }));
                let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
                if self.k < d.len() {
                    d.select_nth_unstable_by(self.k - 1, cmp);
                }
                d[..self.k].iter().map(|&(_, i)| self.y[i]).sum::<f64>() / self.k as f64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn one_nn_memorises_two_points() {
        let x = array![[0.0, 0.0], [1.0, 1.0]];
        let m = Knn::fit(x.view(), &[0.0, 1.0], &KnnParams { k: 1 });
        assert_eq!(m.predict(x.view()), vec![0.0, 1.0]);
        assert_eq!(m.predict(array![[0.9, 0.8]].view()), vec![1.0]);
    }

    #[test]
    fn unanimous_and_split_votes() {
        let x = array![[0.0], [0.1], [0.2], [5.0], [5.1]];
        let y = [1.0, 1.0, 1.0, 0.0, 0.0];
        let m = Knn::fit(x.view(), &y, &KnnParams { k: 3 });
        assert_eq!(m.predict(array![[0.05]].view()), vec![1.0]);
        let all = Knn::fit(x.view(), &y, &KnnParams { k: 5 });
        assert!((all.predict(array![[0.05]].view())[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn k_is_clamped_to_training_size() {
        let x = array![[0.0], [1.0]];
        let m = Knn::fit(x.view(), &[0.0, 1.0], &KnnParams { k: 10 });
        assert_eq!(m.predict(array![[0.0]].view()), vec![0.5]);
    }
}
