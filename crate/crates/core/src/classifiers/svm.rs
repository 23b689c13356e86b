//! Linear soft-margin SVM trained by full-batch subgradient descent on
//! `‖w‖² / (2Cn) + mean(hinge)`.

use ndarray::{Array1, ArrayView2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub c: f64,
    pub epochs: usize,
    /// Step size at epoch 1; decays as `1/√t`.
    pub lr: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            epochs: 1000,
            lr: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    w: Array1<f64>,
    b: f64,
}

impl LinearSvm {
    /// `y` holds 0/1 targets; 1 is mapped to the +1 side. Returns the iterate
    /// with the lowest objective seen.
    pub fn fit(x: ArrayView2<f64>, y: &[f64], params: &SvmParams) -> Self {
        let n = x.nrows() as f64;
        let sign: Vec<f64> = y.iter().map(|&v| if v > 0.5 { 1.0 } else { -1.0 }).collect();
        let reg = 1.0 / (params.c * n);
        let mut w = Array1::<f64>::zeros(x.ncols());
        let mut b = 0.0;
        let objective = |w: &Array1<f64>, b: f64| {
            let margins = x.dot(w);
            let hinge: f64 = margins
                .iter()
                .zip(&sign)
                .map(|(m, s)| (1.0 - s * (m + b)).max(0.0))
                .sum::<f64>()
                / n;
            0.5 * reg * w.dot(w) + hinge
        };
        let mut best = (objective(&w, b), w.clone(), b);
        for t in 1..=params.epochs {
            let margins = x.dot(&w);
            let mut gw = &w * reg;
            let mut gb = 0.0;
            for (i, (&m, &s)) in margins.iter().zip(&sign).enumerate() {
                if s * (m + b) < 1.0 {
                    gw.scaled_add(-s / n, &x.row(i));
                    gb -= s / n;
                }
            }
            let eta = params.lr / (t as f64).sqrt();
            w.scaled_add(-eta, &gw);
            b -= eta * gb;
            let obj = objective(&w, b);
            if obj < best.0 {
                best = (obj, w.clone(), b);
            }
        }
        LinearSvm { w: best.1, b: best.2 }
    }

    /// Signed margin `w·x + b`.
    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        (x.dot(&self.w) + self.b).to_vec()
    }
}
