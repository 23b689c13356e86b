use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nn::{sigmoid, Activation, Network, NetworkSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnParams {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub lr: f64,
}

impl Default for AnnParams {
    fn default() -> Self {
        AnnParams {
            hidden: vec![32],
            epochs: 200,
            lr: 0.1,
        }
    }
}

/// ReLU MLP with a sigmoid output, trained by full-batch gradient descent on
/// binary cross-entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct Ann {
    net: Network,
}

impl Ann {
    pub fn untrained(n_features: usize, params: &AnnParams, seed: u64) -> Result<Self> {
        // The sigmoid is applied outside the network so the cross-entropy
        // gradient is the plain residual.
        let spec = NetworkSpec::mlp(n_features, &params.hidden, Activation::Relu, 1, Activation::Linear);
        Ok(Ann {
            net: Network::new(spec, seed)?,
        })
    }

    pub fn fit(x: ArrayView2<f64>, y: &[f64], params: &AnnParams, seed: u64) -> Result<Self> {
        let mut model = Self::untrained(x.ncols(), params, seed)?;
        let n = x.nrows() as f64;
        let target = Array2::from_shape_vec((y.len(), 1), y.to_vec()).expect("one target per row");
        for _ in 0..params.epochs {
            let trace = model.net.forward(x, None)?;
            let grad = (trace.output().mapv(sigmoid) - &target) / n;
            let bp = model.net.backward(&trace, grad.view())?;
            model.net.sgd_step(&bp.grads, params.lr)?;
        }
        Ok(model)
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Result<Vec<f64>> {
        Ok(self.net.predict(x)?.column(0).mapv(sigmoid).to_vec())
    }
}
