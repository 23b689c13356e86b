//! Minimal dense feed-forward networks.
//!
//! Weights are stored per layer as `(fan_out, fan_in)` matrices and batches as
//! `(batch, features)` matrices, so a layer computes `x · Wᵀ + b`.
//! Hidden layers may be trained with inverted dropout; the output layer never
//! is.

use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub const LEAKY_RELU_SLOPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    LeakyRelu,
    Tanh,
    Sigmoid,
    Linear,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::LeakyRelu => {
                if z > 0.0 {
                    z
                } else {
                    LEAKY_RELU_SLOPE * z
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => sigmoid(z),
            Activation::Linear => z,
        }
    }

    /// Derivative with respect to the pre-activation `z`.
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAKY_RELU_SLOPE
                }
            }
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            Activation::Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
            Activation::Linear => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub width: usize,
    pub activation: Activation,
}

/// Shape of a dense network: input width, hidden layers, output layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden: Vec<LayerSpec>,
    pub output_dim: usize,
    pub output_activation: Activation,
}

impl NetworkSpec {
    /// A spec whose hidden layers all share one activation.
    pub fn mlp(
        input_dim: usize,
        hidden_widths: &[usize],
        hidden_activation: Activation,
        output_dim: usize,
        output_activation: Activation,
    ) -> Self {
        NetworkSpec {
            input_dim,
            hidden: hidden_widths
                .iter()
                .map(|&width| LayerSpec {
                    width,
                    activation: hidden_activation,
                })
                .collect(),
            output_dim,
            output_activation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::Spec("input_dim must be >= 1".into()));
        }
        if self.output_dim == 0 {
            return Err(Error::Spec("output_dim must be >= 1".into()));
        }
        if let Some(i) = self.hidden.iter().position(|l| l.width == 0) {
            return Err(Error::Spec(format!("hidden layer {i} has width 0")));
        }
        Ok(())
    }

    pub fn hidden_widths(&self) -> Vec<usize> {
        self.hidden.iter().map(|l| l.width).collect()
    }

    /// `(fan_in, fan_out, activation)` for every parameterised layer.
    pub fn layers(&self) -> Vec<(usize, usize, Activation)> {
        let mut out = Vec::with_capacity(self.hidden.len() + 1);
        let mut fan_in = self.input_dim;
        for l in &self.hidden {
            out.push((fan_in, l.width, l.activation));
            fan_in = l.width;
        }
        out.push((fan_in, self.output_dim, self.output_activation));
        out
    }

    /// Σ (fan_in + 1) · fan_out over consecutive layer pairs.
    pub fn param_count(&self) -> usize {
        self.layers()
            .iter()
            .map(|&(fan_in, fan_out, _)| (fan_in + 1) * fan_out)
            .sum()
    }
}

/// Dropout applied to hidden layers during a training-mode forward pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dropout {
    pub rate: f64,
    pub seed: u64,
}

/// Activations recorded by [`Network::forward`], consumed by
/// [`Network::backward`] and by layer-similarity probes.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    input: Array2<f64>,
    pre: Vec<Array2<f64>>,
    post: Vec<Array2<f64>>,
    masks: Vec<Option<Array2<f64>>>,
}

impl ForwardTrace {
    /// Post-activation (post-dropout) output of every layer, hidden first.
    pub fn layers(&self) -> &[Array2<f64>] {
        &self.post
    }

    pub fn layer(&self, i: usize) -> &Array2<f64> {
        &self.post[i]
    }

    pub fn output(&self) -> &Array2<f64> {
        self.post.last().expect("a network has at least one layer")
    }

    pub fn into_output(mut self) -> Array2<f64> {
        self.post.pop().expect("a network has at least one layer")
    }

    pub fn mask(&self, i: usize) -> Option<&Array2<f64>> {
        self.masks[i].as_ref()
    }
}

/// Per-parameter gradients, shaped like the network's weights and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

impl Gradients {
    pub fn zeros_like(net: &Network) -> Self {
        Gradients {
            weights: net.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            biases: net.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.weights
            .iter()
            .flat_map(|w| w.iter())
            .chain(self.biases.iter().flat_map(|b| b.iter()))
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone)]
pub struct Backprop {
    pub grads: Gradients,
    /// Gradient with respect to the network input, `(batch, input_dim)`.
    pub input: Array2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    spec: NetworkSpec,
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
    seed: u64,
}

impl Network {
    /// Xavier-uniform weights, zero biases.
    pub fn new(spec: NetworkSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = seed::rng(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for (fan_in, fan_out, _) in spec.layers() {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push(Array2::from_shape_simple_fn((fan_out, fan_in), || {
                rng.gen_range(-limit..=limit)
            }));
            biases.push(Array1::zeros(fan_out));
        }
        Ok(Network {
            spec,
            weights,
            biases,
            seed,
        })
    }

    /// All parameters zero.
    pub fn zeros(spec: NetworkSpec) -> Result<Self> {
        spec.validate()?;
        let (weights, biases) = spec
            .layers()
            .into_iter()
            .map(|(fan_in, fan_out, _)| (Array2::zeros((fan_out, fan_in)), Array1::zeros(fan_out)))
            .unzip();
        Ok(Network {
            spec,
            weights,
            biases,
            seed: 0,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.spec.output_dim
    }

    pub fn num_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Array2<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<f64>] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Array1<f64>] {
        &mut self.biases
    }

    /// Replace the output activation, keeping all parameters.
    pub fn set_output_activation(&mut self, activation: Activation) {
        self.spec.output_activation = activation;
    }

    /// Number of stored scalars, counted by scanning the parameter arrays.
    pub fn stored_param_count(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>() + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    pub fn max_abs_param(&self) -> f64 {
        self.weights
            .iter()
            .flat_map(|w| w.iter())
            .chain(self.biases.iter().flat_map(|b| b.iter()))
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Forward pass. With `dropout` set and a positive rate, each hidden unit
    /// is zeroed with probability `rate` and survivors are scaled by
    /// `1 / (1 - rate)`.
    pub fn forward(&self, x: ArrayView2<f64>, dropout: Option<Dropout>) -> Result<ForwardTrace> {
        if x.ncols() != self.spec.input_dim {
            return Err(Error::shape(format!(
                "batch has {} columns, network expects {}",
                x.ncols(),
                self.spec.input_dim
            )));
        }
        let dropout = match dropout {
            Some(d) if !(0.0..1.0).contains(&d.rate) => {
                return Err(Error::arg(format!("dropout rate {} outside [0, 1)", d.rate)))
            }
            Some(d) if d.rate > 0.0 => Some(d),
            _ => None,
        };
        let mut mask_rng = dropout.map(|d| seed::rng(d.seed));
        let n_layers = self.weights.len();
        let mut pre = Vec::with_capacity(n_layers);
        let mut post: Vec<Array2<f64>> = Vec::with_capacity(n_layers);
        let mut masks = Vec::with_capacity(n_layers);
        let activations = self.spec.layers();

        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = if l == 0 { x.dot(&w.t()) } else { post[l - 1].dot(&w.t()) };
            z += b;
            let act = activations[l].2;
            let mut a = z.mapv(|v| act.apply(v));
            let is_hidden = l + 1 < n_layers;
            let mask =
                match (&mut mask_rng, dropout) {
                    (Some(rng), Some(d)) if is_hidden => {
                        let keep = 1.0 / (1.0 - d.rate);
                        let m = Array2::from_shape_simple_fn(a.raw_dim(), || {
                            if rng.gen::<f64>() < d.rate {
                                0.0
                            } else {
                                keep
                            }
                        });
                        a *= &m;
                        Some(m)
                    }
                    _ => None,
                };
            pre.push(z);
            post.push(a);
            masks.push(mask);
        }
        Ok(ForwardTrace {
            input: x.to_owned(),
            pre,
            post,
            masks,
        })
    }

    /// Eval-mode output.
    pub fn predict(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        Ok(self.forward(x, None)?.into_output())
    }

    /// Reverse-mode gradients of the scalar whose gradient with respect to the
    /// network output is `output_grad`. Dropout masks in `trace` are honoured.
    pub fn backward(&self, trace: &ForwardTrace, output_grad: ArrayView2<f64>) -> Result<Backprop> {
        if trace.post.len() != self.weights.len() {
            return Err(Error::shape(format!(
                "trace has {} layers, network has {}",
                trace.post.len(),
                self.weights.len()
            )));
        }
        for (l, (p, w)) in trace.pre.iter().zip(&self.weights).enumerate() {
            if p.ncols() != w.nrows() {
                return Err(Error::shape(format!("trace layer {l} width does not match network")));
            }
        }
        if output_grad.dim() != trace.output().dim() {
            return Err(Error::shape(format!(
                "output gradient is {:?}, trace output is {:?}",
                output_grad.dim(),
                trace.output().dim()
            )));
        }
        let activations = self.spec.layers();
        let n_layers = self.weights.len();
        let mut gw = vec![Array2::zeros((0, 0)); n_layers];
        let mut gb = vec![Array1::zeros(0); n_layers];
        let mut delta = output_grad.to_owned();
        for l in (0..n_layers).rev() {
            if let Some(m) = &trace.masks[l] {
                delta *= m;
            }
            let act = activations[l].2;
            Zip::from(&mut delta)
                .and(&trace.pre[l])
                .for_each(|d, &z| *d *= act.derivative(z));
            let input = if l == 0 { &trace.input } else { &trace.post[l - 1] };
            gw[l] = delta.t().dot(input);
            gb[l] = delta.sum_axis(Axis(0));
            delta = delta.dot(&self.weights[l]);
        }
        Ok(Backprop {
            grads: Gradients {
                weights: gw,
                biases: gb,
            },
            input: delta,
        })
    }

    /// Clamp every weight and bias into `[-c, c]`.
    pub fn clip_weights(&mut self, c: f64) -> Result<()> {
        if !(c > 0.0) {
            return Err(Error::arg(format!("clip constant must be > 0, got {c}")));
        }
        for w in &mut self.weights {
            w.mapv_inplace(|v| v.clamp(-c, c));
        }
        for b in &mut self.biases {
            b.mapv_inplace(|v| v.clamp(-c, c));
        }
        Ok(())
    }

    fn check_grads(&self, grads: &Gradients) -> Result<()> {
        let ok = grads.weights.len() == self.weights.len()
            && grads.biases.len() == self.biases.len()
            && grads.weights.iter().zip(&self.weights).all(|(g, w)| g.dim() == w.dim())
            && grads.biases.iter().zip(&self.biases).all(|(g, b)| g.dim() == b.dim());
        if ok {
            Ok(())
        } else {
            Err(Error::shape("gradients do not match network parameters"))
        }
    }

    /// Plain gradient descent step.
    pub fn sgd_step(&mut self, grads: &Gradients, lr: f64) -> Result<()> {
        self.check_grads(grads)?;
        for (w, g) in self.weights.iter_mut().zip(&grads.weights) {
            w.scaled_add(-lr, g);
        }
        for (b, g) in self.biases.iter_mut().zip(&grads.biases) {
            b.scaled_add(-lr, g);
        }
        Ok(())
    }
}

/// RMSProp accumulator: `s ← ρ·s + (1-ρ)·g²`, `θ ← θ - lr·g / √(s + ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RmsProp {
    pub lr: f64,
    pub decay: f64,
    pub eps: f64,
    sq_weights: Vec<Array2<f64>>,
    sq_biases: Vec<Array1<f64>>,
}

impl RmsProp {
    pub const DEFAULT_LR: f64 = 5e-5;
    pub const DEFAULT_DECAY: f64 = 0.9;
    pub const DEFAULT_EPS: f64 = 1e-8;

    pub fn new(net: &Network, lr: f64) -> Self {
        Self::with_params(net, lr, Self::DEFAULT_DECAY, Self::DEFAULT_EPS)
    }

    pub fn with_params(net: &Network, lr: f64, decay: f64, eps: f64) -> Self {
        let zeros = Gradients::zeros_like(net);
        RmsProp {
            lr,
            decay,
            eps,
            sq_weights: zeros.weights,
            sq_biases: zeros.biases,
        }
    }

    pub fn step(&mut self, net: &mut Network, grads: &Gradients) -> Result<()> {
        net.check_grads(grads)?;
        if self.sq_weights.len() != grads.weights.len()
            || self
                .sq_weights
                .iter()
                .zip(&grads.weights)
                .any(|(s, g)| s.dim() != g.dim())
        {
            return Err(Error::shape("optimizer state does not match network"));
        }
        let (lr, decay, eps) = (self.lr, self.decay, self.eps);
        for ((w, g), s) in net.weights.iter_mut().zip(&grads.weights).zip(&mut self.sq_weights) {
            Zip::from(w).and(g).and(s).for_each(|w, &g, s| {
                *s = decay * *s + (1.0 - decay) * g * g;
                *w -= lr * g / (*s + eps).sqrt();
            });
        }
        for ((b, g), s) in net.biases.iter_mut().zip(&grads.biases).zip(&mut self.sq_biases) {
            Zip::from(b).and(g).and(s).for_each(|b, &g, s| {
                *s = decay * *s + (1.0 - decay) * g * g;
                *b -= lr * g / (*s + eps).sqrt();
            });
        }
        Ok(())
    }
}

/// Optimizer choice for a training loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    RmsProp,
}

#[derive(Debug, Clone)]
pub enum Optimizer {
    Sgd { lr: f64 },
    RmsProp(RmsProp),
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, net: &Network, lr: f64) -> Self {
        match kind {
            OptimizerKind::Sgd => Optimizer::Sgd { lr },
            OptimizerKind::RmsProp => Optimizer::RmsProp(RmsProp::new(net, lr)),
        }
    }

    pub fn step(&mut self, net: &mut Network, grads: &Gradients) -> Result<()> {
        match self {
            Optimizer::Sgd { lr } => net.sgd_step(grads, *lr),
            Optimizer::RmsProp(r) => r.step(net, grads),
        }
    }
}
