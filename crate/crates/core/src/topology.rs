//! Static restraint: predefined generator/discriminator topology pairs and
//! the SR similarity metric.
//!
//! SR probes both networks, standardises every hidden node's response over
//! the probe set, and for every discriminator node takes its best correlation
//! with a generator node in the matched layer. SR is the mean of those maxima
//! over all discriminator nodes of all matched layers.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{Activation, Network, NetworkSpec};
use crate::seed;

pub const DEFAULT_PROBE_COUNT: usize = 128;
pub const HIDDEN_ACTIVATION: Activation = Activation::LeakyRelu;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyPattern {
    Isomorphic,
    Axisymmetric,
    SelfSymmetric,
    AxiAndSelfSymmetric,
    Custom { g_hidden: Vec<usize>, d_hidden: Vec<usize> },
}

impl TopologyPattern {
    /// The method name used in result tables for the four named patterns.
    pub fn method_name(&self) -> Option<&'static str> {
        match self {
            TopologyPattern::Isomorphic => Some("IWGAN"),
            TopologyPattern::Axisymmetric => Some("AWGAN"),
            TopologyPattern::SelfSymmetric => Some("SWGAN"),
            TopologyPattern::AxiAndSelfSymmetric => Some("ASWGAN"),
            TopologyPattern::Custom { .. } => None,
        }
    }

    /// Whether `g_hidden`/`d_hidden` satisfy this pattern's structural rule.
    pub fn holds(&self, g_hidden: &[usize], d_hidden: &[usize]) -> bool {
        let reversed: Vec<usize> = g_hidden.iter().rev().copied().collect();
        match self {
            TopologyPattern::Isomorphic => g_hidden == d_hidden,
            TopologyPattern::Axisymmetric => d_hidden == reversed.as_slice(),
            TopologyPattern::SelfSymmetric => is_palindrome(g_hidden) && is_palindrome(d_hidden),
            TopologyPattern::AxiAndSelfSymmetric => {
                d_hidden == reversed.as_slice() && is_palindrome(g_hidden) && is_palindrome(d_hidden)
            }
            TopologyPattern::Custom {
                g_hidden: g,
                d_hidden: d,
            } => g == g_hidden && d == d_hidden,
        }
    }
}

impl fmt::Display for TopologyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyPattern::Isomorphic => f.write_str("isomorphic"),
            TopologyPattern::Axisymmetric => f.write_str("axisymmetric"),
            TopologyPattern::SelfSymmetric => f.write_str("self_symmetric"),
            TopologyPattern::AxiAndSelfSymmetric => f.write_str("axi_and_self_symmetric"),
            TopologyPattern::Custom { g_hidden, d_hidden } => {
                let join = |v: &[usize]| v.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("-");
                write!(f, "custom(g={};d={})", join(g_hidden), join(d_hidden))
            }
        }
    }
}

impl FromStr for TopologyPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isomorphic" => Ok(TopologyPattern::Isomorphic),
            "axisymmetric" => Ok(TopologyPattern::Axisymmetric),
            "self_symmetric" => Ok(TopologyPattern::SelfSymmetric),
            "axi_and_self_symmetric" => Ok(TopologyPattern::AxiAndSelfSymmetric),
            other => parse_custom(other).ok_or_else(|| Error::arg(format!("unknown topology pattern '{other}'"))),
        }
    }
}

/// `custom(g=64-32;d=128)`, the form written by `Display`.
fn parse_custom(s: &str) -> Option<TopologyPattern> {
    let body = s.strip_prefix("custom(")?.strip_suffix(')')?;
    let (g, d) = body.split_once(';')?;
    let widths = |v: &str, key: &str| -> Option<Vec<usize>> {
        v.trim()
            .strip_prefix(key)?
            .split('-')
            .map(|w| w.trim().parse().ok())
            .collect()
    };
    Some(TopologyPattern::Custom {
        g_hidden: widths(g, "g=")?,
        d_hidden: widths(d, "d=")?,
    })
}

fn is_palindrome(v: &[usize]) -> bool {
    v.iter().eq(v.iter().rev())
}

/// `h ++ reverse(h without its last element)`: `[64, 32]` → `[64, 32, 64]`.
pub fn palindrome(h: &[usize]) -> Vec<usize> {
    let mut out = h.to_vec();
    out.extend(h.iter().rev().skip(1));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyPair {
    pub pattern: TopologyPattern,
    /// Generator: `noise_dim → … → feature_dim`, sigmoid output.
    pub g_spec: NetworkSpec,
    /// Discriminator/critic: `feature_dim → … → 1`, linear output.
    pub d_spec: NetworkSpec,
    /// `(generator hidden layer, discriminator hidden layer)` pairs used by SR.
    pub layer_matching: Vec<(usize, usize)>,
}

impl TopologyPair {
    pub fn feature_dim(&self) -> usize {
        self.g_spec.output_dim
    }

    pub fn noise_dim(&self) -> usize {
        self.g_spec.input_dim
    }

    /// Same pair with every generator hidden width scaled by `factor`
    /// (rounded up, at least 1); the discriminator is unchanged.
    pub fn scale_generator(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::arg(format!("scale factor must be > 0, got {factor}")));
        }
        let mut out = self.clone();
        for l in &mut out.g_spec.hidden {
            l.width = ((l.width as f64 * factor).ceil() as usize).max(1);
        }
        Ok(out)
    }
}

/// Build the generator/discriminator specs for `pattern` from a base hidden
/// profile.
pub fn make_pair(
    pattern: &TopologyPattern,
    base_hidden: &[usize],
    feature_dim: usize,
    noise_dim: usize,
) -> Result<TopologyPair> {
    let (g_hidden, d_hidden, mirrored) = match pattern {
        TopologyPattern::Custom { g_hidden, d_hidden } => {
            if g_hidden.is_empty() || d_hidden.is_empty() {
                return Err(Error::arg("custom topology needs nonempty hidden lists"));
            }
            (g_hidden.clone(), d_hidden.clone(), false)
        }
        _ if base_hidden.is_empty() => return Err(Error::arg("base hidden profile is empty")),
        TopologyPattern::Isomorphic => (base_hidden.to_vec(), base_hidden.to_vec(), false),
        TopologyPattern::Axisymmetric => {
            let rev = base_hidden.iter().rev().copied().collect();
            (base_hidden.to_vec(), rev, true)
        }
        TopologyPattern::SelfSymmetric => {
            let p = palindrome(base_hidden);
            (p.clone(), p, false)
        }
        TopologyPattern::AxiAndSelfSymmetric => {
            let p = palindrome(base_hidden);
            let rev = p.iter().rev().copied().collect();
            (p, rev, true)
        }
    };
    if base_hidden.contains(&0) || g_hidden.contains(&0) || d_hidden.contains(&0) {
        return Err(Error::arg("hidden widths must be >= 1"));
    }
    let layer_matching = if mirrored {
        let l = g_hidden.len();
        (0..l).map(|i| (i, l - 1 - i)).collect()
    } else {
        (0..g_hidden.len().min(d_hidden.len())).map(|i| (i, i)).collect()
    };
    let g_spec = NetworkSpec::mlp(
        noise_dim,
        &g_hidden,
        HIDDEN_ACTIVATION,
        feature_dim,
        Activation::Sigmoid,
    );
    let d_spec = NetworkSpec::mlp(feature_dim, &d_hidden, HIDDEN_ACTIVATION, 1, Activation::Linear);
    g_spec.validate()?;
    d_spec.validate()?;
    Ok(TopologyPair {
        pattern: pattern.clone(),
        g_spec,
        d_spec,
        layer_matching,
    })
}

/// Real-sample probes for the discriminator and noise probes for the
/// generator, with equal row counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    pub d_probe: Array2<f64>,
    pub g_probe: Array2<f64>,
}

impl ProbeSet {
    pub fn new(d_probe: Array2<f64>, g_probe: Array2<f64>) -> Result<Self> {
        if d_probe.nrows() != g_probe.nrows() {
            return Err(Error::shape(format!(
                "probe sets have {} and {} rows",
                d_probe.nrows(),
                g_probe.nrows()
            )));
        }
        if d_probe.nrows() < 2 {
            return Err(Error::arg("SR needs at least 2 probes"));
        }
        Ok(ProbeSet { d_probe, g_probe })
    }

    /// `k` real rows sampled with replacement from `real` and `k` uniform
    /// noise rows on `[-1, 1]^noise_dim`.
    pub fn sample(real: ArrayView2<f64>, noise_dim: usize, k: usize, seed: u64) -> Result<Self> {
        if real.nrows() == 0 {
            return Err(Error::arg("cannot probe with an empty sample"));
        }
        let mut rng = seed::rng(seed);
        let idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..real.nrows())).collect();
        let d_probe = real.select(ndarray::Axis(0), &idx);
        let g_probe = Array2::from_shape_simple_fn((k, noise_dim), || rng.gen_range(-1.0..=1.0));
        Self::new(d_probe, g_probe)
    }

    pub fn k(&self) -> usize {
        self.d_probe.nrows()
    }
}

/// Column-standardise a `(k, nodes)` activation matrix. Zero-variance columns
/// come back as `None`.
fn standardize(acts: &Array2<f64>) -> Vec<Option<Vec<f64>>> {
    let k = acts.nrows() as f64;
    acts.columns()
        .into_iter()
        .map(|col| {
            let mean = col.sum() / k;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
            let std = var.sqrt();
            if !(std > 1e-12 * (1.0 + mean.abs())) {
                None
            } else {
                Some(col.iter().map(|v| (v - mean) / std).collect())
            }
        })
        .collect()
}

/// Mean over discriminator nodes of the best signed correlation with a node
/// of the matched generator layer, given per-layer activations.
pub fn sr_from_activations(matched: &[(&Array2<f64>, &Array2<f64>)]) -> Result<f64> {
    let mut total = 0.0;
    let mut nodes = 0usize;
    for (g_acts, d_acts) in matched {
        if g_acts.nrows() != d_acts.nrows() {
            return Err(Error::shape("matched layers were probed with different k"));
        }
        let k = d_acts.nrows();
        if k < 2 {
            return Err(Error::arg("SR needs at least 2 probes"));
        }
        let g_std = standardize(g_acts);
        let d_std = standardize(d_acts);
        for d_node in &d_std {
            let best = match d_node {
                None => 0.0,
                Some(fd) => g_std
                    .iter()
                    .map(|g_node| match g_node {
                        None => 0.0,
                        Some(fg) => {
                            let dot: f64 = fd.iter().zip(fg).map(|(a, b)| a * b).sum();
                            (dot / k as f64).clamp(-1.0, 1.0)
                        }
                    })
                    .fold(f64::NEG_INFINITY, f64::max),
            };
            total += best;
            nodes += 1;
        }
    }
    if nodes == 0 {
        return Err(Error::arg("no matched layers to compare"));
    }
    Ok(total / nodes as f64)
}

/// SR between a trained generator and discriminator.
pub fn sr(g: &Network, d: &Network, matching: &[(usize, usize)], probes: &ProbeSet) -> Result<f64> {
    if probes.k() < 2 {
        return Err(Error::arg("SR needs at least 2 probes"));
    }
    let g_hidden = g.spec().hidden.len();
    let d_hidden = d.spec().hidden.len();
    if let Some(&(gi, di)) = matching.iter().find(|&&(gi, di)| gi >= g_hidden || di >= d_hidden) {
        return Err(Error::arg(format!(
            "matched layer ({gi}, {di}) outside hidden layers ({g_hidden}, {d_hidden})"
        )));
    }
    let g_trace = g.forward(probes.g_probe.view(), None)?;
    let d_trace = d.forward(probes.d_probe.view(), None)?;
    let matched: Vec<_> = matching
        .iter()
        .map(|&(gi, di)| (g_trace.layer(gi), d_trace.layer(di)))
        .collect();
    sr_from_activations(&matched)
}
