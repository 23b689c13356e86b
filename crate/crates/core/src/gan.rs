//! Adversarial training of a generator/discriminator pair.
//!
//! Two loss families are supported:
//!
//! - vanilla: the discriminator minimises `-mean(log D(x)) - mean(log(1 - D(G(z))))`
//!   and the generator the non-saturating `-mean(log D(G(z)))`;
//! - Wasserstein: the critic minimises `mean(f(G(z))) - mean(f(x))` with
//!   weight clipping after every update, the generator `-mean(f(G(z)))`.
//!
//! Restraints never add a gradient term. A static restraint is just the
//! topology pair handed to [`train_gan`]; a dynamic restraint sets the
//! generator's hidden-layer dropout rate from KMMD feedback between
//! iterations.

use std::fmt::Write as _;
use std::io;

use ndarray::{concatenate, Array2, ArrayView2, Axis};
use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{Activation, Dropout, Network, Optimizer, OptimizerKind, RmsProp};
use crate::restraint::{kmmd, KmmdConfig, RestraintState};
use crate::seed::{self, Rng};
use crate::topology::{self, ProbeSet, TopologyPair, TopologyPattern};

/// Scores are clamped into `[ε, 1 - ε]` before taking logs.
pub const SCORE_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Vanilla,
    Wasserstein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Restraint {
    #[default]
    None,
    Static(TopologyPattern),
    Dynamic {
        alpha: f64,
        lambda: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GanConfig {
    pub loss: LossKind,
    /// Defaults to the feature dimension when unset.
    pub noise_dim: Option<usize>,
    /// Capped at the number of training rows.
    pub batch_size: usize,
    pub iterations: usize,
    pub critic_steps: usize,
    pub clip_c: f64,
    pub lr_g: f64,
    pub lr_d: f64,
    pub optimizer: OptimizerKind,
    pub restraint: Restraint,
    /// Batch size for the per-iteration KMMD of dynamic restraint.
    pub kmmd_batch: usize,
    pub kmmd: KmmdConfig,
    /// Log KMMD every n generator steps even without dynamic restraint.
    pub kmmd_every: Option<usize>,
    /// Log SR every n generator steps.
    pub sr_every: Option<usize>,
    pub sr_probes: usize,
    pub seed: u64,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self::wasserstein()
    }
}

impl GanConfig {
    pub fn wasserstein() -> Self {
        GanConfig {
            loss: LossKind::Wasserstein,
            noise_dim: None,
            batch_size: 64,
            iterations: 3000,
            critic_steps: 5,
            clip_c: 0.01,
            lr_g: RmsProp::DEFAULT_LR,
            lr_d: RmsProp::DEFAULT_LR,
            optimizer: OptimizerKind::RmsProp,
            restraint: Restraint::None,
            kmmd_batch: 256,
            kmmd: KmmdConfig::default(),
            kmmd_every: None,
            sr_every: None,
            sr_probes: topology::DEFAULT_PROBE_COUNT,
            seed: 0,
        }
    }

    pub fn vanilla() -> Self {
        GanConfig {
            loss: LossKind::Vanilla,
            critic_steps: 1,
            ..Self::wasserstein()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.critic_steps == 0 || self.kmmd_batch == 0 {
            return Err(Error::arg("batch_size, critic_steps and kmmd_batch must be >= 1"));
        }
        if self.noise_dim == Some(0) {
            return Err(Error::arg("noise_dim must be >= 1"));
        }
        if self.loss == LossKind::Wasserstein && !(self.clip_c > 0.0) {
            return Err(Error::arg("clip_c must be > 0"));
        }
        if !(self.lr_g > 0.0) || !(self.lr_d > 0.0) {
            return Err(Error::arg("learning rates must be > 0"));
        }
        if let Restraint::Dynamic { alpha, lambda } = self.restraint {
            if !(alpha >= 0.0) || !(lambda >= 0.0) {
                return Err(Error::arg("alpha and lambda must be >= 0"));
            }
        }
        if self.sr_every == Some(0) || self.kmmd_every == Some(0) {
            return Err(Error::arg("logging intervals must be >= 1"));
        }
        if self.sr_every.is_some() && self.sr_probes < 2 {
            return Err(Error::arg("SR logging needs at least 2 probes"));
        }
        Ok(())
    }
}

fn check_scores(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        Err(Error::arg("score vector is empty"))
    } else {
        Ok(())
    }
}

fn clamp_score(p: f64) -> f64 {
    p.clamp(SCORE_EPS, 1.0 - SCORE_EPS)
}

fn mean(a: &[f64]) -> f64 {
    a.iter().sum::<f64>() / a.len() as f64
}

/// `-mean(log d_real) - mean(log(1 - d_fake))`.
pub fn d_loss_vanilla(d_real: &[f64], d_fake: &[f64]) -> Result<f64> {
    check_scores(d_real)?;
    check_scores(d_fake)?;
    let real = d_real.iter().map(|&p| -clamp_score(p).ln()).sum::<f64>() / d_real.len() as f64;
    let fake = d_fake.iter().map(|&p| -(1.0 - clamp_score(p)).ln()).sum::<f64>() / d_fake.len() as f64;
    Ok(real + fake)
}

/// Non-saturating generator loss `-mean(log d_fake)`.
pub fn g_loss_vanilla(d_fake: &[f64]) -> Result<f64> {
    check_scores(d_fake)?;
    Ok(d_fake.iter().map(|&p| -clamp_score(p).ln()).sum::<f64>() / d_fake.len() as f64)
}

/// Negated critic objective: `mean(s_fake) - mean(s_real)`.
pub fn d_loss_wasserstein(s_real: &[f64], s_fake: &[f64]) -> Result<f64> {
    check_scores(s_real)?;
    check_scores(s_fake)?;
    Ok(mean(s_fake) - mean(s_real))
}

/// `-mean(s_fake)`.
pub fn g_loss_wasserstein(s_fake: &[f64]) -> Result<f64> {
    check_scores(s_fake)?;
    Ok(-mean(s_fake))
}

/// Loss value plus its gradient with respect to each score.
fn d_loss_and_grad(loss: LossKind, real: &[f64], fake: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let (nr, nf) = (real.len() as f64, fake.len() as f64);
    match loss {
        LossKind::Vanilla => Ok((
            d_loss_vanilla(real, fake)?,
            real.iter().map(|&p| -1.0 / (nr * clamp_score(p))).collect(),
            fake.iter().map(|&p| 1.0 / (nf * (1.0 - clamp_score(p)))).collect(),
        )),
        LossKind::Wasserstein => Ok((
            d_loss_wasserstein(real, fake)?,
            vec![-1.0 / nr; real.len()],
            vec![1.0 / nf; fake.len()],
        )),
    }
}

fn g_loss_and_grad(loss: LossKind, fake: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = fake.len() as f64;
    match loss {
        LossKind::Vanilla => Ok((
            g_loss_vanilla(fake)?,
            fake.iter().map(|&p| -1.0 / (n * clamp_score(p))).collect(),
        )),
        LossKind::Wasserstein => Ok((g_loss_wasserstein(fake)?, vec![-1.0 / n; fake.len()])),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GanModel {
    pub generator: Network,
    pub discriminator: Network,
}

impl GanModel {
    pub fn noise_dim(&self) -> usize {
        self.generator.input_dim()
    }

    pub fn feature_dim(&self) -> usize {
        self.generator.output_dim()
    }
}

/// Uniform noise on `[-1, 1]^dim`.
pub fn sample_noise(rng: &mut Rng, n: usize, dim: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, dim), || rng.gen_range(-1.0..=1.0))
}

/// `n` generated rows, clamped to the `[0, 1]` feature range.
pub fn generate(model: &GanModel, n: usize, seed: u64) -> Result<Array2<f64>> {
    if n == 0 {
        return Ok(Array2::zeros((0, model.feature_dim())));
    }
    let mut rng = seed::rng(seed);
    let z = sample_noise(&mut rng, n, model.noise_dim());
    Ok(model.generator.predict(z.view())?.mapv(|v| v.clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationRecord {
    pub iter: usize,
    pub d_loss: f64,
    pub g_loss: f64,
    pub kmmd: Option<f64>,
    pub q: Option<f64>,
    pub q_best: Option<f64>,
    /// Dropout rate set for the next iteration's generator passes.
    pub dropout_rate: Option<f64>,
    pub sr: Option<f64>,
}

/// One record per generator update.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    pub records: Vec<IterationRecord>,
}

fn opt_field(out: &mut String, v: Option<f64>) {
    out.push(',');
    if let Some(v) = v {
        let _ = write!(out, "{v}");
    }
}

impl TrainTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `iter,d_loss,g_loss,kmmd,q,dropout_rate`, plus a trailing `sr` column
    /// when any SR snapshot was taken. Absent values are empty fields.
    pub fn to_csv(&self) -> String {
        let with_sr = self.records.iter().any(|r| r.sr.is_some());
        let mut out = String::from("iter,d_loss,g_loss,kmmd,q,dropout_rate");
        if with_sr {
            out.push_str(",sr");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{},{}", r.iter, r.d_loss, r.g_loss);
            opt_field(&mut out, r.kmmd);
            opt_field(&mut out, r.q);
            opt_field(&mut out, r.dropout_rate);
            if with_sr {
                opt_field(&mut out, r.sr);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    pub fn kmmd_series(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.kmmd).collect()
    }
}

/// Observer called after every generator update.
pub trait TrainHook {
    fn on_iteration(&mut self, _record: &IterationRecord, _generator: &Network, _discriminator: &Network) {}
}

impl TrainHook for () {}

fn sample_rows(rng: &mut Rng, data: ArrayView2<f64>, k: usize) -> Array2<f64> {
    let idx = index::sample(rng, data.nrows(), k.min(data.nrows())).into_vec();
    data.select(Axis(0), &idx)
}

/// Train a GAN on `data` (normalised to `[0, 1]`) with the topology in `pair`.
///
/// Each iteration runs `critic_steps` discriminator updates (clipped, for the
/// Wasserstein loss) and one generator update. With a dynamic restraint the
/// KMMD between a fresh generated batch and a real batch is computed after
/// the generator update and turned into the dropout rate used by the
/// generator's training passes in the next iteration. Monitoring draws come
/// from their own random stream, so a restraint whose rate stays 0 leaves the
/// training trajectory untouched.
pub fn train_gan(
    data: ArrayView2<f64>,
    pair: &TopologyPair,
    cfg: &GanConfig,
    hook: &mut dyn TrainHook,
) -> Result<(GanModel, TrainTrace)> {
    cfg.validate()?;
    if data.nrows() == 0 {
        return Err(Error::arg("cannot train a GAN on an empty sample"));
    }
    if pair.feature_dim() != data.ncols() || pair.d_spec.input_dim != data.ncols() {
        return Err(Error::shape(format!(
            "topology expects {} features, data has {}",
            pair.feature_dim(),
            data.ncols()
        )));
    }
    if let Some(nd) = cfg.noise_dim {
        if nd != pair.noise_dim() {
            return Err(Error::shape(format!(
                "config noise_dim {nd} differs from topology noise_dim {}",
                pair.noise_dim()
            )));
        }
    }

    let mut d_spec = pair.d_spec.clone();
    d_spec.output_activation = match cfg.loss {
        LossKind::Vanilla => Activation::Sigmoid,
        LossKind::Wasserstein => Activation::Linear,
    };
    let mut g = Network::new(pair.g_spec.clone(), seed::derive(cfg.seed, "generator"))?;
    let mut d = Network::new(d_spec, seed::derive(cfg.seed, "discriminator"))?;
    if cfg.loss == LossKind::Wasserstein {
        d.clip_weights(cfg.clip_c)?;
    }
    let mut opt_g = Optimizer::new(cfg.optimizer, &g, cfg.lr_g);
    let mut opt_d = Optimizer::new(cfg.optimizer, &d, cfg.lr_d);

    let mut train_rng = seed::rng(seed::derive(cfg.seed, "train"));
    let mut monitor_rng = seed::rng(seed::derive(cfg.seed, "monitor"));
    let dropout_base = seed::derive(cfg.seed, "dropout");
    let mut dropout_calls = 0u64;
    let mut next_dropout = |rate: f64| -> Option<Dropout> {
        dropout_calls += 1;
        (rate > 0.0).then(|| Dropout {
            rate,
            seed: seed::derive(dropout_base, &dropout_calls),
        })
    };

    let mut restraint = match cfg.restraint {
        Restraint::Dynamic { alpha, lambda } => Some(RestraintState::new(alpha, lambda)?),
        _ => None,
    };
    let probes = match cfg.sr_every {
        Some(_) => Some(ProbeSet::sample(
            data,
            pair.noise_dim(),
            cfg.sr_probes,
            seed::derive(cfg.seed, "probe"),
        )?),
        None => None,
    };

    let batch = cfg.batch_size.min(data.nrows());
    let kmmd_batch = cfg.kmmd_batch.min(data.nrows());
    let noise_dim = pair.noise_dim();
    let mut rate = 0.0;
    let mut trace = TrainTrace::default();

    for iter in 0..cfg.iterations {
        let mut d_loss = 0.0;
        for _ in 0..cfg.critic_steps {
            let real = sample_rows(&mut train_rng, data, batch);
            let z = sample_noise(&mut train_rng, batch, noise_dim);
            let fake = g.forward(z.view(), next_dropout(rate))?.into_output();
            let both = concatenate(Axis(0), &[real.view(), fake.view()]).map_err(|e| Error::shape(e.to_string()))?;
            let d_trace = d.forward(both.view(), None)?;
            let scores = d_trace.output().column(0).to_vec();
            let (loss, g_real, g_fake) = d_loss_and_grad(cfg.loss, &scores[..batch], &scores[batch..])?;
            d_loss = loss;
            let out_grad = Array2::from_shape_vec((2 * batch, 1), [g_real, g_fake].concat())
                .map_err(|e| Error::shape(e.to_string()))?;
            let bp = d.backward(&d_trace, out_grad.view())?;
            opt_d.step(&mut d, &bp.grads)?;
            if cfg.loss == LossKind::Wasserstein {
                d.clip_weights(cfg.clip_c)?;
            }
        }

        let z = sample_noise(&mut train_rng, batch, noise_dim);
        let g_trace = g.forward(z.view(), next_dropout(rate))?;
        let d_trace = d.forward(g_trace.output().view(), None)?;
        let scores = d_trace.output().column(0).to_vec();
        let (g_loss, grad) = g_loss_and_grad(cfg.loss, &scores)?;
        let out_grad = Array2::from_shape_vec((batch, 1), grad).map_err(|e| Error::shape(e.to_string()))?;
        let through_d = d.backward(&d_trace, out_grad.view())?;
        let bp = g.backward(&g_trace, through_d.input.view())?;
        opt_g.step(&mut g, &bp.grads)?;

        let mut record = IterationRecord {
            iter,
            d_loss,
            g_loss,
            ..Default::default()
        };
        let log_kmmd = restraint.is_some() || cfg.kmmd_every.is_some_and(|k| (iter + 1) % k == 0);
        if log_kmmd {
            let z = sample_noise(&mut monitor_rng, kmmd_batch, noise_dim);
            let fake = g.predict(z.view())?.mapv(|v| v.clamp(0.0, 1.0));
            let real = sample_rows(&mut monitor_rng, data, kmmd_batch);
            let raw = kmmd(fake.view(), real.view(), &cfg.kmmd)?;
            record.kmmd = Some(raw);
            if let Some(state) = restraint.as_mut() {
                let step = state.step(raw)?;
                rate = step.rate;
                record.q = Some(step.q);
                record.q_best = Some(step.q_best);
                record.dropout_rate = Some(step.rate);
            }
        }
        if let (Some(every), Some(probes)) = (cfg.sr_every, probes.as_ref()) {
            if (iter + 1) % every == 0 {
                record.sr = Some(topology::sr(&g, &d, &pair.layer_matching, probes)?);
            }
        }
        hook.on_iteration(&record, &g, &d);
        trace.records.push(record);
    }

    Ok((
        GanModel {
            generator: g,
            discriminator: d,
        },
        trace,
    ))
}

/// Mean of the first and last `window` entries of a series.
pub fn head_tail_means(series: &[f64], window: usize) -> Option<(f64, f64)> {
    if series.is_empty() || window == 0 {
        return None;
    }
    let w = window.min(series.len());
    let head = series.iter().take(w).sum::<f64>() / w as f64;
    let tail = series[series.len() - w..].iter().sum::<f64>() / w as f64;
    Some((head, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::NetworkSpec;
    use crate::topology::make_pair;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vanilla_discriminator_loss_values() {
        assert_abs_diff_eq!(
            d_loss_vanilla(&[0.5, 0.5], &[0.5, 0.5]).unwrap(),
            2.0 * 2f64.ln(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            d_loss_vanilla(&[0.9], &[0.1]).unwrap(),
            -2.0 * 0.9f64.ln(),
            epsilon = 1e-12
        );
        let near_opt = d_loss_vanilla(&[1.0], &[0.0]).unwrap();
        assert_abs_diff_eq!(near_opt, 2e-7, epsilon = 1e-12);
        assert!(d_loss_vanilla(&[], &[0.5]).is_err());
        assert!(d_loss_vanilla(&[0.5], &[]).is_err());
    }

    #[test]
    fn vanilla_generator_loss_values() {
        assert_abs_diff_eq!(g_loss_vanilla(&[0.5]).unwrap(), 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(g_loss_vanilla(&[0.25, 0.25]).unwrap(), 4f64.ln(), epsilon = 1e-12);
        assert!(g_loss_vanilla(&[1.0]).unwrap() < 1e-6);
        assert!(g_loss_vanilla(&[]).is_err());
    }

    #[test]
    fn wasserstein_loss_values() {
        assert_eq!(d_loss_wasserstein(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), -1.0);
        assert_eq!(d_loss_wasserstein(&[2.0], &[5.0]).unwrap(), 3.0);
        assert_eq!(d_loss_wasserstein(&[0.3, -1.0], &[0.3, -1.0]).unwrap(), 0.0);
        assert_eq!(g_loss_wasserstein(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(g_loss_wasserstein(&[3.0]).unwrap(), -3.0);
        assert!(d_loss_wasserstein(&[], &[1.0]).is_err());
        assert!(g_loss_wasserstein(&[]).is_err());
    }

    #[test]
    fn loss_gradients_match_finite_differences() {
        let real = [0.3, 0.8, 0.6];
        let fake = [0.2, 0.45];
        let h = 1e-6;
        for loss in [LossKind::Vanilla, LossKind::Wasserstein] {
            let (_, gr, gf) = d_loss_and_grad(loss, &real, &fake).unwrap();
            let f = |r: &[f64], f: &[f64]| d_loss_and_grad(loss, r, f).unwrap().0;
            for i in 0..real.len() {
                let (mut up, mut dn) = (real, real);
                up[i] += h;
                dn[i] -= h;
                assert_abs_diff_eq!((f(&up, &fake) - f(&dn, &fake)) / (2.0 * h), gr[i], epsilon = 1e-6);
            }
            for i in 0..fake.len() {
                let (mut up, mut dn) = (fake, fake);
                up[i] += h;
                dn[i] -= h;
                assert_abs_diff_eq!((f(&real, &up) - f(&real, &dn)) / (2.0 * h), gf[i], epsilon = 1e-6);
            }
            let (_, gg) = g_loss_and_grad(loss, &fake).unwrap();
            for i in 0..fake.len() {
                let (mut up, mut dn) = (fake, fake);
                up[i] += h;
                dn[i] -= h;
                let g = |f: &[f64]| g_loss_and_grad(loss, f).unwrap().0;
                assert_abs_diff_eq!((g(&up) - g(&dn)) / (2.0 * h), gg[i], epsilon = 1e-6);
            }
        }
    }

    fn toy(n: usize, d: usize) -> Array2<f64> {
        Array2::from_shape_fn((n, d), |(i, j)| ((i * 31 + j * 17) % 97) as f64 / 97.0)
    }

    #[test]
    fn zero_iterations_returns_initial_model() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[8, 4], 3, 3).unwrap();
        let cfg = GanConfig {
            iterations: 0,
            seed: 5,
            ..GanConfig::wasserstein()
        };
        let (model, trace) = train_gan(toy(20, 3).view(), &pair, &cfg, &mut ()).unwrap();
        assert!(trace.is_empty());
        let g0 = Network::new(pair.g_spec.clone(), seed::derive(5, "generator")).unwrap();
        assert_eq!(model.generator, g0);
    }

    #[test]
    fn trace_has_one_record_per_generator_step_and_clipping_holds() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[8, 4], 3, 3).unwrap();
        let cfg = GanConfig {
            iterations: 7,
            batch_size: 8,
            ..GanConfig::wasserstein()
        };
        struct Check(f64, usize);
        impl TrainHook for Check {
            fn on_iteration(&mut self, _r: &IterationRecord, _g: &Network, d: &Network) {
                assert!(d.max_abs_param() <= self.0);
                self.1 += 1;
            }
        }
        let mut hook = Check(cfg.clip_c, 0);
        let (_, trace) = train_gan(toy(30, 3).view(), &pair, &cfg, &mut hook).unwrap();
        assert_eq!(trace.len(), 7);
        assert_eq!(hook.1, 7);
        assert!(trace.records.iter().all(|r| r.dropout_rate.is_none()));
    }

    #[test]
    fn training_is_deterministic() {
        let pair = make_pair(&TopologyPattern::Axisymmetric, &[6, 4], 4, 4).unwrap();
        let cfg = GanConfig {
            iterations: 10,
            batch_size: 16,
            restraint: Restraint::Dynamic {
                alpha: 0.2,
                lambda: 0.4,
            },
            seed: 9,
            ..GanConfig::wasserstein()
        };
        let a = train_gan(toy(40, 4).view(), &pair, &cfg, &mut ()).unwrap();
        let b = train_gan(toy(40, 4).view(), &pair, &cfg, &mut ()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_strength_dynamic_restraint_matches_unrestrained() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[6, 5], 4, 4).unwrap();
        let base = GanConfig {
            iterations: 15,
            batch_size: 10,
            seed: 2,
            ..GanConfig::wasserstein()
        };
        let dynamic = GanConfig {
            restraint: Restraint::Dynamic {
                alpha: 0.0,
                lambda: 0.0,
            },
            ..base.clone()
        };
        let (m0, t0) = train_gan(toy(30, 4).view(), &pair, &base, &mut ()).unwrap();
        let (m1, t1) = train_gan(toy(30, 4).view(), &pair, &dynamic, &mut ()).unwrap();
        assert_eq!(m0, m1);
        assert!(t1.records.iter().all(|r| r.dropout_rate == Some(0.0)));
        for (a, b) in t0.records.iter().zip(&t1.records) {
            assert_eq!((a.d_loss, a.g_loss), (b.d_loss, b.g_loss));
        }
    }

    #[test]
    fn dynamic_trace_invariants() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[6, 5], 4, 4).unwrap();
        let cfg = GanConfig {
            iterations: 40,
            batch_size: 10,
            lr_g: 5e-3,
            lr_d: 5e-3,
            restraint: Restraint::Dynamic {
                alpha: 0.5,
                lambda: 2.0,
            },
            seed: 4,
            ..GanConfig::wasserstein()
        };
        let (_, trace) = train_gan(toy(30, 4).view(), &pair, &cfg, &mut ()).unwrap();
        let mut prev = 1.0;
        for r in &trace.records {
            let rate = r.dropout_rate.unwrap();
            assert!((0.0..=0.95).contains(&rate));
            let qb = r.q_best.unwrap();
            assert!(qb <= prev);
            prev = qb;
            assert!(r.kmmd.unwrap() >= 0.0);
        }
    }

    #[test]
    fn vanilla_training_runs() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[6], 3, 3).unwrap();
        let cfg = GanConfig {
            iterations: 5,
            batch_size: 8,
            kmmd_every: Some(1),
            sr_every: Some(5),
            sr_probes: 16,
            ..GanConfig::vanilla()
        };
        let (model, trace) = train_gan(toy(20, 3).view(), &pair, &cfg, &mut ()).unwrap();
        assert_eq!(model.discriminator.spec().output_activation, Activation::Sigmoid);
        assert!(trace.records.iter().all(|r| r.kmmd.is_some() && r.d_loss.is_finite()));
        assert!(trace.records[4].sr.is_some() && trace.records[3].sr.is_none());
        let csv = trace.to_csv();
        assert!(csv.starts_with("iter,d_loss,g_loss,kmmd,q,dropout_rate,sr\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn training_errors() {
        let pair = make_pair(&TopologyPattern::Isomorphic, &[6], 3, 3).unwrap();
        let cfg = GanConfig {
            iterations: 1,
            ..GanConfig::wasserstein()
        };
        assert!(train_gan(Array2::zeros((0, 3)).view(), &pair, &cfg, &mut ()).is_err());
        assert!(matches!(
            train_gan(toy(10, 4).view(), &pair, &cfg, &mut ()),
            Err(Error::Shape(_))
        ));
        let bad = GanConfig {
            noise_dim: Some(5),
            ..cfg
        };
        assert!(train_gan(toy(10, 3).view(), &pair, &bad, &mut ()).is_err());
    }

    #[test]
    fn generate_contract() {
        let spec = NetworkSpec::mlp(3, &[4], Activation::LeakyRelu, 2, Activation::Sigmoid);
        let zero = GanModel {
            generator: Network::zeros(spec.clone()).unwrap(),
            discriminator: Network::zeros(NetworkSpec::mlp(2, &[4], Activation::LeakyRelu, 1, Activation::Linear))
                .unwrap(),
        };
        assert_eq!(generate(&zero, 0, 1).unwrap().dim(), (0, 2));
        assert!(generate(&zero, 5, 1).unwrap().iter().all(|&v| v == 0.5));
        let model = GanModel {
            generator: Network::new(spec, 3).unwrap(),
            ..zero
        };
        let a = generate(&model, 10, 7).unwrap();
        assert_eq!(a, generate(&model, 10, 7).unwrap());
        assert_ne!(a, generate(&model, 10, 8).unwrap());
        assert!(a.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn trace_csv_leaves_absent_fields_empty() {
        let trace = TrainTrace {
            records: vec![IterationRecord {
                iter: 0,
                d_loss: -0.5,
                g_loss: 0.25,
                ..Default::default()
            }],
        };
        assert_eq!(
            trace.to_csv(),
            "iter,d_loss,g_loss,kmmd,q,dropout_rate\n0,-0.5,0.25,,,\n"
        );
    }
}
