//! The three analysis sweeps: SR vs AUC over topology pairs, AUC over the
//! dynamic restraint strength λ, and AUC over generator size.

use rgan_core::gan::{GanConfig, LossKind, Restraint};
use rgan_core::topology::TopologyPattern;
use rgan_core::LabeledDataset;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiment::plan;
use crate::method::Method;
use crate::results::{Provenance, ResultTable};
use crate::runner::{self, Augmentation, Observer, RunOutput, Variant};
use crate::stats::{mean, spearman};

fn trained_variant(
    label: String,
    pattern: TopologyPattern,
    cfg: &ExperimentConfig,
    config: GanConfig,
    seed_key: String,
) -> Variant {
    Variant {
        label,
        augmentation: Augmentation::Gan {
            pattern,
            base_hidden: cfg.gan.base_hidden.clone(),
            g_scale: 1.0,
            config,
        },
        seed_key,
        measure_sr: false,
    }
}

fn execute(
    cfg: &ExperimentConfig,
    datasets: &[(String, LabeledDataset)],
    variants: &[Variant],
    observer: &dyn Observer,
) -> Result<RunOutput> {
    cfg.validate()?;
    let classifiers = cfg.classifier_kinds()?;
    runner::run(&plan(cfg, datasets, variants, &classifiers, None), observer)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrPoint {
    pub dataset: String,
    pub pattern: String,
    pub seed: u64,
    /// SR of the trained pair, averaged over folds.
    pub sr: f64,
    /// AUC averaged over folds and classifiers.
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrCorrelation {
    pub dataset: String,
    /// `None` for the correlation of seed-averaged points.
    pub seed: Option<u64>,
    /// Spearman ρ(SR, AUC); absent with fewer than two patterns.
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrSweep {
    pub points: Vec<SrPoint>,
    pub correlations: Vec<SrCorrelation>,
}

fn sr_correlation(points: &[&SrPoint]) -> Option<f64> {
    let sr: Vec<f64> = points.iter().map(|p| p.sr).collect();
    let auc: Vec<f64> = points.iter().map(|p| p.auc).collect();
    spearman(&sr, &auc)
}

/// Train a statically restrained WGAN for every pattern, measure SR on the
/// trained pair and the augmentation AUC, and correlate the two.
pub fn sr_sweep(
    cfg: &ExperimentConfig,
    datasets: &[(String, LabeledDataset)],
    patterns: &[TopologyPattern],
    observer: &dyn Observer,
) -> Result<SrSweep> {
    if patterns.is_empty() {
        return Err(Error::config("SR sweep needs at least one topology pattern"));
    }
    let variants: Vec<Variant> = patterns
        .iter()
        .map(|p| {
            let config = GanConfig {
                loss: LossKind::Wasserstein,
                restraint: Restraint::Static(p.clone()),
                ..cfg.gan.train.clone()
            };
            let key = Method::from_pattern(p).map_or_else(|| p.to_string(), |m| m.gan_seed_key().to_owned());
            Variant {
                measure_sr: true,
                ..trained_variant(p.to_string(), p.clone(), cfg, config, key)
            }
        })
        .collect();
    let out = execute(cfg, datasets, &variants, observer)?;

    let mut points = Vec::new();
    for (name, _) in datasets {
        for &seed in &cfg.seeds {
            for v in &variants {
                let srs: Vec<f64> = out
                    .gans
                    .iter()
                    .filter(|g| g.dataset == *name && g.seed == seed && g.method == v.label)
                    .filter_map(|g| g.sr)
                    .collect();
                let aucs: Vec<f64> = out
                    .folds
                    .iter()
                    .filter(|r| r.dataset == *name && r.seed == seed && r.method == v.label)
                    .map(|r| r.auc)
                    .collect();
                points.push(SrPoint {
                    dataset: name.clone(),
                    pattern: v.label.clone(),
                    seed,
                    sr: mean(&srs),
                    auc: mean(&aucs),
                });
            }
        }
    }

    let mut correlations = Vec::new();
    for (name, _) in datasets {
        for &seed in &cfg.seeds {
            let pts: Vec<&SrPoint> = points.iter().filter(|p| p.dataset == *name && p.seed == seed).collect();
            correlations.push(SrCorrelation {
                dataset: name.clone(),
                seed: Some(seed),
                rho: sr_correlation(&pts),
            });
        }
        let averaged: Vec<SrPoint> = variants
            .iter()
            .map(|v| {
                let pts: Vec<&SrPoint> = points
                    .iter()
                    .filter(|p| p.dataset == *name && p.pattern == v.label)
                    .collect();
                SrPoint {
                    dataset: name.clone(),
                    pattern: v.label.clone(),
                    seed: 0,
                    sr: mean(&pts.iter().map(|p| p.sr).collect::<Vec<_>>()),
                    auc: mean(&pts.iter().map(|p| p.auc).collect::<Vec<_>>()),
                }
            })
            .collect();
        correlations.push(SrCorrelation {
            dataset: name.clone(),
            seed: None,
            rho: sr_correlation(&averaged.iter().collect::<Vec<_>>()),
        });
    }
    Ok(SrSweep { points, correlations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPoint {
    pub dataset: String,
    pub lambda: f64,
    pub classifier: String,
    pub seed: u64,
    /// AUC averaged over folds.
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSweep {
    pub points: Vec<LambdaPoint>,
}

impl LambdaSweep {
    /// `(λ, AUC)` pairs for one curve, in grid order.
    pub fn curve(&self, dataset: &str, classifier: &str, seed: u64) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.dataset == dataset && p.classifier == classifier && p.seed == seed)
            .map(|p| (p.lambda, p.auc))
            .collect()
    }
}

pub fn lambda_label(lambda: f64) -> String {
    format!("wgan_star(lambda={lambda})")
}

/// Run the dynamically restrained WGAN once per λ with α fixed at
/// `cfg.gan.alpha`. Every λ shares the plain WGAN's random streams.
pub fn lambda_sweep(
    cfg: &ExperimentConfig,
    datasets: &[(String, LabeledDataset)],
    grid: &[f64],
    observer: &dyn Observer,
) -> Result<LambdaSweep> {
    if grid.is_empty() {
        return Err(Error::config("λ grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|l| !(**l >= 0.0)) {
        return Err(Error::config(format!("λ must be >= 0, got {bad}")));
    }
    let pattern = cfg.gan.unrestrained_pattern();
    let variants: Vec<Variant> = grid
        .iter()
        .map(|&lambda| {
            let config = GanConfig {
                loss: LossKind::Wasserstein,
                restraint: Restraint::Dynamic {
                    alpha: cfg.gan.alpha,
                    lambda,
                },
                ..cfg.gan.train.clone()
            };
            trained_variant(
                lambda_label(lambda),
                pattern.clone(),
                cfg,
                config,
                Method::WganStar.gan_seed_key().to_owned(),
            )
        })
        .collect();
    let out = execute(cfg, datasets, &variants, observer)?;
    let mut points = Vec::new();
    for (name, _) in datasets {
        for classifier in &cfg.classifiers {
            for &seed in &cfg.seeds {
                for (v, &lambda) in variants.iter().zip(grid) {
                    let aucs: Vec<f64> = out
                        .folds
                        .iter()
                        .filter(|r| {
                            r.dataset == *name && r.classifier == *classifier && r.seed == seed && r.method == v.label
                        })
                        .map(|r| r.auc)
                        .collect();
                    points.push(LambdaPoint {
                        dataset: name.clone(),
                        lambda,
                        classifier: classifier.clone(),
                        seed,
                        auc: mean(&aucs),
                    });
                }
            }
        }
    }
    Ok(LambdaSweep { points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofRow {
    pub dataset: String,
    pub method: Method,
    pub factor: f64,
    /// Generator parameter count at this scale.
    pub g_params: usize,
    pub classifier: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofSweep {
    pub rows: Vec<DofRow>,
    /// Cells labelled `<method>@<factor>`.
    pub table: ResultTable,
}

pub fn dof_label(method: Method, factor: f64) -> String {
    format!("{}@{factor}", method.name())
}

/// Rerun the unrestrained GAN and WGAN (those listed in `cfg.methods`, or
/// both if neither is) with generator hidden widths scaled by each factor.
/// The discriminator is left unchanged and the random streams are those of
/// the unscaled method.
pub fn dof_sweep(
    cfg: &ExperimentConfig,
    datasets: &[(String, LabeledDataset)],
    factors: &[f64],
    observer: &dyn Observer,
) -> Result<DofSweep> {
    if factors.is_empty() {
        return Err(Error::config("scale factor list is empty"));
    }
    if let Some(bad) = factors.iter().find(|f| !(**f > 0.0)) {
        return Err(Error::config(format!("scale factors must be > 0, got {bad}")));
    }
    let mut methods: Vec<Method> = cfg
        .methods
        .iter()
        .copied()
        .filter(|m| matches!(m, Method::Gan | Method::Wgan))
        .collect();
    if methods.is_empty() {
        methods = vec![Method::Gan, Method::Wgan];
    }
    let mut variants = Vec::new();
    let mut keys = Vec::new();
    for &m in &methods {
        for &factor in factors {
            let mut v = crate::experiment::variant_for(m, &cfg.gan, cfg.smote_k);
            v.label = dof_label(m, factor);
            if let Augmentation::Gan { g_scale, .. } = &mut v.augmentation {
                *g_scale = factor;
            }
            variants.push(v);
            keys.push((m, factor));
        }
    }
    let out = execute(cfg, datasets, &variants, observer)?;
    let table = ResultTable::from_records(
        &out.folds,
        Provenance {
            config_hash: cfg.hash(),
            seeds: cfg.seeds.clone(),
        },
    );
    let mut rows = Vec::new();
    for (name, _) in datasets {
        for (v, &(method, factor)) in variants.iter().zip(&keys) {
            let g_params = out
                .gans
                .iter()
                .find(|g| g.dataset == *name && g.method == v.label)
                .map_or(0, |g| g.g_params);
            for classifier in &cfg.classifiers {
                if let Some(c) = table.get(name, classifier, &v.label) {
                    rows.push(DofRow {
                        dataset: name.clone(),
                        method,
                        factor,
                        g_params,
                        classifier: classifier.clone(),
                        mean: c.mean,
                        std: c.std,
                    });
                }
            }
        }
    }
    Ok(DofSweep { rows, table })
}
