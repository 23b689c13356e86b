//! Cross-validated evaluation of augmentation variants.
//!
//! One job is a `(dataset, seed, fold, variant)` tuple: it augments the
//! training fold (training a GAN on the fold's minority rows if needed), fits
//! every classifier on the augmented fold and scores the untouched test fold.
//! Jobs are independent and may run in parallel; results come back in job
//! order regardless of scheduling.

use std::fmt;
use std::fs;
use std::path::Path;

use ndarray::Axis;
use rayon::prelude::*;
use rgan_core::augment::{apply_plan, AugmentMethod, AugmentPlan};
use rgan_core::classifiers::{self, auc, ClassifierKind};
use rgan_core::gan::{train_gan, GanConfig, GanModel};
use rgan_core::topology::{self, make_pair, ProbeSet, TopologyPattern};
use rgan_core::{seed, LabeledDataset};

use crate::cv::{kfold_split, Fold};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Augmentation {
    None,
    Smote {
        k: usize,
    },
    Gan {
        pattern: TopologyPattern,
        base_hidden: Vec<usize>,
        /// Generator hidden widths are multiplied by this (rounded up).
        g_scale: f64,
        config: GanConfig,
    },
}

/// One row of a result table: a named augmentation recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub augmentation: Augmentation,
    /// Key the GAN's random stream is derived from.
    pub seed_key: String,
    /// Measure SR on the trained pair.
    pub measure_sr: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JobKey {
    pub dataset: String,
    pub seed: u64,
    pub fold: usize,
    pub variant: String,
}

impl fmt::Display for JobKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dataset={} seed={} fold={} method={}",
            self.dataset, self.seed, self.fold, self.variant
        )
    }
}

/// Instrumentation hooks. Row indices are positions in the full dataset.
pub trait Observer: Sync {
    fn on_fold(&self, _key: &JobKey, _fold: &Fold) {}
    /// Rows handed to the augmentation step.
    fn on_augment(&self, _key: &JobKey, _rows: &[usize]) {}
    /// Rows the GAN is trained on.
    fn on_gan_training(&self, _key: &JobKey, _rows: &[usize]) {}
}

impl Observer for () {}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldRecord {
    pub dataset: String,
    pub method: String,
    pub classifier: String,
    pub seed: u64,
    pub fold: usize,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GanRecord {
    pub dataset: String,
    pub method: String,
    pub seed: u64,
    pub fold: usize,
    pub g_params: usize,
    pub sr: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub folds: Vec<FoldRecord>,
    pub gans: Vec<GanRecord>,
}

pub struct RunPlan<'a> {
    pub datasets: &'a [(String, LabeledDataset)],
    pub variants: &'a [Variant],
    pub classifiers: &'a [ClassifierKind],
    pub folds: usize,
    pub seeds: &'a [u64],
    pub target_ratio: f64,
    /// Worker threads; 0 or 1 runs sequentially.
    pub jobs: usize,
    pub trace_dir: Option<&'a Path>,
}

pub fn fold_seed(master: u64, dataset: &str) -> u64 {
    seed::derive(seed::derive(master, dataset), "folds")
}

fn fold_base(master: u64, dataset: &str, fold: usize) -> u64 {
    seed::derive(seed::derive(seed::derive(master, dataset), "fold"), &fold)
}

/// Seed of a GAN trained for `seed_key` on one fold.
pub fn gan_seed(master: u64, dataset: &str, fold: usize, seed_key: &str) -> u64 {
    seed::derive(seed::derive(fold_base(master, dataset, fold), "gan"), seed_key)
}

/// Seed of a classifier fit on one fold. It does not depend on the method, so
/// every method is scored by identically seeded classifiers.
pub fn classifier_seed(master: u64, dataset: &str, fold: usize, classifier: &str) -> u64 {
    seed::derive(seed::derive(fold_base(master, dataset, fold), "classifier"), classifier)
}

struct Job<'a> {
    key: JobKey,
    master: u64,
    data: &'a LabeledDataset,
    fold: &'a Fold,
    variant: &'a Variant,
}

/// Fails if any test-fold row is among `rows`.
fn guard(path: &'static str, key: &JobKey, rows: &[usize], is_test: &[bool]) -> Result<()> {
    let leaked: Vec<usize> = rows.iter().copied().filter(|&i| is_test[i]).collect();
    if leaked.is_empty() {
        Ok(())
    } else {
        Err(Error::Leak {
            path,
            detail: format!("{key}: rows {leaked:?}"),
        })
    }
}

fn run_job(job: &Job<'_>, plan: &RunPlan<'_>, observer: &dyn Observer) -> Result<(Vec<FoldRecord>, Option<GanRecord>)> {
    let Job {
        key,
        master,
        data,
        fold,
        variant,
    } = job;
    observer.on_fold(key, fold);
    let mut is_test = vec![false; data.n_rows()];
    for &i in &fold.test {
        is_test[i] = true;
    }
    guard("augmentation", key, &fold.train, &is_test)?;
    let train = data.subset(&fold.train)?;
    let test = data.subset(&fold.test)?;

    let mut gan_record = None;
    let model: Option<GanModel> = match &variant.augmentation {
        Augmentation::Gan {
            pattern,
            base_hidden,
            g_scale,
            config,
        } => {
            let rows: Vec<usize> = fold.train.iter().copied().filter(|&i| data.is_minority(i)).collect();
            guard("gan training", key, &rows, &is_test)?;
            observer.on_gan_training(key, &rows);
            let minority = data.features().select(Axis(0), &rows);
            let d = data.n_features();
            let noise_dim = config.noise_dim.unwrap_or(d);
            let pair = make_pair(pattern, base_hidden, d, noise_dim)?.scale_generator(*g_scale)?;
            let cfg = GanConfig {
                seed: gan_seed(*master, &key.dataset, key.fold, &variant.seed_key),
                ..config.clone()
            };
            let (model, trace) = train_gan(minority.view(), &pair, &cfg, &mut ())?;
            if let Some(dir) = plan.trace_dir {
                let path = dir.join(format!(
                    "{}_{}_s{}_f{}.csv",
                    key.dataset, key.variant, key.seed, key.fold
                ));
                fs::write(&path, trace.to_csv()).map_err(|e| Error::io(path, e))?;
            }
            let sr = if variant.measure_sr {
                let probes = ProbeSet::sample(
                    minority.view(),
                    noise_dim,
                    topology::DEFAULT_PROBE_COUNT,
                    seed::derive(*master, "sr_probes"),
                )?;
                Some(topology::sr(
                    &model.generator,
                    &model.discriminator,
                    &pair.layer_matching,
                    &probes,
                )?)
            } else {
                None
            };
            gan_record = Some(GanRecord {
                dataset: key.dataset.clone(),
                method: variant.label.clone(),
                seed: key.seed,
                fold: key.fold,
                g_params: pair.g_spec.param_count(),
                sr,
            });
            Some(model)
        }
        _ => None,
    };

    observer.on_augment(key, &fold.train);
    let method = match (&variant.augmentation, &model) {
        (Augmentation::None, _) => AugmentMethod::None,
        (Augmentation::Smote { k }, _) => AugmentMethod::Smote { k: *k },
        (Augmentation::Gan { .. }, Some(m)) => AugmentMethod::Gan(m),
        (Augmentation::Gan { .. }, None) => unreachable!("GAN variants always train a model"),
    };
    let augment_seed = seed::derive(
        seed::derive(fold_base(*master, &key.dataset, key.fold), "augment"),
        &variant.seed_key[..],
    );
    let augmented = apply_plan(
        &train,
        &AugmentPlan {
            method,
            target_ratio: plan.target_ratio,
            seed: augment_seed,
        },
    )?;

    let test_labels: Vec<u8> = test.minority_targets().iter().map(|&t| t as u8).collect();
    let mut records = Vec::with_capacity(plan.classifiers.len());
    for kind in plan.classifiers {
        let clf_seed = classifier_seed(*master, &key.dataset, key.fold, kind.name());
        let fitted = classifiers::fit(kind, &augmented, clf_seed)?;
        let scores = fitted.predict_scores(test.features().view())?;
        records.push(FoldRecord {
            dataset: key.dataset.clone(),
            method: variant.label.clone(),
            classifier: kind.name().to_owned(),
            seed: key.seed,
            fold: key.fold,
            auc: auc(&scores, &test_labels)?,
        });
    }
    Ok((records, gan_record))
}

/// Evaluate every variant on every dataset, seed and fold.
pub fn run(plan: &RunPlan<'_>, observer: &dyn Observer) -> Result<RunOutput> {
    if plan.classifiers.is_empty() || plan.variants.is_empty() || plan.seeds.is_empty() {
        return Err(Error::config("need at least one classifier, method and seed"));
    }
    if !(plan.target_ratio > 0.0 && plan.target_ratio <= 1.0) {
        return Err(Error::config(format!(
            "target ratio {} outside (0, 1]",
            plan.target_ratio
        )));
    }
    let mut splits = Vec::new();
    for (name, ds) in plan.datasets {
        for &master in plan.seeds {
            splits.push((name, ds, master, kfold_split(ds, plan.folds, fold_seed(master, name))?));
        }
    }
    let jobs: Vec<Job<'_>> = splits
        .iter()
        .flat_map(|(name, ds, master, folds)| {
            folds.iter().enumerate().flat_map(move |(f, fold)| {
                plan.variants.iter().map(move |v| Job {
                    key: JobKey {
                        dataset: name.to_string(),
                        seed: *master,
                        fold: f,
                        variant: v.label.clone(),
                    },
                    master: *master,
                    data: ds,
                    fold,
                    variant: v,
                })
            })
        })
        .collect();
    if let Some(dir) = plan.trace_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }

    let exec = |job: &Job<'_>| {
        log::debug!("running {}", job.key);
        run_job(job, plan, observer).map_err(|e| Error::Cell {
            key: job.key.to_string(),
            source: Box::new(e),
        })
    };
    let results: Vec<_> = if plan.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.jobs)
            .build()
            .map_err(|e| Error::config(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(exec).collect::<Result<Vec<_>>>())?
    } else {
        jobs.iter().map(exec).collect::<Result<Vec<_>>>()?
    };

    let mut out = RunOutput::default();
    for (records, gan) in results {
        out.folds.extend(records);
        out.gans.extend(gan);
    }
    Ok(out)
}
