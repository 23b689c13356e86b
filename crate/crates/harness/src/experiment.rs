use std::path::Path;

use rgan_core::LabeledDataset;

use crate::config::ExperimentConfig;
use crate::data::load_dataset;
use crate::error::Result;
use crate::method::{GanSettings, Method};
use crate::results::{Provenance, ResultTable};
use crate::runner::{self, Augmentation, Observer, RunOutput, RunPlan, Variant};

/// Load every dataset a config names, keyed by schema name.
pub fn load_datasets(cfg: &ExperimentConfig) -> Result<Vec<(String, LabeledDataset)>> {
    cfg.datasets
        .iter()
        .map(|p| load_dataset(p).map(|(schema, ds)| (schema.name, ds)))
        .collect()
}

/// The runner variant that implements `method`.
pub fn variant_for(method: Method, gan: &GanSettings, smote_k: usize) -> Variant {
    let augmentation = match method {
        Method::Original => Augmentation::None,
        Method::Smote => Augmentation::Smote { k: smote_k },
        m => Augmentation::Gan {
            pattern: gan.pattern_for(m).expect("GAN method has a pattern"),
            base_hidden: gan.base_hidden.clone(),
            g_scale: 1.0,
            config: gan.config_for(m).expect("GAN method has a config"),
        },
    };
    Variant {
        label: method.name().to_owned(),
        augmentation,
        seed_key: method.gan_seed_key().to_owned(),
        measure_sr: false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub table: ResultTable,
    pub output: RunOutput,
}

impl Experiment {
    /// The table restricted to one master seed.
    pub fn table_for_seed(&self, seed: u64) -> ResultTable {
        let records: Vec<_> = self.output.folds.iter().filter(|r| r.seed == seed).cloned().collect();
        ResultTable::from_records(
            &records,
            Provenance {
                config_hash: self.table.provenance.config_hash.clone(),
                seeds: vec![seed],
            },
        )
    }
}

pub(crate) fn plan<'a>(
    cfg: &'a ExperimentConfig,
    datasets: &'a [(String, LabeledDataset)],
    variants: &'a [Variant],
    classifiers: &'a [rgan_core::classifiers::ClassifierKind],
    trace_dir: Option<&'a Path>,
) -> RunPlan<'a> {
    RunPlan {
        datasets,
        variants,
        classifiers,
        folds: cfg.folds,
        seeds: &cfg.seeds,
        target_ratio: cfg.target_ratio,
        jobs: cfg.jobs,
        trace_dir,
    }
}

/// Run the `(dataset × classifier × method)` grid on already loaded data.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    datasets: &[(String, LabeledDataset)],
    observer: &dyn Observer,
) -> Result<Experiment> {
    cfg.validate()?;
    let classifiers = cfg.classifier_kinds()?;
    let variants: Vec<Variant> = cfg
        .methods
        .iter()
        .map(|&m| variant_for(m, &cfg.gan, cfg.smote_k))
        .collect();
    let trace_dir = match (&cfg.output, cfg.save_traces) {
        (Some(out), true) => Some(out.join("traces")),
        _ => None,
    };
    let output = runner::run(
        &plan(cfg, datasets, &variants, &classifiers, trace_dir.as_deref()),
        observer,
    )?;
    let table = ResultTable::from_records(
        &output.folds,
        Provenance {
            config_hash: cfg.hash(),
            seeds: cfg.seeds.clone(),
        },
    );
    Ok(Experiment { table, output })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    let datasets = load_datasets(cfg)?;
    run_experiment_with(cfg, &datasets, &())
}
