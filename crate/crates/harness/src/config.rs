use std::fs;
use std::path::{Path, PathBuf};

use rgan_core::classifiers::ClassifierKind;
use rgan_core::topology::TopologyPattern;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method::{GanSettings, Method};

/// Grids for the three analysis sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub lambda_grid: Vec<f64>,
    pub scale_factors: Vec<f64>,
    /// Topology patterns for the SR sweep, in `TopologyPattern` string form.
    pub sr_patterns: Vec<String>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            lambda_grid: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6],
            scale_factors: vec![0.5, 1.0, 2.0],
            sr_patterns: [
                "isomorphic",
                "axisymmetric",
                "self_symmetric",
                "axi_and_self_symmetric",
                "custom(g=64-32;d=128)",
                "custom(g=64-32;d=16-64)",
            ]
            .map(String::from)
            .to_vec(),
        }
    }
}

impl SweepSettings {
    pub fn patterns(&self) -> Result<Vec<TopologyPattern>> {
        self.sr_patterns
            .iter()
            .map(|p| p.parse().map_err(Error::from))
            .collect()
    }
}

/// An experiment grid read from TOML.
///
/// ```toml
/// datasets = ["data/australian.toml"]
/// methods = ["original", "smote", "wgan", "iwgan", "wgan_star"]
/// classifiers = ["rfc", "knn"]
/// folds = 10
/// seeds = [1, 2, 3]
///
/// [gan.train]
/// iterations = 3000
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Dataset schema files; relative paths resolve against the config file.
    pub datasets: Vec<PathBuf>,
    pub methods: Vec<Method>,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<String>,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Worker threads; 0 or 1 runs sequentially.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_ratio")]
    pub target_ratio: f64,
    #[serde(default = "default_smote_k")]
    pub smote_k: usize,
    /// Write one training trace CSV per GAN run under `<output>/traces`.
    #[serde(default)]
    pub save_traces: bool,
    #[serde(default)]
    pub gan: GanSettings,
    #[serde(default)]
    pub sweep: SweepSettings,
}

fn default_classifiers() -> Vec<String> {
    ClassifierKind::NAMES.map(String::from).to_vec()
}

fn default_folds() -> usize {
    10
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_ratio() -> f64 {
    1.0
}

fn default_smote_k() -> usize {
    rgan_core::augment::DEFAULT_SMOTE_K
}

impl ExperimentConfig {
    /// A config over `datasets` with every other field at its default.
    pub fn new(datasets: Vec<PathBuf>, methods: Vec<Method>) -> Self {
        ExperimentConfig {
            datasets,
            methods,
            classifiers: default_classifiers(),
            folds: default_folds(),
            seeds: default_seeds(),
            jobs: 0,
            output: None,
            target_ratio: default_ratio(),
            smote_k: default_smote_k(),
            save_traces: false,
            gan: GanSettings::default(),
            sweep: SweepSettings::default(),
        }
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|source| Error::Toml {
            path: base_dir.to_path_buf(),
            source,
        })?;
        for d in &mut cfg.datasets {
            if d.is_relative() {
                *d = base_dir.join(&d);
            }
        }
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = base_dir.join(&out);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base).map_err(|e| match e {
            Error::Toml { source, .. } => Error::Toml {
                path: path.to_path_buf(),
                source,
            },
            e => e,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::config(format!("folds must be >= 2, got {}", self.folds)));
        }
        if self.methods.is_empty() {
            return Err(Error::config("methods must be nonempty"));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config("classifiers must be nonempty"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds must be nonempty"));
        }
        if !(self.target_ratio > 0.0 && self.target_ratio <= 1.0) {
            return Err(Error::config(format!(
                "target_ratio {} outside (0, 1]",
                self.target_ratio
            )));
        }
        if self.smote_k == 0 {
            return Err(Error::config("smote_k must be >= 1"));
        }
        self.classifier_kinds()?;
        self.gan.validate()?;
        self.sweep.patterns()?;
        Ok(())
    }

    pub fn classifier_kinds(&self) -> Result<Vec<ClassifierKind>> {
        self.classifiers
            .iter()
            .map(|c| c.parse().map_err(Error::from))
            .collect()
    }

    /// FNV-1a hash of the canonical TOML form, as 16 hex digits.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).unwrap_or_else(|_| format!("{self:?}"));
        let h = text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
        });
        format!("{h:016x}")
    }
}
