//! Score-producing binary classifiers and the AUC they are judged by.
//!
//! Every classifier treats the training set's minority class as positive:
//! a higher score means more minority-like.

mod ann;
mod auc;
mod boosting;
mod forest;
mod knn;
mod svm;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

pub use ann::{Ann, AnnParams};
pub use auc::auc;
pub use boosting::{BoostParams, Boosted};
pub use forest::{Forest, ForestParams};
pub use knn::{Knn, KnnParams};
pub use svm::{LinearSvm, SvmParams};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Ann(AnnParams),
    Svm(SvmParams),
    Knn(KnnParams),
    Rfc(ForestParams),
    Gbc(BoostParams),
}

impl ClassifierKind {
    pub const NAMES: [&'static str; 5] = ["ann", "svm", "knn", "rfc", "gbc"];

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Ann(_) => "ann",
            ClassifierKind::Svm(_) => "svm",
            ClassifierKind::Knn(_) => "knn",
            ClassifierKind::Rfc(_) => "rfc",
            ClassifierKind::Gbc(_) => "gbc",
        }
    }

    /// All five kinds with default hyperparameters.
    pub fn all() -> Vec<ClassifierKind> {
        Self::NAMES.iter().map(|n| n.parse().expect("known name")).collect()
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            ClassifierKind::Ann(p) => !p.hidden.is_empty() && !p.hidden.contains(&0) && p.lr > 0.0,
            ClassifierKind::Svm(p) => p.c > 0.0 && p.lr > 0.0,
            ClassifierKind::Knn(p) => p.k >= 1,
            ClassifierKind::Rfc(p) => p.n_trees >= 1 && p.min_samples_leaf >= 1 && p.max_features != Some(0),
            ClassifierKind::Gbc(p) => p.max_depth >= 1 && p.learning_rate > 0.0 && p.min_samples_leaf >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::arg(format!("hyperparameters out of range for {}", self.name())))
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ann" => Ok(ClassifierKind::Ann(AnnParams::default())),
            "svm" => Ok(ClassifierKind::Svm(SvmParams::default())),
            "knn" => Ok(ClassifierKind::Knn(KnnParams::default())),
            "rfc" => Ok(ClassifierKind::Rfc(ForestParams::default())),
            "gbc" => Ok(ClassifierKind::Gbc(BoostParams::default())),
            other => Err(Error::arg(format!("unknown classifier '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Model {
    Ann(Ann),
    Svm(LinearSvm),
    Knn(Knn),
    Rfc(Forest),
    Gbc(Boosted),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedClassifier {
    kind: ClassifierKind,
    n_features: usize,
    seed: u64,
    model: Model,
}

/// Fit on raw features and 0/1 targets (1 = positive).
pub fn fit_xy(kind: &ClassifierKind, x: ArrayView2<f64>, y: &[f64], seed: u64) -> Result<FittedClassifier> {
    kind.validate()?;
    if x.nrows() != y.len() {
        return Err(Error::shape(format!("{} rows but {} targets", x.nrows(), y.len())));
    }
    let pos = y.iter().filter(|&&v| v == 1.0).count();
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::arg("targets must be 0 or 1"));
    }
    if pos == 0 || pos == y.len() {
        return Err(Error::Fit("training set has a single class".into()));
    }
    let model = match kind {
        ClassifierKind::Ann(p) => Model::Ann(Ann::fit(x, y, p, seed)?),
        ClassifierKind::Svm(p) => Model::Svm(LinearSvm::fit(x, y, p)),
        ClassifierKind::Knn(p) => Model::Knn(Knn::fit(x, y, p)),
        ClassifierKind::Rfc(p) => Model::Rfc(Forest::fit(x, y, p, seed)),
        ClassifierKind::Gbc(p) => Model::Gbc(Boosted::fit(x, y, p, seed)),
    };
    Ok(FittedClassifier {
        kind: kind.clone(),
        n_features: x.ncols(),
        seed,
        model,
    })
}

/// Fit with the dataset's minority class as the positive class.
pub fn fit(kind: &ClassifierKind, train: &LabeledDataset, seed: u64) -> Result<FittedClassifier> {
    fit_xy(kind, train.features().view(), &train.minority_targets(), seed)
}

impl FittedClassifier {
    pub fn kind(&self) -> &ClassifierKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// ANN/GBC: probabilities; SVM: signed margins; KNN: neighbour vote
    /// fractions; RFC: mean tree votes.
    pub fn predict_scores(&self, x: ArrayView2<f64>) -> Result<Vec<f64>> {
        if x.ncols() != self.n_features {
            return Err(Error::shape(format!(
                "query has {} columns, classifier was fit on {}",
                x.ncols(),
                self.n_features
            )));
        }
        Ok(match &self.model {
            Model::Ann(m) => m.predict(x)?,
            Model::Svm(m) => m.predict(x),
            Model::Knn(m) => m.predict(x),
            Model::Rfc(m) => m.predict(x),
            Model::Gbc(m) => m.predict(x),
        })
    }
}
