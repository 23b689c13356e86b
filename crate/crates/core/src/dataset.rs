use ndarray::{Array2, ArrayView1, Axis};

use crate::error::{Error, Result};

/// Binary-labelled feature matrix.
///
/// Labels are `0`/`1`; the minority label is fixed at construction (the class
/// with fewer rows, `1` on a tie) and preserved by [`subset`](Self::subset)
/// and [`append`](Self::append), so a fold or an augmented copy keeps talking
/// about the same class.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Array2<f64>,
    labels: Vec<u8>,
    minority_label: u8,
    feature_names: Vec<String>,
    /// Per-column `(min, max)` of the raw data before normalisation.
    bounds: Vec<(f64, f64)>,
}

impl LabeledDataset {
    pub fn new(features: Array2<f64>, labels: Vec<u8>) -> Result<Self> {
        let names = (0..features.ncols()).map(|i| format!("x{i}")).collect();
        Self::with_names(features, labels, names)
    }

    pub fn with_names(features: Array2<f64>, labels: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        let ones = labels.iter().filter(|&&l| l == 1).count();
        let zeros = labels.len() - ones;
        let minority = if ones <= zeros { 1 } else { 0 };
        Self::build(features, labels, minority, feature_names)
    }

    fn build(features: Array2<f64>, labels: Vec<u8>, minority_label: u8, feature_names: Vec<String>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::shape(format!(
                "{} feature rows but {} labels",
                features.nrows(),
                labels.len()
            )));
        }
        if feature_names.len() != features.ncols() {
            return Err(Error::shape(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.ncols()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::arg(format!("label {bad} is not binary")));
        }
        let ones = labels.iter().filter(|&&l| l == 1).count();
        if ones == 0 || ones == labels.len() {
            return Err(Error::arg("dataset must contain both classes"));
        }
        let bounds = vec![(0.0, 1.0); features.ncols()];
        Ok(LabeledDataset {
            features,
            labels,
            minority_label,
            feature_names,
            bounds,
        })
    }

    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.len() != self.n_features() {
            return Err(Error::shape("bounds length must equal the feature count"));
        }
        self.bounds = bounds;
        Ok(self)
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn minority_label(&self) -> u8 {
        self.minority_label
    }

    pub fn majority_label(&self) -> u8 {
        1 - self.minority_label
    }

    pub fn is_minority(&self, row: usize) -> bool {
        self.labels[row] == self.minority_label
    }

    /// `(minority_count, majority_count)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let m = self.labels.iter().filter(|&&l| l == self.minority_label).count();
        (m, self.labels.len() - m)
    }

    pub fn minority_indices(&self) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.is_minority(i)).collect()
    }

    pub fn minority_rows(&self) -> Array2<f64> {
        self.features.select(Axis(0), &self.minority_indices())
    }

    /// 1.0 for minority rows, 0.0 otherwise: the positive class for scoring.
    pub fn minority_targets(&self) -> Vec<f64> {
        self.labels
            .iter()
            .map(|&l| if l == self.minority_label { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    /// Rows at `indices` (duplicates allowed), keeping the minority label.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n_rows()) {
            return Err(Error::arg(format!("row index {bad} out of range")));
        }
        let features = self.features.select(Axis(0), indices);
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let out = Self::build(features, labels, self.minority_label, self.feature_names.clone())?;
        Ok(LabeledDataset {
            bounds: self.bounds.clone(),
            ..out
        })
    }

    /// Append rows with a single label; the originals stay a prefix.
    pub fn append(&self, rows: &Array2<f64>, label: u8) -> Result<Self> {
        if rows.nrows() == 0 {
            return Ok(self.clone());
        }
        if rows.ncols() != self.n_features() {
            return Err(Error::shape(format!(
                "appended rows have {} columns, dataset has {}",
                rows.ncols(),
                self.n_features()
            )));
        }
        let features = ndarray::concatenate(Axis(0), &[self.features.view(), rows.view()])
            .map_err(|e| Error::shape(e.to_string()))?;
        let mut labels = self.labels.clone();
        labels.extend(std::iter::repeat_n(label, rows.nrows()));
        Ok(LabeledDataset {
            features,
            labels,
            minority_label: self.minority_label,
            feature_names: self.feature_names.clone(),
            bounds: self.bounds.clone(),
        })
    }

    /// Map a normalised row back to raw units.
    pub fn denormalize_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        row.iter()
            .zip(&self.bounds)
            .map(|(&v, &(lo, hi))| lo + v * (hi - lo))
            .collect()
    }
}
