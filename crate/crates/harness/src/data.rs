//! CSV ingestion driven by a small TOML schema.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rgan_core::LabeledDataset;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column layout of one dataset file.
///
/// Every column other than `label_column` is a feature; columns listed in
/// `categorical` are ordinal-encoded by order of first appearance, the rest
/// must parse as numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSchema {
    pub name: String,
    /// Relative paths are resolved against the schema file's directory.
    pub path: PathBuf,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Column name, or the zero-based column index as a string when the file
    /// has no header.
    pub label_column: String,
    /// Label value mapped to class 1; every other value maps to 0.
    pub positive_label: String,
    #[serde(default)]
    pub categorical: Vec<String>,
    pub expected_rows: Option<usize>,
    pub expected_attributes: Option<usize>,
}

fn default_true() -> bool {
    true
}

impl DatasetSchema {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut schema: DatasetSchema = toml::from_str(&text).map_err(|source| Error::Toml {
            path: path.to_path_buf(),
            source,
        })?;
        if schema.path.is_relative() {
            if let Some(dir) = path.parent() {
                schema.path = dir.join(&schema.path);
            }
        }
        Ok(schema)
    }
}

/// Load the dataset a schema file points at.
pub fn load_dataset(schema_path: impl AsRef<Path>) -> Result<(DatasetSchema, LabeledDataset)> {
    let schema = DatasetSchema::from_file(schema_path)?;
    let ds = load_csv(&schema.path, &schema)?;
    Ok((schema, ds))
}

enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<f64>, HashMap<String, usize>),
}

/// Read `path`, encode categorical columns, and min-max normalise every
/// feature to `[0, 1]` (constant columns become 0). The raw bounds are kept
/// on the returned dataset.
pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Option<Vec<String>> = if schema.has_header {
        Some(reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect())
    } else {
        None
    };
    let mut records = reader.records();
    let first = match records.next() {
        Some(r) => Some(r.map_err(csv_err)?),
        None => None,
    };
    let names: Vec<String> = header.unwrap_or_else(|| {
        let n = first.as_ref().map_or(0, |r| r.len());
        (0..n).map(|i| i.to_string()).collect()
    });
    let label_idx = names.iter().position(|n| *n == schema.label_column).ok_or_else(|| {
        Error::schema(format!(
            "{}: label column '{}' not found",
            path.display(),
            schema.label_column
        ))
    })?;
    for c in &schema.categorical {
        if *c == schema.label_column || !names.contains(c) {
            return Err(Error::schema(format!(
                "{}: categorical column '{c}' is not a feature column",
                path.display()
            )));
        }
    }

    let feature_idx: Vec<usize> = (0..names.len()).filter(|&i| i != label_idx).collect();
    let mut columns: Vec<Column> = feature_idx
        .iter()
        .map(|&i| {
            if schema.categorical.contains(&names[i]) {
                Column::Categorical(Vec::new(), HashMap::new())
            } else {
                Column::Numeric(Vec::new())
            }
        })
        .collect();
    let mut labels = Vec::new();

    let mut line = usize::from(schema.has_header);
    for record in first.into_iter().map(Ok).chain(records) {
        let record = record.map_err(csv_err)?;
        line += 1;
        if record.len() != names.len() {
            return Err(Error::schema(format!(
                "{}:{line}: expected {} fields, found {}",
                path.display(),
                names.len(),
                record.len()
            )));
        }
        labels.push(u8::from(record[label_idx] == *schema.positive_label));
        for (col, &i) in columns.iter_mut().zip(&feature_idx) {
            let raw = &record[i];
            match col {
                Column::Numeric(v) => {
                    let x: f64 = raw.parse().map_err(|_| {
                        Error::schema(format!(
                            "{}:{line}: column '{}' value '{raw}' is not numeric",
                            path.display(),
                            names[i]
                        ))
                    })?;
                    if !x.is_finite() {
                        return Err(Error::schema(format!(
                            "{}:{line}: column '{}' value '{raw}' is not finite",
                            path.display(),
                            names[i]
                        )));
                    }
                    v.push(x);
                }
                Column::Categorical(v, codes) => {
                    let next = codes.len();
                    let code = *codes.entry(raw.to_owned()).or_insert(next);
                    v.push(code as f64);
                }
            }
        }
    }

    let n = labels.len();
    let d = feature_idx.len();
    if let Some(rows) = schema.expected_rows {
        if rows != n {
            return Err(Error::schema(format!(
                "{}: expected {rows} rows, found {n}",
                path.display()
            )));
        }
    }
    if let Some(attrs) = schema.expected_attributes {
        if attrs != d {
            return Err(Error::schema(format!(
                "{}: expected {attrs} attributes, found {d}",
                path.display()
            )));
        }
    }

    let mut features = Array2::zeros((n, d));
    let mut bounds = Vec::with_capacity(d);
    for (j, col) in columns.iter().enumerate() {
        let values = match col {
            Column::Numeric(v) | Column::Categorical(v, _) => v,
        };
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        for (i, &x) in values.iter().enumerate() {
            features[[i, j]] = if hi > lo { (x - lo) / (hi - lo) } else { 0.0 };
        }
        bounds.push(if n == 0 { (0.0, 0.0) } else { (lo, hi) });
    }
    let feature_names = feature_idx.iter().map(|&i| names[i].clone()).collect();
    LabeledDataset::with_names(features, labels, feature_names)
        .and_then(|ds| ds.with_bounds(bounds))
        .map_err(|e| Error::schema(format!("{}: {e}", path.display())))
}
