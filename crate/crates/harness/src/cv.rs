use rand::seq::SliceRandom;
use rgan_core::{seed, LabeledDataset};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified K-fold split.
///
/// Each class is shuffled separately, the shuffled minority list is followed
/// by the shuffled majority list, and position `i` of that sequence goes to
/// fold `i mod K`. Every fold therefore holds `⌊n_c/K⌋` or `⌈n_c/K⌉` rows of
/// each class `c`. Index lists are sorted ascending.
pub fn kfold_split(ds: &LabeledDataset, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::config(format!("need at least 2 folds, got {k}")));
    }
    let (minority, majority) = ds.class_counts();
    if minority < k || majority < k {
        return Err(Error::config(format!(
            "class sizes {minority}/{majority} are smaller than K={k}"
        )));
    }
    let mut rng = seed::rng(seed);
    let mut order = Vec::with_capacity(ds.n_rows());
    for minority_class in [true, false] {
        let mut idx: Vec<usize> = (0..ds.n_rows())
            .filter(|&i| ds.is_minority(i) == minority_class)
            .collect();
        idx.shuffle(&mut rng);
        order.extend(idx);
    }
    let mut tests = vec![Vec::new(); k];
    for (pos, &i) in order.iter().enumerate() {
        tests[pos % k].push(i);
    }
    Ok(tests
        .into_iter()
        .enumerate()
        .map(|(f, mut test)| {
            test.sort_unstable();
            let mut train: Vec<usize> = order
                .iter()
                .enumerate()
                .filter(|(pos, _)| pos % k != f)
                .map(|(_, &i)| i)
                .collect();
            train.sort_unstable();
            Fold { train, test }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn dataset(minority: usize, majority: usize) -> LabeledDataset {
        let n = minority + majority;
        let labels = (0..n).map(|i| u8::from(i < minority)).collect();
        LabeledDataset::new(Array2::zeros((n, 1)), labels).unwrap()
    }

    #[test]
    fn balanced_twenty_rows_ten_folds() {
        let ds = dataset(10, 10);
        for f in kfold_split(&ds, 10, 3).unwrap() {
            assert_eq!(f.test.len(), 2);
            let m = f.test.iter().filter(|&&i| ds.is_minority(i)).count();
            assert_eq!(m, 1);
        }
    }

    #[test]
    fn partition_and_stratification() {
        let ds = dataset(307, 383);
        let folds = kfold_split(&ds, 10, 0).unwrap();
        let mut seen = vec![0; ds.n_rows()];
        for f in &folds {
            assert_eq!(f.test.len(), 69);
            assert_eq!(f.train.len() + f.test.len(), ds.n_rows());
            for &i in &f.test {
                seen[i] += 1;
            }
            assert!(f.train.iter().all(|i| f.test.binary_search(i).is_err()));
            let m = f.test.iter().filter(|&&i| ds.is_minority(i)).count() as f64;
            let expected = 307.0 / 690.0 * f.test.len() as f64;
            assert!((m - expected).abs() <= 1.0);
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(folds, kfold_split(&ds, 10, 0).unwrap());
        assert_ne!(folds, kfold_split(&ds, 10, 1).unwrap());
    }

    #[test]
    fn too_few_rows_per_class() {
        let ds = dataset(3, 30);
        assert!(kfold_split(&ds, 5, 0).is_err());
        assert!(kfold_split(&ds, 1, 0).is_err());
        assert!(kfold_split(&ds, 3, 0).is_ok());
    }
}
