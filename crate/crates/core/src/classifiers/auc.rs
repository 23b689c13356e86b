//! Area under the ROC curve via the Mann-Whitney U statistic.

use crate::error::{Error, Result};

/// Fraction of (positive, negative) pairs ranked correctly, ties counted as
/// one half. `labels` are `0`/`1` with `1` the positive class.
///
/// Ranks are kept doubled in integer arithmetic so the statistic is exact:
/// the result equals brute-force pair counting bit for bit.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::shape(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::arg("scores contain NaN"));
    }
    if let Some(bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::arg(format!("label {bad} is not binary")));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::arg("AUC is undefined with a single class"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Sum of doubled average ranks of the positives.
    let mut pos_rank2: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j; doubled average = i + 1 + j
        let rank2 = (i + 1 + j) as u64;
        let pos_in_group = order[i..j].iter().filter(|&&k| labels[k] == 1).count() as u64;
        pos_rank2 += rank2 * pos_in_group;
        i = j;
    }
    let u2 = pos_rank2 - n_pos * (n_pos + 1);
    Ok(u2 as f64 / (2 * n_pos * n_neg) as f64)
}
