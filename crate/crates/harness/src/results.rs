//! Aggregated AUC tables and method rankings.

use std::cmp::Ordering;

use crate::method::Method;
use crate::runner::FoldRecord;
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub dataset: String,
    pub classifier: String,
    pub method: String,
    /// Mean AUC over folds and seeds.
    pub mean: f64,
    /// Sample standard deviation over folds and seeds.
    pub std: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub seeds: Vec<u64>,
}

/// `(dataset, classifier, method)` → AUC summary. Cells keep the order in
/// which their keys first appeared.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub cells: Vec<Cell>,
    pub provenance: Provenance,
}

fn first_seen<'a>(keys: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for k in keys {
        if !out.iter().any(|o| o == k) {
            out.push(k.to_owned());
        }
    }
    out
}

impl ResultTable {
    pub fn from_records(records: &[FoldRecord], provenance: Provenance) -> Self {
        let mut cells: Vec<(Cell, Vec<f64>)> = Vec::new();
        for r in records {
            match cells
                .iter_mut()
                .find(|(c, _)| c.dataset == r.dataset && c.classifier == r.classifier && c.method == r.method)
            {
                Some((_, v)) => v.push(r.auc),
                None => cells.push((
                    Cell {
                        dataset: r.dataset.clone(),
                        classifier: r.classifier.clone(),
                        method: r.method.clone(),
                        mean: 0.0,
                        std: 0.0,
                        n: 0,
                    },
                    vec![r.auc],
                )),
            }
        }
        let cells = cells
            .into_iter()
            .map(|(c, v)| Cell {
                mean: mean(&v),
                std: std_dev(&v),
                n: v.len(),
                ..c
            })
            .collect();
        ResultTable { cells, provenance }
    }

    pub fn get(&self, dataset: &str, classifier: &str, method: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.classifier == classifier && c.method == method)
    }

    pub fn datasets(&self) -> Vec<String> {
        first_seen(self.cells.iter().map(|c| c.dataset.as_str()))
    }

    pub fn classifiers(&self) -> Vec<String> {
        first_seen(self.cells.iter().map(|c| c.classifier.as_str()))
    }

    pub fn methods(&self) -> Vec<String> {
        first_seen(self.cells.iter().map(|c| c.method.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Label a method row is ranked under: the four static restraint variants
/// merge into `SRGAN` and the dynamic one is `DRGAN`. Unknown rows keep their
/// own name.
pub fn ranking_label(method: &str) -> String {
    method
        .parse::<Method>()
        .map(|m| m.ranking_label().to_owned())
        .unwrap_or_else(|_| method.to_owned())
}

fn is_restrained(label: &str) -> bool {
    label == "SRGAN" || label == "DRGAN"
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub label: String,
    /// The method row that represents the label (best of a merged group).
    pub method: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingGroup {
    pub dataset: String,
    pub classifier: String,
    /// Labels sorted best first.
    pub order: Vec<RankedEntry>,
}

impl RankingGroup {
    pub fn best(&self) -> Option<&RankedEntry> {
        self.order.first()
    }

    pub fn second(&self) -> Option<&RankedEntry> {
        self.order.get(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankingTable {
    pub groups: Vec<RankingGroup>,
    /// Groups whose best label is SRGAN or DRGAN.
    pub restrained_best: usize,
    /// Groups with SRGAN or DRGAN among the top two.
    pub restrained_top2: usize,
}

/// Higher mean first, then lower std, then label name.
pub fn rank_order(a: &RankedEntry, b: &RankedEntry) -> Ordering {
    b.mean
        .total_cmp(&a.mean)
        .then(a.std.total_cmp(&b.std))
        .then_with(|| a.label.cmp(&b.label))
}

/// Rank method labels within each `(dataset, classifier)` group. A merged
/// label is represented by its best member row.
pub fn rank_methods(rt: &ResultTable) -> RankingTable {
    let mut groups = Vec::new();
    for dataset in rt.datasets() {
        for classifier in rt.classifiers() {
            let mut all: Vec<RankedEntry> = rt
                .cells
                .iter()
                .filter(|c| c.dataset == dataset && c.classifier == classifier)
                .map(|c| RankedEntry {
                    label: ranking_label(&c.method),
                    method: c.method.clone(),
                    mean: c.mean,
                    std: c.std,
                })
                .collect();
            if all.is_empty() {
                continue;
            }
            all.sort_by(|a, b| rank_order(a, b).then_with(|| a.method.cmp(&b.method)));
            let mut entries: Vec<RankedEntry> = Vec::new();
            for e in all {
                if !entries.iter().any(|k| k.label == e.label) {
                    entries.push(e);
                }
            }
            groups.push(RankingGroup {
                dataset: dataset.clone(),
                classifier: classifier.clone(),
                order: entries,
            });
        }
    }
    let restrained_best = groups
        .iter()
        .filter(|g| g.best().is_some_and(|e| is_restrained(&e.label)))
        .count();
    let restrained_top2 = groups
        .iter()
        .filter(|g| g.order.iter().take(2).any(|e| is_restrained(&e.label)))
        .count();
    RankingTable {
        groups,
        restrained_best,
        restrained_top2,
    }
}
