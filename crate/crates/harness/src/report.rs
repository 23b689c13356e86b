//! CSV and markdown output.
//!
//! Result tables are written wide, one row per `(dataset, method)` and a
//! `mean`/`std`/`n` column triple per classifier, mirroring the layout of the
//! published tables. Provenance goes into leading `#` comment lines. Floats
//! use Rust's shortest round-trip formatting, so reading a written table back
//! yields an identical table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::method::Method;
use crate::results::{Cell, Provenance, RankingTable, ResultTable};
use crate::runner::FoldRecord;
use crate::sweeps::{DofSweep, LambdaSweep, SrSweep};

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Report(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

pub fn results_csv(rt: &ResultTable) -> Result<String> {
    let classifiers = rt.classifiers();
    let mut header = vec!["dataset".to_owned(), "method".to_owned()];
    for c in &classifiers {
        header.extend([format!("{c}_mean"), format!("{c}_std"), format!("{c}_n")]);
    }
    let mut rows = vec![header];
    for dataset in rt.datasets() {
        for method in rt.methods() {
            let cells: Vec<Option<&Cell>> = classifiers.iter().map(|c| rt.get(&dataset, c, &method)).collect();
            if cells.iter().all(Option::is_none) {
                continue;
            }
            let mut row = vec![dataset.clone(), method.clone()];
            for c in cells {
                match c {
                    Some(c) => row.extend([c.mean.to_string(), c.std.to_string(), c.n.to_string()]),
                    None => row.extend([String::new(), String::new(), String::new()]),
                }
            }
            rows.push(row);
        }
    }
    let seeds: Vec<String> = rt.provenance.seeds.iter().map(u64::to_string).collect();
    let mut out = format!(
        "# config_hash={}\n# seeds={}\n",
        rt.provenance.config_hash,
        seeds.join(";")
    );
    out.push_str(&csv_string(rows)?);
    Ok(out)
}

fn parse<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Report(format!("cannot parse {what} from '{field}'")))
}

pub fn parse_results_csv(text: &str) -> Result<ResultTable> {
    let mut provenance = Provenance::default();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        if let Some(h) = body.strip_prefix("config_hash=") {
            provenance.config_hash = h.to_owned();
        } else if let Some(s) = body.strip_prefix("seeds=") {
            provenance.seeds = s
                .split(';')
                .filter(|s| !s.is_empty())
                .map(|s| parse(s, "seed"))
                .collect::<Result<_>>()?;
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Report(e.to_string()))?.clone();
    if header.len() < 2 || &header[0] != "dataset" || &header[1] != "method" || (header.len() - 2) % 3 != 0 {
        return Err(Error::Report("not a result table header".into()));
    }
    let classifiers: Vec<String> = (2..header.len())
        .step_by(3)
        .map(|i| {
            header[i]
                .strip_suffix("_mean")
                .map(str::to_owned)
                .ok_or_else(|| Error::Report(format!("unexpected column '{}'", &header[i])))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Report(e.to_string()))?;
        rows.push(rec);
    }
    // Cells were written dataset → classifier → method in first-seen order;
    // rebuild them in that order.
    let mut cells = Vec::new();
    let datasets = {
        let mut d: Vec<String> = Vec::new();
        for r in &rows {
            if !d.iter().any(|x| x == &r[0]) {
                d.push(r[0].to_owned());
            }
        }
        d
    };
    for dataset in &datasets {
        for (k, classifier) in classifiers.iter().enumerate() {
            for r in rows.iter().filter(|r| &r[0] == dataset) {
                let i = 2 + 3 * k;
                if r[i].is_empty() {
                    continue;
                }
                cells.push(Cell {
                    dataset: dataset.clone(),
                    classifier: classifier.clone(),
                    method: r[1].to_owned(),
                    mean: parse(&r[i], "mean")?,
                    std: parse(&r[i + 1], "std")?,
                    n: parse(&r[i + 2], "n")?,
                });
            }
        }
    }
    Ok(ResultTable { cells, provenance })
}

/// Reorder cells dataset → classifier → method, the order a CSV round trip
/// produces.
pub fn canonical(rt: &ResultTable) -> ResultTable {
    let mut cells = Vec::new();
    for d in rt.datasets() {
        for c in rt.classifiers() {
            for m in rt.methods() {
                if let Some(cell) = rt.get(&d, &c, &m) {
                    cells.push(cell.clone());
                }
            }
        }
    }
    ResultTable {
        cells,
        provenance: rt.provenance.clone(),
    }
}

fn method_label(m: &str) -> String {
    m.parse::<Method>()
        .map_or_else(|_| m.to_owned(), |m| m.label().to_owned())
}

/// One markdown table per dataset: methods as rows, classifiers as columns,
/// `mean ± std` entries with the best mean per column in bold.
pub fn results_markdown(rt: &ResultTable) -> String {
    let classifiers = rt.classifiers();
    let mut out = String::new();
    for dataset in rt.datasets() {
        let _ = writeln!(out, "### {dataset}\n");
        let _ = writeln!(out, "| Method | {} |", classifiers.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(classifiers.len()));
        let best: Vec<f64> = classifiers
            .iter()
            .map(|c| {
                rt.cells
                    .iter()
                    .filter(|x| x.dataset == dataset && x.classifier == *c)
                    .map(|x| x.mean)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        for method in rt.methods() {
            let entries: Vec<String> = classifiers
                .iter()
                .zip(&best)
                .map(|(c, &b)| match rt.get(&dataset, c, &method) {
                    Some(cell) if cell.mean == b => format!("**{:.5}** ± {:.4}", cell.mean, cell.std),
                    Some(cell) => format!("{:.5} ± {:.4}", cell.mean, cell.std),
                    None => "–".to_owned(),
                })
                .collect();
            if entries.iter().all(|e| e == "–") {
                continue;
            }
            let _ = writeln!(out, "| {} | {} |", method_label(&method), entries.join(" | "));
        }
        out.push('\n');
    }
    out
}

pub fn ranking_csv(rank: &RankingTable) -> Result<String> {
    let mut rows = vec![["dataset", "classifier", "best", "best_mean", "second", "second_mean"]
        .map(String::from)
        .to_vec()];
    for g in &rank.groups {
        let (b, bm) = g.best().map_or((String::new(), String::new()), |e| {
            (e.label.clone(), e.mean.to_string())
        });
        let (s, sm) = g.second().map_or((String::new(), String::new()), |e| {
            (e.label.clone(), e.mean.to_string())
        });
        rows.push(vec![g.dataset.clone(), g.classifier.clone(), b, bm, s, sm]);
    }
    csv_string(rows)
}

pub fn ranking_markdown(rank: &RankingTable) -> String {
    let mut out = String::from("| Dataset | Classifier | Best | Second best |\n|---|---|---|---|\n");
    for g in &rank.groups {
        let fmt = |e: Option<&crate::results::RankedEntry>| {
            e.map_or("–".to_owned(), |e| format!("{} ({:.5})", e.label, e.mean))
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            g.dataset,
            g.classifier,
            fmt(g.best()),
            fmt(g.second())
        );
    }
    let _ = writeln!(
        out,
        "\nRestrained GAN best in {} of {} groups; in the top two in {}.",
        rank.restrained_best,
        rank.groups.len(),
        rank.restrained_top2
    );
    out
}

pub fn folds_csv(records: &[FoldRecord]) -> Result<String> {
    let mut rows = vec![["dataset", "method", "classifier", "seed", "fold", "auc"]
        .map(String::from)
        .to_vec()];
    for r in records {
        rows.push(vec![
            r.dataset.clone(),
            r.method.clone(),
            r.classifier.clone(),
            r.seed.to_string(),
            r.fold.to_string(),
            r.auc.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn sr_sweep_csv(s: &SrSweep) -> Result<String> {
    let mut rows = vec![["dataset", "pattern", "seed", "sr", "auc"].map(String::from).to_vec()];
    for p in &s.points {
        rows.push(vec![
            p.dataset.clone(),
            p.pattern.clone(),
            p.seed.to_string(),
            p.sr.to_string(),
            p.auc.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn sr_correlation_csv(s: &SrSweep) -> Result<String> {
    let mut rows = vec![["dataset", "seed", "spearman"].map(String::from).to_vec()];
    for c in &s.correlations {
        rows.push(vec![
            c.dataset.clone(),
            c.seed.map_or("mean".to_owned(), |s| s.to_string()),
            c.rho.map_or(String::new(), |r| r.to_string()),
        ]);
    }
    csv_string(rows)
}

pub fn lambda_sweep_csv(s: &LambdaSweep) -> Result<String> {
    let mut rows = vec![["dataset", "lambda", "classifier", "seed", "auc"]
        .map(String::from)
        .to_vec()];
    for p in &s.points {
        rows.push(vec![
            p.dataset.clone(),
            p.lambda.to_string(),
            p.classifier.clone(),
            p.seed.to_string(),
            p.auc.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn dof_sweep_csv(s: &DofSweep) -> Result<String> {
    let mut rows = vec![["dataset", "method", "factor", "g_params", "classifier", "mean", "std"]
        .map(String::from)
        .to_vec()];
    for r in &s.rows {
        rows.push(vec![
            r.dataset.clone(),
            r.method.name().to_owned(),
            r.factor.to_string(),
            r.g_params.to_string(),
            r.classifier.clone(),
            r.mean.to_string(),
            r.std.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_results(path: impl AsRef<Path>) -> Result<ResultTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_results_csv(&text)
}
