//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1-7, 11 and 12 are exact or tolerance checks and decide the exit
//! status. Criteria 8-10 are seed-averaged directional comparisons of
//! stochastic training runs; their lines are reported the same way but only
//! fail the run when `ACCEPTANCE_STRICT=1` is set.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test --release --test acceptance -- 1 2 3`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use rgan_core::augment::smote;
use rgan_core::classifiers::auc;
use rgan_core::nn::{Activation, Network, NetworkSpec, LEAKY_RELU_SLOPE};
use rgan_core::restraint::{f_rate, kmmd, KmmdConfig, MAX_DROPOUT_RATE};
use rgan_core::seed;
use rgan_core::topology::{sr, ProbeSet};
use rgan_harness::cv::Fold;
use rgan_harness::experiment::{load_datasets, run_experiment, run_experiment_with};
use rgan_harness::report::results_csv;
use rgan_harness::runner::{JobKey, Observer};
use rgan_harness::sweeps::{lambda_sweep, sr_sweep};
use rgan_harness::{ExperimentConfig, Method};

const SEEDS: [u64; 3] = [1, 2, 3];

#[derive(Clone, Copy, PartialEq)]
enum Gate {
    Exact,
    Directional,
}

type Criterion = (u8, &'static str, Gate, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/{name}.toml"))
}

/// Settings for the training-based criteria: full-length GAN runs with the
/// RMSProp rate used by the shipped configs.
fn trained_config(datasets: &[&str], methods: Vec<Method>, classifiers: &[&str]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(datasets.iter().map(|d| data(d)).collect(), methods);
    cfg.classifiers = classifiers.iter().map(|c| c.to_string()).collect();
    cfg.folds = 10;
    cfg.seeds = SEEDS.to_vec();
    cfg.gan.train.iterations = 3000;
    cfg.gan.train.lr_g = 1e-3;
    cfg.gan.train.lr_d = 1e-3;
    cfg
}

fn within_budget(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

// 1 -------------------------------------------------------------------------

fn loss(net: &Network, x: &Array2<f64>, r: &Array2<f64>) -> f64 {
    (net.predict(x.view()).unwrap() * r).sum()
}

fn gradient_oracle() -> Outcome {
    let start = Instant::now();
    let acts = [
        Activation::Tanh,
        Activation::Sigmoid,
        Activation::LeakyRelu,
        Activation::Linear,
    ];
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for n in 0..50u64 {
        let mut rng = seed::rng(seed::derive(1000, &n));
        let input = rng.gen_range(1..=5);
        let depth = rng.gen_range(0..=3);
        let hidden: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=6)).collect();
        let output = rng.gen_range(1..=3);
        let spec = NetworkSpec::mlp(
            input,
            &hidden,
            acts[rng.gen_range(0..acts.len())],
            output,
            acts[rng.gen_range(0..acts.len())],
        );
        let mut net = Network::new(spec, n).unwrap();
        for b in net.biases_mut() {
            b.mapv_inplace(|_| rng.gen_range(-0.5..0.5));
        }
        let batch = 3;
        let x = Array2::from_shape_simple_fn((batch, input), || rng.gen_range(-1.0..1.0));
        let r = Array2::from_shape_simple_fn((batch, output), || rng.gen_range(-1.0..1.0));
        let trace = net.forward(x.view(), None).unwrap();
        let grads = net.backward(&trace, r.view()).unwrap().grads;

        let mut compare = |analytic: f64, numeric: f64| {
            let scale = analytic.abs().max(numeric.abs());
            let rel = if scale < 1e-7 {
                0.0
            } else {
                (analytic - numeric).abs() / scale
            };
            worst = worst.max(rel);
            checked += 1;
        };
        for l in 0..net.num_layers() {
            let (rows, cols) = net.weights()[l].dim();
            for i in 0..rows {
                for j in 0..cols {
                    let orig = net.weights()[l][[i, j]];
                    net.weights_mut()[l][[i, j]] = orig + h;
                    let up = loss(&net, &x, &r);
                    net.weights_mut()[l][[i, j]] = orig - h;
                    let down = loss(&net, &x, &r);
                    net.weights_mut()[l][[i, j]] = orig;
                    compare(grads.weights[l][[i, j]], (up - down) / (2.0 * h));
                }
                let orig = net.biases()[l][i];
                net.biases_mut()[l][i] = orig + h;
                let up = loss(&net, &x, &r);
                net.biases_mut()[l][i] = orig - h;
                let down = loss(&net, &x, &r);
                net.biases_mut()[l][i] = orig;
                compare(grads.biases[l][i], (up - down) / (2.0 * h));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst < 1e-4 && within_budget(elapsed, 10),
        format!("max relative error {worst:.2e} over {checked} parameters of 50 networks ({elapsed:.2?})"),
    )
}

// 2 -------------------------------------------------------------------------

fn auc_oracle() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut rng = seed::rng(2);
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(2..80);
        let levels = rng.gen_range(2..12);
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                if done % 2 == 0 {
                    rng.gen_range(0..levels) as f64 / levels as f64
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if !(labels.contains(&0) && labels.contains(&1)) {
            continue;
        }
        // doubled pair count: 2 per correctly ordered pair, 1 per tie
        let mut twice: u64 = 0;
        let p = labels.iter().filter(|&&l| l == 1).count() as u64;
        let q = n as u64 - p;
        for i in 0..n {
            for j in 0..n {
                if labels[i] == 1 && labels[j] == 0 {
                    if scores[i] > scores[j] {
                        twice += 2;
                    } else if scores[i] == scores[j] {
                        twice += 1;
                    }
                }
            }
        }
        let expected = twice as f64 / (2 * p * q) as f64;
        if auc(&scores, &labels).unwrap() != expected {
            mismatches += 1;
        }
        done += 1;
    }
    let elapsed = start.elapsed();
    Outcome::new(
        mismatches == 0 && within_budget(elapsed, 5),
        format!("{mismatches} of 200 vectors differ from pair counting ({elapsed:.2?})"),
    )
}

// 3 -------------------------------------------------------------------------

fn normal_sample(rng: &mut seed::Rng, n: usize, d: usize, shift: f64) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, d), || {
        let z: f64 = StandardNormal.sample(rng);
        z + shift
    })
}

fn kmmd_properties() -> Outcome {
    let start = Instant::now();
    let cfg = KmmdConfig::default();
    let mut rng = seed::rng(3);
    let a = normal_sample(&mut rng, 200, 3, 0.0);
    let b = normal_sample(&mut rng, 150, 3, 0.3);
    let self_mmd = kmmd(a.view(), a.view(), &cfg).unwrap();
    let asym = (kmmd(a.view(), b.view(), &cfg).unwrap() - kmmd(b.view(), a.view(), &cfg).unwrap()).abs();
    let base = normal_sample(&mut rng, 200, 3, 0.0);
    let shifted: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&s| {
            let other = normal_sample(&mut seed::rng(33), 200, 3, s);
            kmmd(base.view(), other.view(), &cfg).unwrap()
        })
        .collect();
    let increasing = shifted.windows(2).all(|w| w[0] < w[1]);
    let elapsed = start.elapsed();
    Outcome::new(
        self_mmd < 1e-10 && asym < 1e-12 && increasing && within_budget(elapsed, 5),
        format!(
            "kmmd(a,a)={self_mmd:.1e}, asymmetry {asym:.1e}, shifts 0.5/1/2 -> {:.4}/{:.4}/{:.4} ({elapsed:.2?})",
            shifted[0], shifted[1], shifted[2]
        ),
    )
}

// 4 -------------------------------------------------------------------------

fn leaky(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        LEAKY_RELU_SLOPE * z
    }
}

/// First hidden layer activations computed directly from the weights.
fn first_layer(net: &Network, x: &Array2<f64>) -> Vec<Vec<f64>> {
    let w = &net.weights()[0];
    let b: &Array1<f64> = &net.biases()[0];
    (0..w.nrows())
        .map(|node| {
            x.rows()
                .into_iter()
                .map(|row| leaky(row.iter().zip(w.row(node)).map(|(a, c)| a * c).sum::<f64>() + b[node]))
                .collect()
        })
        .collect()
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

fn sr_identity_and_oracle() -> Outcome {
    let start = Instant::now();
    let spec = NetworkSpec::mlp(5, &[7, 6], Activation::LeakyRelu, 3, Activation::Linear);
    let net = Network::new(spec, 4).unwrap();
    let mut rng = seed::rng(4);
    let p = Array2::from_shape_simple_fn((64, 5), || rng.gen_range(-1.0..1.0));
    let probes = ProbeSet::new(p.clone(), p).unwrap();
    let identity = sr(&net, &net, &[(0, 0), (1, 1)], &probes).unwrap();

    let mut worst: f64 = 0.0;
    for s in 0..10u64 {
        let mut g = Network::new(
            NetworkSpec::mlp(4, &[6], Activation::LeakyRelu, 8, Activation::Sigmoid),
            40 + s,
        )
        .unwrap();
        let mut d = Network::new(
            NetworkSpec::mlp(8, &[6], Activation::LeakyRelu, 1, Activation::Linear),
            80 + s,
        )
        .unwrap();
        let mut rng = seed::rng(400 + s);
        for net in [&mut g, &mut d] {
            for b in net.biases_mut() {
                b.mapv_inplace(|_| rng.gen_range(-0.3..0.3));
            }
        }
        let probes = ProbeSet::sample(
            Array2::from_shape_simple_fn((50, 8), || rng.gen::<f64>()).view(),
            4,
            32,
            500 + s,
        )
        .unwrap();
        let got = sr(&g, &d, &[(0, 0)], &probes).unwrap();
        let fg = first_layer(&g, &probes.g_probe);
        let fd = first_layer(&d, &probes.d_probe);
        let mut total = 0.0;
        for dj in &fd {
            let mut best = f64::NEG_INFINITY;
            for gj in &fg {
                best = best.max(pearson(dj, gj));
            }
            total += if dj.iter().all(|v| *v == dj[0]) { 0.0 } else { best };
        }
        let expected = total / fd.len() as f64;
        worst = worst.max((got - expected).abs());
    }
    let elapsed = start.elapsed();
    Outcome::new(
        (identity - 1.0).abs() <= 1e-9 && worst <= 1e-12,
        format!("SR(net, net) = {identity:.12}, max oracle difference {worst:.1e} over 10 pairs ({elapsed:.2?})"),
    )
}

// 5 -------------------------------------------------------------------------

fn f_rate_table() -> Outcome {
    let zero = f_rate(0.4, 0.5, 0.2, 0.3);
    let mid = f_rate(0.8, 0.5, 0.2, 0.3);
    let printed: f64 = 0.2 * 0.5 + (0.2 + 0.3) * (0.8 - 0.5);
    let clamped = f_rate(1.0, 0.0, 0.5, 2.0);
    // 0.8 - 0.5 is not exact in binary, so the middle value is compared with
    // the printed formula evaluated in f64 and with 0.25 to a few ulps.
    let ok = zero == 0.0
        && mid.to_bits() == printed.to_bits()
        && (mid - 0.25).abs() <= 4.0 * f64::EPSILON
        && clamped == MAX_DROPOUT_RATE
        && MAX_DROPOUT_RATE == 0.95;
    Outcome::new(
        ok,
        format!("f_rate -> {zero}, {mid}, {clamped} (expected 0, 0.25, 0.95)"),
    )
}

// 6 -------------------------------------------------------------------------

fn knn_brute(m: &Array2<f64>, i: usize, k: usize) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = (0..m.nrows())
        .filter(|&j| j != i)
        .map(|j| {
            let dist: f64 = m.row(i).iter().zip(m.row(j)).map(|(a, b)| (a - b).powi(2)).sum();
            (dist, j)
        })
        .collect();
    d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    d.into_iter().take(k).map(|(_, j)| j).collect()
}

fn on_segment(s: &[f64], x: &[f64], y: &[f64]) -> bool {
    let dir: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - a).collect();
    let len2: f64 = dir.iter().map(|v| v * v).sum();
    if len2 == 0.0 {
        return s.iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-12);
    }
    let u = s.iter().zip(x).zip(&dir).map(|((a, b), c)| (a - b) * c).sum::<f64>() / len2;
    if !(-1e-12..=1.0 + 1e-12).contains(&u) {
        return false;
    }
    s.iter()
        .zip(x)
        .zip(&dir)
        .all(|((a, b), c)| (a - (b + u * c)).abs() < 1e-9)
}

fn smote_segments() -> Outcome {
    let start = Instant::now();
    let k = 5;
    let mut total = 0;
    let mut bad = 0;
    for set in 0..25u64 {
        let mut rng = seed::rng(600 + set);
        let n = rng.gen_range(6..40);
        let d = rng.gen_range(2..7);
        let m = Array2::from_shape_simple_fn((n, d), || rng.gen::<f64>());
        let synth = smote(m.view(), k, 40, 700 + set).unwrap();
        let neighbours: Vec<Vec<usize>> = (0..n).map(|i| knn_brute(&m, i, k)).collect();
        for s in synth.rows() {
            let s = s.to_vec();
            let member = (0..n).any(|i| {
                let x = m.row(i).to_vec();
                neighbours[i].iter().any(|&j| on_segment(&s, &x, &m.row(j).to_vec()))
            });
            if !member {
                bad += 1;
            }
            total += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        total == 1000 && bad == 0,
        format!("{bad} of {total} synthetic points off every minority k-NN segment ({elapsed:.2?})"),
    )
}

// 7 -------------------------------------------------------------------------

fn baseline_rfc() -> Outcome {
    let mut cfg = trained_config(&["australian", "german"], vec![Method::Original], &["rfc"]);
    cfg.gan.train.iterations = 0;
    let exp = run_experiment(&cfg).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, target, tol) in [("australian", 0.92, 0.03), ("german", 0.754, 0.04)] {
        let cell = exp.table.get(name, "rfc", "original").unwrap();
        let per_seed: Vec<String> = SEEDS
            .iter()
            .map(|&s| {
                format!(
                    "{:.4}",
                    exp.table_for_seed(s).get(name, "rfc", "original").unwrap().mean
                )
            })
            .collect();
        ok &= (cell.mean - target).abs() <= tol;
        parts.push(format!(
            "{name} {:.4} (target {target} ± {tol}; seeds {})",
            cell.mean,
            per_seed.join("/")
        ));
    }
    Outcome::new(ok, parts.join(", "))
}

// 8 -------------------------------------------------------------------------

fn restraint_direction() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (dataset, restrained) in [("australian", Method::Iwgan), ("german", Method::WganStar)] {
        let cfg = trained_config(&[dataset], vec![Method::Wgan, restrained], &["rfc"]);
        let exp = run_experiment(&cfg).unwrap();
        let mut wins = 0;
        let mut pairs = Vec::new();
        for &s in &SEEDS {
            let t = exp.table_for_seed(s);
            let plain = t.get(dataset, "rfc", "wgan").unwrap().mean;
            let other = t.get(dataset, "rfc", restrained.name()).unwrap().mean;
            if other >= plain {
                wins += 1;
            }
            pairs.push(format!("{other:.4}/{plain:.4}"));
        }
        ok &= wins >= 2;
        lines.push(format!(
            "{dataset} {} ≥ WGAN in {wins}/3 seeds ({})",
            restrained.label(),
            pairs.join(", ")
        ));
    }
    Outcome::new(ok, lines.join("; "))
}

// 9 -------------------------------------------------------------------------

fn sr_trend() -> Outcome {
    let cfg = trained_config(
        &["australian"],
        vec![Method::Wgan],
        &["ann", "svm", "knn", "rfc", "gbc"],
    );
    let datasets = load_datasets(&cfg).unwrap();
    let patterns = cfg.sweep.patterns().unwrap();
    let sweep = sr_sweep(&cfg, &datasets, &patterns, &()).unwrap();
    let per_seed: Vec<Option<f64>> = sweep
        .correlations
        .iter()
        .filter(|c| c.seed.is_some())
        .map(|c| c.rho)
        .collect();
    let positive = per_seed.iter().filter(|r| r.is_some_and(|r| r > 0.0)).count();
    let averaged = sweep.correlations.iter().find(|c| c.seed.is_none()).and_then(|c| c.rho);
    let fmt = |r: &Option<f64>| r.map_or("n/a".to_owned(), |v| format!("{v:.3}"));
    Outcome::new(
        positive * 2 > per_seed.len(),
        format!(
            "Spearman ρ(SR, AUC) over {} pairs: seeds {} (positive in {positive}/{}), seed-averaged {}",
            patterns.len(),
            per_seed.iter().map(fmt).collect::<Vec<_>>().join("/"),
            per_seed.len(),
            fmt(&averaged)
        ),
    )
}

// 10 ------------------------------------------------------------------------

fn lambda_shape() -> Outcome {
    let cfg = trained_config(&["spect"], vec![Method::WganStar], &["ann"]);
    let datasets = load_datasets(&cfg).unwrap();
    let grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    let sweep = lambda_sweep(&cfg, &datasets, &grid, &()).unwrap();
    let mut wins = 0;
    let mut curves = Vec::new();
    for &s in &SEEDS {
        let curve = sweep.curve("spect", "ann", s);
        let aucs: Vec<f64> = curve.iter().map(|p| p.1).collect();
        let interior = aucs[1..aucs.len() - 1]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if interior > aucs[0] && interior > aucs[aucs.len() - 1] {
            wins += 1;
        }
        curves.push(aucs.iter().map(|a| format!("{a:.4}")).collect::<Vec<_>>().join(" "));
    }
    Outcome::new(
        wins >= 2,
        format!(
            "interior maximum in {wins}/3 seeds; AUC over λ=0.1..0.6: [{}]",
            curves.join("] [")
        ),
    )
}

// 11 ------------------------------------------------------------------------

fn determinism() -> Outcome {
    let mut cfg = ExperimentConfig::new(vec![data("australian"), data("spect")], Method::ALL.to_vec());
    cfg.classifiers = vec!["svm".into(), "knn".into(), "rfc".into(), "gbc".into()];
    cfg.folds = 5;
    cfg.seeds = vec![1, 2];
    cfg.gan.train.iterations = 100;
    cfg.gan.train.lr_g = 1e-3;
    cfg.gan.train.lr_d = 1e-3;
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    let differing = a
        .table
        .cells
        .iter()
        .zip(&b.table.cells)
        .filter(|(x, y)| {
            x.mean.to_bits() != y.mean.to_bits() || x.std.to_bits() != y.std.to_bits() || x.method != y.method
        })
        .count();
    let same_len = a.table.cells.len() == b.table.cells.len();
    let same_text = results_csv(&a.table).unwrap() == results_csv(&b.table).unwrap();
    Outcome::new(
        same_len && differing == 0 && same_text && a.output == b.output,
        format!(
            "{differing} of {} cells differ between two identical runs; results.csv identical: {same_text}",
            a.table.cells.len()
        ),
    )
}

// 12 ------------------------------------------------------------------------

type Key = (String, u64, usize, String);

fn key(k: &JobKey) -> Key {
    (k.dataset.clone(), k.seed, k.fold, k.variant.clone())
}

#[derive(Default)]
struct LeakProbe {
    tests: Mutex<HashMap<Key, Vec<bool>>>,
    augment_events: Mutex<usize>,
    gan_events: Mutex<usize>,
    leaked: Mutex<Vec<String>>,
    bad_partition: Mutex<usize>,
}

impl LeakProbe {
    fn check(&self, k: &JobKey, rows: &[usize], path: &str) {
        let tests = self.tests.lock().unwrap();
        let mask = tests.get(&key(k)).expect("fold registered before use");
        let hits = rows.iter().filter(|&&i| mask[i]).count();
        if hits > 0 {
            self.leaked.lock().unwrap().push(format!("{path} {k}: {hits} rows"));
        }
    }
}

impl Observer for LeakProbe {
    fn on_fold(&self, k: &JobKey, fold: &Fold) {
        let n = fold.train.len() + fold.test.len();
        let mut mask = vec![false; n];
        for &i in &fold.test {
            mask[i] = true;
        }
        if fold.train.iter().any(|&i| i >= n || mask[i]) {
            *self.bad_partition.lock().unwrap() += 1;
        }
        self.tests.lock().unwrap().insert(key(k), mask);
    }

    fn on_augment(&self, k: &JobKey, rows: &[usize]) {
        self.check(k, rows, "augmentation");
        *self.augment_events.lock().unwrap() += 1;
    }

    fn on_gan_training(&self, k: &JobKey, rows: &[usize]) {
        self.check(k, rows, "gan training");
        *self.gan_events.lock().unwrap() += 1;
    }
}

fn leakage_guard() -> Outcome {
    let mut cfg = ExperimentConfig::new(
        ["australian", "german", "pima", "spect"]
            .iter()
            .map(|d| data(d))
            .collect(),
        Method::ALL.to_vec(),
    );
    cfg.folds = 10;
    cfg.seeds = vec![1];
    cfg.gan.train.iterations = 20;
    let datasets = load_datasets(&cfg).unwrap();
    let probe = LeakProbe::default();
    let result = run_experiment_with(&cfg, &datasets, &probe);
    let leaked = probe.leaked.lock().unwrap().clone();
    let augment = *probe.augment_events.lock().unwrap();
    let gan = *probe.gan_events.lock().unwrap();
    let partition = *probe.bad_partition.lock().unwrap();
    let gan_methods = Method::ALL.iter().filter(|m| m.uses_gan()).count();
    let cells = result.as_ref().map_or(0, |e| e.table.cells.len());
    let expected_cells = 4 * Method::ALL.len() * cfg.classifiers.len();
    Outcome::new(
        result.is_ok()
            && leaked.is_empty()
            && partition == 0
            && augment == 4 * Method::ALL.len() * 10
            && gan == 4 * gan_methods * 10
            && cells == expected_cells,
        format!(
            "{} leaked paths, {partition} overlapping folds; {augment} augmentation and {gan} GAN-training \
             calls checked; {cells}/{expected_cells} cells{}",
            leaked.len(),
            result.err().map_or(String::new(), |e| format!("; run failed: {e}"))
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "gradient oracle", Gate::Exact, gradient_oracle),
        (2, "AUC oracle", Gate::Exact, auc_oracle),
        (3, "KMMD properties", Gate::Exact, kmmd_properties),
        (4, "SR identity and oracle", Gate::Exact, sr_identity_and_oracle),
        (5, "dropout-rate table", Gate::Exact, f_rate_table),
        (6, "SMOTE segments", Gate::Exact, smote_segments),
        (7, "original-data RFC baseline", Gate::Exact, baseline_rfc),
        (8, "restraint beats plain WGAN", Gate::Directional, restraint_direction),
        (9, "SR-AUC correlation", Gate::Directional, sr_trend),
        (10, "λ sweep interior maximum", Gate::Directional, lambda_shape),
        (11, "determinism", Gate::Exact, determinism),
        (12, "leakage guard", Gate::Exact, leakage_guard),
    ];
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");

    let mut failed_gates = 0;
    let mut summary = Vec::new();
    for (id, name, gate, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        let kind = match gate {
            Gate::Exact => "",
            Gate::Directional => " [directional]",
        };
        let line = format!(
            "criterion {id:>2} {verdict}{kind} {name}: {} [{:.1?}]",
            outcome.detail,
            start.elapsed()
        );
        println!("{line}");
        summary.push(line);
        if !outcome.passed && (gate == Gate::Exact || strict) {
            failed_gates += 1;
        }
    }
    println!("\nacceptance summary");
    for line in &summary {
        println!("  {line}");
    }
    if failed_gates > 0 {
        println!("{failed_gates} gating criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
