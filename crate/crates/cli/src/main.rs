use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ndarray::Axis;
use rgan_core::augment::{apply_plan, AugmentMethod, AugmentPlan};
use rgan_core::gan::{generate, train_gan, GanModel};
use rgan_core::topology::make_pair;
use rgan_core::{seed, LabeledDataset};
use rgan_harness::data::load_dataset;
use rgan_harness::experiment::{load_datasets, run_experiment_with};
use rgan_harness::report::{self, write_file};
use rgan_harness::sweeps::{dof_sweep, lambda_sweep, sr_sweep};
use rgan_harness::{rank_methods, ExperimentConfig, Method};

#[derive(Parser)]
#[command(
    name = "rgan",
    version,
    about = "Restrained GAN oversampling for imbalanced tabular data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace the config's master seeds with this one.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (or file, for `augment`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the (dataset × classifier × method) cross-validation grid.
    Experiment(Common),
    /// Balance a whole dataset with one method and write it as CSV.
    Augment {
        #[command(flatten)]
        common: Common,
        /// Dataset schema (TOML).
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        method: Method,
    },
    /// Train one GAN on a dataset's minority rows; write its trace and samples.
    TrainGan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, default_value = "wgan_star")]
        method: Method,
        /// Number of samples to write; defaults to the minority count.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Correlate SR with augmentation AUC over topology pairs.
    SweepSr(Common),
    /// AUC of the dynamically restrained WGAN over a λ grid.
    SweepLambda(Common),
    /// AUC of the unrestrained GAN/WGAN over generator scale factors.
    SweepDof(Common),
    /// Render a results CSV as markdown tables and a ranking.
    Report {
        /// A results.csv written by `experiment`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(common: &Common, required: bool) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path).with_context(|| format!("loading {}", path.display()))?,
        None if required => bail!("--config is required for this command"),
        None => ExperimentConfig::new(Vec::new(), vec![Method::Original]),
    };
    if let Some(s) = common.seed {
        cfg.seeds = vec![s];
    }
    if let Some(j) = common.jobs {
        cfg.jobs = j;
    }
    if let Some(out) = &common.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn write(path: PathBuf, contents: &str) -> Result<()> {
    write_file(&path, contents)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn experiment(common: &Common) -> Result<()> {
    let cfg = load_config(common, true)?;
    let datasets = load_datasets(&cfg)?;
    let exp = run_experiment_with(&cfg, &datasets, &())?;
    let dir = out_dir(&cfg);
    let ranking = rank_methods(&exp.table);
    write(dir.join("results.csv"), &report::results_csv(&exp.table)?)?;
    write(dir.join("results.md"), &report::results_markdown(&exp.table))?;
    write(dir.join("ranking.csv"), &report::ranking_csv(&ranking)?)?;
    write(dir.join("ranking.md"), &report::ranking_markdown(&ranking))?;
    write(dir.join("folds.csv"), &report::folds_csv(&exp.output.folds)?)?;
    print!("{}", report::results_markdown(&exp.table));
    Ok(())
}

/// Train the GAN behind `method` on every minority row of `ds`.
fn train_full(cfg: &ExperimentConfig, ds: &LabeledDataset, method: Method, seed: u64) -> Result<(GanModel, String)> {
    let pattern = cfg.gan.pattern_for(method).context("method does not use a GAN")?;
    let mut gan_cfg = cfg.gan.config_for(method).context("method does not use a GAN")?;
    gan_cfg.seed = seed::derive(seed, method.gan_seed_key());
    let minority = ds.features().select(Axis(0), &ds.minority_indices());
    let d = ds.n_features();
    let pair = make_pair(&pattern, &cfg.gan.base_hidden, d, gan_cfg.noise_dim.unwrap_or(d))?;
    let (model, trace) = train_gan(minority.view(), &pair, &gan_cfg, &mut ())?;
    Ok((model, trace.to_csv()))
}

fn dataset_csv(ds: &LabeledDataset, original_rows: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ds.feature_names().to_vec();
    header.extend(["label".to_owned(), "synthetic".to_owned()]);
    w.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut row: Vec<String> = ds.denormalize_row(ds.row(i)).iter().map(f64::to_string).collect();
        row.push(ds.labels()[i].to_string());
        row.push(u8::from(i >= original_rows).to_string());
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn augment(common: &Common, schema: &Path, method: Method) -> Result<()> {
    let cfg = load_config(common, false)?;
    let master = cfg.seeds[0];
    let (_, ds) = load_dataset(schema)?;
    let model = if method.uses_gan() {
        Some(train_full(&cfg, &ds, method, master)?.0)
    } else {
        None
    };
    let plan_method = match (method, &model) {
        (Method::Original, _) => AugmentMethod::None,
        (Method::Smote, _) => AugmentMethod::Smote { k: cfg.smote_k },
        (_, Some(m)) => AugmentMethod::Gan(m),
        (_, None) => unreachable!("GAN methods train a model"),
    };
    let out = apply_plan(
        &ds,
        &AugmentPlan {
            method: plan_method,
            target_ratio: cfg.target_ratio,
            seed: seed::derive(master, "augment"),
        },
    )?;
    let csv = dataset_csv(&out, ds.n_rows())?;
    match &common.out {
        Some(path) => write(path.clone(), &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn train_gan_cmd(common: &Common, schema: &Path, method: Method, samples: Option<usize>) -> Result<()> {
    let cfg = load_config(common, false)?;
    let master = cfg.seeds[0];
    let (schema_info, ds) = load_dataset(schema)?;
    let (model, trace) = train_full(&cfg, &ds, method, master)?;
    let n = samples.unwrap_or_else(|| ds.class_counts().0);
    let x = generate(&model, n, seed::derive(master, "samples"))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ds.feature_names())?;
    for row in x.rows() {
        w.write_record(ds.denormalize_row(row).iter().map(f64::to_string))?;
    }
    let dir = out_dir(&cfg);
    let stem = format!("{}_{}", schema_info.name, method.name());
    write(dir.join(format!("{stem}_trace.csv")), &trace)?;
    write(
        dir.join(format!("{stem}_samples.csv")),
        &String::from_utf8(w.into_inner()?)?,
    )
}

fn sweep(common: &Common, kind: &str) -> Result<()> {
    let cfg = load_config(common, true)?;
    let datasets = load_datasets(&cfg)?;
    let dir = out_dir(&cfg);
    match kind {
        "sr" => {
            let s = sr_sweep(&cfg, &datasets, &cfg.sweep.patterns()?, &())?;
            write(dir.join("sr_sweep.csv"), &report::sr_sweep_csv(&s)?)?;
            write(dir.join("sr_correlation.csv"), &report::sr_correlation_csv(&s)?)?;
            print!("{}", report::sr_correlation_csv(&s)?);
        }
        "lambda" => {
            let s = lambda_sweep(&cfg, &datasets, &cfg.sweep.lambda_grid, &())?;
            let csv = report::lambda_sweep_csv(&s)?;
            write(dir.join("lambda_sweep.csv"), &csv)?;
            print!("{csv}");
        }
        _ => {
            let s = dof_sweep(&cfg, &datasets, &cfg.sweep.scale_factors, &())?;
            let csv = report::dof_sweep_csv(&s)?;
            write(dir.join("dof_sweep.csv"), &csv)?;
            print!("{csv}");
        }
    }
    Ok(())
}

fn report_cmd(input: &Path, out: Option<&Path>) -> Result<()> {
    let table = report::read_results(input)?;
    let ranking = rank_methods(&table);
    let md = format!(
        "{}\n{}",
        report::results_markdown(&table),
        report::ranking_markdown(&ranking)
    );
    match out {
        Some(dir) => {
            write(dir.join("results.md"), &report::results_markdown(&table))?;
            write(dir.join("ranking.md"), &report::ranking_markdown(&ranking))?;
            write(dir.join("ranking.csv"), &report::ranking_csv(&ranking)?)?;
        }
        None => print!("{md}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Experiment(c) => experiment(&c),
        Command::Augment { common, schema, method } => augment(&common, &schema, method),
        Command::TrainGan {
            common,
            schema,
            method,
            samples,
        } => train_gan_cmd(&common, &schema, method, samples),
        Command::SweepSr(c) => sweep(&c, "sr"),
        Command::SweepLambda(c) => sweep(&c, "lambda"),
        Command::SweepDof(c) => sweep(&c, "dof"),
        Command::Report { input, out } => report_cmd(&input, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
