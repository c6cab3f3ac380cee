//! Command-line interface.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lmp_core::{
    mask_and_rank, CvContext, DatasetBundle, FoldPlan, Gammas, HoldoutMode, Method, MethodParams, ParamChoice,
    SelectedParams, SolveDiagnostics, SolverConfig, SweepRow,
};
use serde::Serialize;

use crate::data_io::{load_dataset, write_canonical, InputFormat, LoadOptions, Orientation};
use crate::error::{Error, Result};
use crate::report::{self, Timing};
use crate::run::evaluate_folds;

#[derive(Debug, Parser)]
#[command(name = "lmp", version, about = "Low-rank matrix projection for drug-target interaction prediction")]
pub struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a dataset in the canonical interchange format.
    Convert {
        #[command(flatten)]
        data: DataArgs,
        /// Output directory.
        #[arg(long)]
        output: PathBuf,
    },
    /// Print dataset statistics.
    Info {
        #[command(flatten)]
        data: DataArgs,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Cross-validate a method.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Rank unknown pairs by score on the full data.
    Predict {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Number of ranked pairs to write.
        #[arg(long, default_value_t = 100)]
        top_k: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Cross-validate once per alpha value.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Alpha values; defaults to 0.1..0.25 step 0.025 for ZA and 0.1..2 step 0.1 otherwise.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// Dataset file or directory.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: InputFormat,
    /// Axis layout of labeled adjacency grids.
    #[arg(long, value_enum, default_value_t)]
    pub orientation: Orientation,
    /// Dataset name used in outputs.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum MethodArg {
    #[value(alias = "za")]
    ZA,
    #[value(alias = "zd")]
    ZD,
    #[value(alias = "zt")]
    ZT,
    #[value(alias = "zadt")]
    ZADT,
    #[value(alias = "cn")]
    CN,
    #[value(alias = "jaccard")]
    Jaccard,
    #[value(alias = "katz")]
    Katz,
    #[value(alias = "cjc")]
    CJC,
    #[value(alias = "cra")]
    CRA,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ZA => Method::ZA,
            MethodArg::ZD => Method::ZD,
            MethodArg::ZT => Method::ZT,
            MethodArg::ZADT => Method::ZADT,
            MethodArg::CN => Method::CN,
            MethodArg::Jaccard => Method::Jaccard,
            MethodArg::Katz => Method::Katz,
            MethodArg::CJC => Method::CJC,
            MethodArg::CRA => Method::CRA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pair,
    NewDrug,
    NewTarget,
}

impl From<ModeArg> for HoldoutMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pair => HoldoutMode::Pair,
            ModeArg::NewDrug => HoldoutMode::Drug,
            ModeArg::NewTarget => HoldoutMode::Target,
        }
    }
}

/// Values given as comma-separated lists; more than one value is tuned per fold.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Alpha for every solve.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Alpha of the drug-side solve on interactions (ZA).
    #[arg(long, value_delimiter = ',')]
    pub alpha_d: Vec<f64>,
    /// Alpha of the target-side solve on interactions (ZA).
    #[arg(long, value_delimiter = ',')]
    pub alpha_t: Vec<f64>,
    /// Alpha of the drug-similarity solve (ZD).
    #[arg(long, value_delimiter = ',')]
    pub alpha_sd: Vec<f64>,
    /// Alpha of the target-similarity solve (ZT).
    #[arg(long, value_delimiter = ',')]
    pub alpha_st: Vec<f64>,
    /// Weights of ZA, ZD and ZT in ZADT.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.25,0.25")]
    pub gammas: Vec<f64>,
    /// Katz decay.
    #[arg(long, value_delimiter = ',')]
    pub katz_beta: Vec<f64>,
    #[arg(long, default_value_t = SolverConfig::default().mu0)]
    pub mu0: f64,
    #[arg(long, default_value_t = SolverConfig::default().mu_max)]
    pub mu_max: f64,
    #[arg(long, default_value_t = SolverConfig::default().rho)]
    pub rho: f64,
    #[arg(long, default_value_t = SolverConfig::default().epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_iter)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Pair)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for fold evaluation.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

impl PlanArgs {
    fn plan(&self) -> FoldPlan {
        FoldPlan {
            mode: self.mode.into(),
            k: self.folds,
            repetitions: self.repetitions,
            seed: self.seed,
        }
    }
}

fn choice(values: &[f64]) -> Option<ParamChoice> {
    match values {
        [] => None,
        [v] => Some(ParamChoice::Fixed(*v)),
        vs => Some(ParamChoice::Grid(vs.to_vec())),
    }
}

impl ModelArgs {
    pub fn params(&self) -> Result<MethodParams> {
        let mut p = MethodParams::default();
        if let Some(c) = choice(&self.alpha) {
            p.alpha_d = c.clone();
            p.alpha_t = c.clone();
            p.alpha_sd = c.clone();
            p.alpha_st = c;
        }
        for (values, slot) in [
            (&self.alpha_d, &mut p.alpha_d),
            (&self.alpha_t, &mut p.alpha_t),
            (&self.alpha_sd, &mut p.alpha_sd),
            (&self.alpha_st, &mut p.alpha_st),
            (&self.katz_beta, &mut p.katz_beta),
        ] {
            if let Some(c) = choice(values) {
                *slot = c;
            }
        }
        let [g1, g2, g3] = self.gammas[..] else {
            return Err(Error::Config(format!("--gammas needs three values, got {}", self.gammas.len())));
        };
        p.gammas = Gammas(g1, g2, g3);
        p.solver = SolverConfig {
            mu0: self.mu0,
            mu_max: self.mu_max,
            rho: self.rho,
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            ..SolverConfig::default()
        };
        p.solver.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Serialize)]
pub struct DatasetInfo {
    pub name: String,
    pub drugs: usize,
    pub targets: usize,
    pub interactions: usize,
    pub density: f64,
    pub drug_similarity: bool,
    pub target_similarity: bool,
}

impl DatasetInfo {
    pub fn of(b: &DatasetBundle) -> Self {
        let a = b.interactions();
        DatasetInfo {
            name: b.name.clone(),
            drugs: a.n_drugs(),
            targets: a.n_targets(),
            interactions: a.n_interactions(),
            density: a.density(),
            drug_similarity: b.drug_sim().is_some(),
            target_similarity: b.target_sim().is_some(),
        }
    }
}

/// Every effective setting of a run.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    data: &'a DataArgs,
    method: Method,
    plan: FoldPlan,
    threads: usize,
    params: &'a MethodParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_k: Option<usize>,
}

#[derive(Debug, Serialize)]
struct CvSummary<'a> {
    tool_version: &'static str,
    config: RunConfig<'a>,
    dataset: DatasetInfo,
    similarity_diagnostics: Vec<SolveDiagnostics>,
    result: &'a lmp_core::EvalResult,
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    tool_version: &'static str,
    config: RunConfig<'a>,
    dataset: DatasetInfo,
    rows: &'a [SweepRow],
}

#[derive(Debug, Serialize)]
struct PredictSummary<'a> {
    tool_version: &'static str,
    config: RunConfig<'a>,
    dataset: DatasetInfo,
    selected: SelectedParams,
    diagnostics: &'a [SolveDiagnostics],
    ranked_pairs: usize,
}

fn load(data: &DataArgs) -> Result<DatasetBundle> {
    let opts = LoadOptions {
        format: data.format,
        orientation: data.orientation,
        name: data.name.clone(),
    };
    let bundle = load_dataset(&data.input, &opts)?;
    let a = bundle.interactions();
    log::info!(
        "loaded {}: {} drugs, {} targets, {} interactions",
        bundle.name,
        a.n_drugs(),
        a.n_targets(),
        a.n_interactions()
    );
    Ok(bundle)
}

fn write_timing(dir: &Path, command: &'static str, start: Instant) -> Result<()> {
    let t = Timing {
        command,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    report::write_file(dir, report::TIMING_FILE, &report::to_json(&t))
}

/// File name of the per-fold metrics of one sweep point.
pub fn sweep_metrics_file(alpha: f64) -> String {
    format!("metrics_alpha_{}.csv", report::fmt_g6(alpha))
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn run(cli: Cli) -> Result<()> {
    let start = Instant::now();
    match cli.command {
        Command::Convert { data, output } => {
            let bundle = load(&data)?;
            write_canonical(&bundle, &output)?;
        }
        Command::Info { data, json } => {
            let info = DatasetInfo::of(&load(&data)?);
            if json {
                print!("{}", report::to_json(&info));
            } else {
                println!("dataset\tdrugs\ttargets\tinteractions\tsparsity\tdrug_sim\ttarget_sim");
                println!(
                    "{}\t{}\t{}\t{}\t{:.3}\t{}\t{}",
                    info.name,
                    info.drugs,
                    info.targets,
                    info.interactions,
                    info.density,
                    info.drug_similarity,
                    info.target_similarity
                );
            }
        }
        Command::Cv {
            data,
            model,
            plan,
            output,
        } => {
            let bundle = load(&data)?;
            let params = model.params()?;
            let method: Method = model.method.into();
            let ctx = CvContext::new(&bundle, method, plan.plan(), params.clone())?;
            let result = evaluate_folds(&ctx, plan.threads)?;
            let summary = CvSummary {
                tool_version: VERSION,
                config: RunConfig {
                    command: "cv",
                    data: &data,
                    method,
                    plan: plan.plan(),
                    threads: plan.threads,
                    params: &params,
                    grid: None,
                    top_k: None,
                },
                dataset: DatasetInfo::of(&bundle),
                similarity_diagnostics: ctx.similarity_diagnostics(),
                result: &result,
            };
            report::write_file(&output, report::METRICS_FILE, &report::metrics_csv(&result))?;
            report::write_file(&output, report::SUMMARY_FILE, &report::to_json(&summary))?;
            log::info!("mean auc {:.4} mean aupr {:.4}", result.mean_auc, result.mean_aupr);
            write_timing(&output, "cv", start)?;
        }
        Command::Sweep {
            data,
            model,
            plan,
            grid,
            output,
        } => {
            let bundle = load(&data)?;
            let params = model.params()?;
            let method: Method = model.method.into();
            let grid = if grid.is_empty() {
                match method {
                    Method::ZA => lmp_core::interaction_alpha_grid(),
                    _ => lmp_core::similarity_alpha_grid(),
                }
            } else {
                grid
            };
            let mut rows = Vec::with_capacity(grid.len());
            for &alpha in &grid {
                let p = params.with_method_alpha(method, alpha)?;
                let ctx = CvContext::new(&bundle, method, plan.plan(), p)?;
                let result = evaluate_folds(&ctx, plan.threads)?;
                log::info!("alpha {alpha}: mean aupr {:.4}", result.mean_aupr);
                report::write_file(&output, &sweep_metrics_file(alpha), &report::metrics_csv(&result))?;
                rows.push(SweepRow { alpha, result });
            }
            let summary = SweepSummary {
                tool_version: VERSION,
                config: RunConfig {
                    command: "sweep",
                    data: &data,
                    method,
                    plan: plan.plan(),
                    threads: plan.threads,
                    params: &params,
                    grid: Some(&grid),
                    top_k: None,
                },
                dataset: DatasetInfo::of(&bundle),
                rows: &rows,
            };
            report::write_file(&output, report::SWEEP_FILE, &report::sweep_csv(&rows))?;
            report::write_file(&output, report::SUMMARY_FILE, &report::to_json(&summary))?;
            write_timing(&output, "sweep", start)?;
        }
        Command::Predict {
            data,
            model,
            plan,
            top_k,
            output,
        } => {
            let bundle = load(&data)?;
            let params = model.params()?;
            let method: Method = model.method.into();
            let ctx = CvContext::new(&bundle, method, plan.plan(), params.clone())?;
            let full = bundle.interactions();
            let selected = ctx.tune(full)?;
            let scores = ctx.fit(full, &selected)?;
            let ranked = mask_and_rank(&scores, full, Some(top_k));
            let summary = PredictSummary {
                tool_version: VERSION,
                config: RunConfig {
                    command: "predict",
                    data: &data,
                    method,
                    plan: plan.plan(),
                    threads: plan.threads,
                    params: &params,
                    grid: None,
                    top_k: Some(top_k),
                },
                dataset: DatasetInfo::of(&bundle),
                selected,
                diagnostics: scores.diagnostics(),
                ranked_pairs: ranked.len(),
            };
            report::write_file(&output, report::PREDICTIONS_FILE, &report::predictions_csv(&ranked))?;
            report::write_file(&output, report::SUMMARY_FILE, &report::to_json(&summary))?;
            write_timing(&output, "predict", start)?;
        }
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[config]: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.category().as_str());
            e.exit_code()
        }
    }
}
