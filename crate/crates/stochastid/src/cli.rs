use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use stochastid_core::pca_leg::DEFAULT_MIN_LEN;
use stochastid_core::pipeline::{analyze, pca_features, run_svd_leg, EmbeddingConfig, PipelineConfig, TauMode};
use stochastid_core::svd_leg::{DEFAULT_DILATION, DEFAULT_RESOLUTION};
use stochastid_core::synth::{generate, GeneratorSpec, Params, SynthKind, DEFAULT_SAMPLES};
use stochastid_core::TimeSeries;

use crate::error::{CliError, CliResult};
use crate::experiment::{self, default_jobs, ExperimentConfig};
use crate::io::{pair_csv, pgm, read_lightcurve, read_series_csv, series_csv, write_output};
use crate::plot::{e1e2_svg, features_svg, ratio_svg, FeaturePoint};
use crate::schema::{to_json, ModelJson, ReportJson};

#[derive(Debug, Parser)]
#[command(name = "stochastid", version, about = "Classify timeseries as stochastic or non-stochastic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic series as a one-column CSV.
    Generate(GenerateArgs),
    /// Resample an ASCII light curve onto a uniform grid and write it as CSV.
    Ingest(IngestArgs),
    /// Classify one series and print its JSON report.
    Analyze(AnalyzeArgs),
    /// Tune, train and validate on the synthetic corpus.
    Experiment(ExperimentArgs),
    /// Print the silhouette sweep over candidate thresholds.
    Tune(CorpusArgs),
    /// Train the classifier on the synthetic corpus and write a model file.
    Train(TrainArgs),
    /// Draw the E1-E2 scatter, the ratio curve or the feature plane.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    White,
    Pink,
    Logistic,
    Lorenz,
}

impl From<KindArg> for SynthKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::White => SynthKind::WhiteNoise,
            KindArg::Pink => SynthKind::PinkNoise,
            KindArg::Logistic => SynthKind::LogisticMap,
            KindArg::Lorenz => SynthKind::Lorenz,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Number of samples.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, env = "STOCHASTID_N")]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Logistic-map initial value (otherwise drawn from the seed).
    #[arg(long, conflicts_with = "delta")]
    pub x0: Option<f64>,
    /// Lorenz initial offset on x (otherwise drawn from the seed).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// ASCII light curve: time and rate columns.
    #[arg(long)]
    pub input: PathBuf,
    /// Resampling interval in seconds.
    #[arg(long, default_value_t = 0.1, env = "STOCHASTID_LC_DT")]
    pub dt: f64,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

fn parse_tau(s: &str) -> Result<TauMode, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TauMode::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected `auto` or a positive integer, got `{s}`")),
        Ok(t) => Ok(TauMode::Fixed(t)),
    }
}

/// Pipeline knobs shared by the analysis subcommands.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Embedding dimension (rows of the delay matrix).
    #[arg(long, default_value_t = stochastid_core::embedding::DEFAULT_DIMENSION, env = "STOCHASTID_M")]
    pub m: usize,
    /// Columns of the delay matrix; default is as many as fit, up to --max-k.
    #[arg(long, env = "STOCHASTID_K")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = stochastid_core::embedding::DEFAULT_MAX_COLUMNS, env = "STOCHASTID_MAX_K")]
    pub max_k: usize,
    /// Delay in samples, or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_tau, env = "STOCHASTID_TAU")]
    pub tau: TauMode,
    /// Side of the E1-E2 image in pixels.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION, env = "STOCHASTID_RESOLUTION")]
    pub resolution: usize,
    /// Disc radius stamped at every point.
    #[arg(long, default_value_t = DEFAULT_DILATION, env = "STOCHASTID_DILATION")]
    pub dilation: usize,
    /// Shortest half-interval the ratio curve splits into.
    #[arg(long, default_value_t = DEFAULT_MIN_LEN, env = "STOCHASTID_MIN_LEN")]
    pub min_len: usize,
}

impl PipelineArgs {
    pub fn config(&self, th: f64) -> CliResult<PipelineConfig> {
        if self.m < 2 {
            return Err(CliError::usage("--m must be at least 2"));
        }
        let mut cfg = PipelineConfig {
            embedding: EmbeddingConfig {
                m: self.m,
                tau: self.tau,
                k: self.k,
                max_k: self.max_k,
                ..EmbeddingConfig::default()
            },
            ..PipelineConfig::default()
        };
        cfg.raster.resolution = self.resolution;
        cfg.raster.dilation = self.dilation;
        cfg.pca.th = th;
        cfg.pca.min_len = self.min_len;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// One-column CSV (optional header).
    #[arg(long, conflicts_with = "lightcurve", required_unless_present = "lightcurve")]
    pub input: Option<PathBuf>,
    /// ASCII light curve, resampled with --dt (default 0.1 s).
    #[arg(long)]
    pub lightcurve: Option<PathBuf>,
    /// Sampling interval in seconds.
    #[arg(long, env = "STOCHASTID_DT")]
    pub dt: Option<f64>,
}

impl InputArgs {
    pub fn load(&self) -> CliResult<TimeSeries> {
        match (&self.input, &self.lightcurve) {
            (Some(path), _) => read_series_csv(path, self.dt.unwrap_or(1.0)),
            (None, Some(path)) => read_lightcurve(path, self.dt.unwrap_or(0.1)),
            (None, None) => Err(CliError::usage("one of --input or --lightcurve is required")),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Model file written by `train`.
    #[arg(long, env = "STOCHASTID_MODEL")]
    pub model: Option<PathBuf>,
    /// Split threshold; defaults to the model's.
    #[arg(long)]
    pub th: Option<f64>,
    /// Also write the despeckled E1-E2 image as PGM.
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
        if b <= a {
            return Err(format!("empty seed range `{s}`"));
        }
        return Ok((a..b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}")))
        .collect()
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Samples per synthetic series.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, env = "STOCHASTID_N")]
    pub n: usize,
    /// Training seeds as `a..b` or a comma list (default 0..27).
    #[arg(long, value_parser = parse_seeds)]
    pub train_seeds: Option<Vec<u64>>,
    /// Validation seeds as `a..b` or a comma list (default 1000..1014).
    #[arg(long, value_parser = parse_seeds)]
    pub validation_seeds: Option<Vec<u64>>,
    /// Candidate thresholds, comma separated (default 2,3,...,20).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Skip tuning and use this threshold.
    #[arg(long)]
    pub th: Option<f64>,
    /// Worker threads.
    #[arg(long, default_value_t = default_jobs(), env = "STOCHASTID_JOBS")]
    pub jobs: usize,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

impl CorpusArgs {
    pub fn config(&self) -> CliResult<ExperimentConfig> {
        let defaults = ExperimentConfig::default();
        if let Some(th) = self.th {
            if !(th > 1.0) {
                return Err(CliError::usage("--th must exceed 1"));
            }
        }
        Ok(ExperimentConfig {
            n: self.n,
            train_seeds: self.train_seeds.clone().unwrap_or(defaults.train_seeds),
            validation_seeds: self.validation_seeds.clone().unwrap_or(defaults.validation_seeds),
            pipeline: self.pipeline.config(self.th.unwrap_or(defaults.pipeline.pca.th))?,
            grid: self.grid.clone(),
            fixed_th: self.th,
            jobs: self.jobs.max(1),
        })
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Model output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Also write the trained model here.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Write feature-plane, E1-E2 and ratio plots plus images into this directory.
    #[arg(long)]
    pub plots_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    E1e2,
    Ratio,
    Features,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub what: PlotKind,
    /// One-column CSV inputs; `features` accepts several.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, env = "STOCHASTID_DT", default_value_t = 1.0)]
    pub dt: f64,
    /// Model file (required for `features`; supplies Th for `ratio`).
    #[arg(long, env = "STOCHASTID_MODEL")]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub th: Option<f64>,
    /// Output SVG path; `e1e2` also writes the points next to it as CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn load_model(path: Option<&Path>) -> CliResult<ModelJson> {
    let path = path.ok_or_else(|| CliError::usage("a trained model is required (--model or STOCHASTID_MODEL)"))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    ModelJson::parse(&text)
}

fn resolve_th(flag: Option<f64>, model: Option<&ModelJson>) -> CliResult<f64> {
    let th = flag
        .or(model.map(|m| m.th))
        .unwrap_or(stochastid_core::pca_leg::DEFAULT_THRESHOLD);
    if !(th > 1.0) {
        return Err(CliError::usage("--th must exceed 1"));
    }
    Ok(th)
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Ingest(a) => cmd_ingest(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::Tune(a) => cmd_tune(&a),
        Command::Train(a) => cmd_train(&a),
        Command::Plot(a) => cmd_plot(&a),
    }
}

fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    let params = match (a.x0, a.delta) {
        (Some(x0), _) => Params::Logistic { x0 },
        (None, Some(delta)) => Params::Lorenz { delta },
        (None, None) => Params::Auto,
    };
    let spec = GeneratorSpec::new(a.kind.into(), a.n, a.seed).with_params(params);
    let series = generate(&spec).map_err(|e| CliError::usage(e.to_string()))?;
    write_output(&a.out, series_csv(series.samples()).as_bytes())
}

fn cmd_ingest(a: &IngestArgs) -> CliResult<()> {
    if !(a.dt > 0.0) {
        return Err(CliError::usage("--dt must be positive"));
    }
    let series = read_lightcurve(&a.input, a.dt)?;
    eprintln!("{}: {} samples at dt = {} s", series.name(), series.len(), series.dt());
    write_output(&a.out, series_csv(series.samples()).as_bytes())
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let model = load_model(a.model.as_deref())?;
    let series = a.input.load()?;
    let mut cfg = a.pipeline.config(resolve_th(a.th, Some(&model))?)?;
    if a.input.lightcurve.is_some() && a.pipeline.k.is_none() {
        cfg.embedding.k = Some(cfg.embedding.max_k);
    }
    let report = analyze(&series, &cfg, &model.model())?;
    if let Some(path) = &a.image {
        let image = cfg.raster.image(&report.singular_pair)?;
        write_output(path, &pgm(&image))?;
    }
    let json = to_json(&ReportJson::from_report(&report)?)?;
    write_output(Path::new("-"), json.as_bytes())
}

fn cmd_tune(a: &CorpusArgs) -> CliResult<()> {
    let mut cfg = a.config()?;
    cfg.fixed_th = None;
    let corpus = experiment::build_corpus(&cfg).map_err(|e| CliError::usage(e.to_string()))?;
    let trained = experiment::train(&corpus, &cfg)?;
    eprint!("{}", experiment::sweep_table(&trained.sweep, trained.th));
    let scores: Vec<serde_json::Value> = trained
        .sweep
        .iter()
        .map(|(th, s)| serde_json::json!({"th": th, "silhouette": s}))
        .collect();
    let json = to_json(&serde_json::json!({"schema": 1, "th": trained.th, "scores": scores}))?;
    write_output(Path::new("-"), json.as_bytes())
}

fn cmd_train(a: &TrainArgs) -> CliResult<()> {
    let cfg = a.corpus.config()?;
    let corpus = experiment::build_corpus(&cfg).map_err(|e| CliError::usage(e.to_string()))?;
    let trained = experiment::train(&corpus, &cfg)?;
    if !trained.sweep.is_empty() {
        eprint!("{}", experiment::sweep_table(&trained.sweep, trained.th));
    }
    eprintln!(
        "Th = {}, w = [{:.6}, {:.6}], b = {:.6}, PCA-leg validation accuracy = {:.3}",
        trained.th, trained.model.w[0], trained.model.w[1], trained.model.b, trained.pca_validation_accuracy
    );
    let model = ModelJson::from_trained(&trained, cfg.n, &cfg.train_seeds, &cfg.validation_seeds);
    write_output(&a.out, to_json(&model)?.as_bytes())
}

fn cmd_experiment(a: &ExperimentArgs) -> CliResult<()> {
    let cfg = a.corpus.config()?;
    let corpus = experiment::build_corpus(&cfg).map_err(|e| CliError::usage(e.to_string()))?;
    let summary = experiment::run_on(&corpus, &cfg)?;
    let model_json = ModelJson::from_trained(&summary.trained, cfg.n, &cfg.train_seeds, &cfg.validation_seeds);
    let mut pipeline = cfg.pipeline;
    pipeline.pca.th = summary.trained.th;

    if !summary.trained.sweep.is_empty() {
        eprint!("{}", experiment::sweep_table(&summary.trained.sweep, summary.trained.th));
    }
    eprint!("{}", experiment::table(&summary));

    if let Some(path) = &a.model_out {
        write_output(path, to_json(&model_json)?.as_bytes())?;
    }
    if let Some(dir) = &a.plots_dir {
        let mut points: Vec<FeaturePoint> = corpus
            .train
            .iter()
            .zip(&summary.trained.train_features)
            .chain(corpus.validation.iter().zip(&summary.trained.validation_features))
            .map(|(s, fv)| FeaturePoint {
                name: s.series.name().into(),
                log_ver: fv.log_ver,
                log_auer: fv.log_auer,
                label: s.label,
            })
            .collect();
        points.sort_by(|a, b| a.name.cmp(&b.name));
        let svg = features_svg(&points, &summary.trained.model, "log features, train + validation");
        write_output(&dir.join("features.svg"), svg.as_bytes())?;
        for (row, s) in summary.rows.iter().zip(sorted_validation(&corpus)) {
            let r = &row.report;
            write_output(&dir.join(format!("{}-e1e2.svg", row.name)), e1e2_svg(&r.singular_pair, &row.name).as_bytes())?;
            write_output(
                &dir.join(format!("{}-ratio.svg", row.name)),
                ratio_svg(&r.curve, s.samples(), &row.name).as_bytes(),
            )?;
            let image = pipeline.raster.image(&r.singular_pair)?;
            write_output(&dir.join(format!("{}.pgm", row.name)), &pgm(&image))?;
        }
    }

    let json: Vec<ReportJson> = summary
        .rows
        .iter()
        .map(|r| ReportJson::from_report(&r.report))
        .collect::<CliResult<_>>()?;
    write_output(Path::new("-"), to_json(&json)?.as_bytes())
}

fn sorted_validation(corpus: &stochastid_core::synth::Corpus) -> Vec<&TimeSeries> {
    let mut v: Vec<&TimeSeries> = corpus.validation.iter().map(|s| &s.series).collect();
    v.sort_by(|a, b| a.name().cmp(b.name()));
    v
}

fn cmd_plot(a: &PlotArgs) -> CliResult<()> {
    let model = match (a.what, &a.model) {
        (PlotKind::Features, _) => Some(load_model(a.model.as_deref())?),
        (_, Some(path)) => Some(load_model(Some(path))?),
        (_, None) => None,
    };
    let th = resolve_th(a.th, model.as_ref())?;
    let cfg = a.pipeline.config(th)?;
    let load = |p: &PathBuf| read_series_csv(p, a.dt);

    if a.what != PlotKind::Features && a.input.len() != 1 {
        return Err(CliError::usage("this plot takes exactly one --input"));
    }
    match a.what {
        PlotKind::E1e2 => {
            let series = load(&a.input[0])?;
            let leg = run_svd_leg(&series, &cfg)?;
            write_output(&a.out, e1e2_svg(&leg.pair, series.name()).as_bytes())?;
            write_output(&a.out.with_extension("csv"), pair_csv(&leg.pair).as_bytes())
        }
        PlotKind::Ratio => {
            let series = load(&a.input[0])?;
            let (curve, _) = pca_features(series.samples(), &cfg.pca)?;
            write_output(&a.out, ratio_svg(&curve, series.samples(), series.name()).as_bytes())
        }
        PlotKind::Features => {
            let model = model.expect("loaded above");
            let mut points = Vec::new();
            for path in &a.input {
                let series = load(path)?;
                let (_, fv) = pca_features(series.samples(), &cfg.pca)?;
                let (label, _) = model.model().classify(&fv.log_point());
                points.push(FeaturePoint {
                    name: series.name().into(),
                    log_ver: fv.log_ver,
                    log_auer: fv.log_auer,
                    label,
                });
            }
            write_output(&a.out, features_svg(&points, &model.model(), "log features").as_bytes())
        }
    }
}
