//! Corpus-level driver: parallel analysis with deterministic output order.

use std::fmt::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use stochastid_core::pca_leg::{LinearModel, SvmConfig};
use stochastid_core::pipeline::{analyze, assemble, train_at, tune_and_train, ExperimentSummary, PipelineConfig, Trained};
use stochastid_core::synth::{default_train_seeds, default_validation_seeds, make_corpus, Corpus, DEFAULT_SAMPLES};
use stochastid_core::{ClassificationReport, Result, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub train_seeds: Vec<u64>,
    pub validation_seeds: Vec<u64>,
    pub pipeline: PipelineConfig,
    /// Candidate thresholds; `None` uses the default grid.
    pub grid: Option<Vec<f64>>,
    /// Skips tuning and trains at this threshold.
    pub fixed_th: Option<f64>,
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: DEFAULT_SAMPLES,
            train_seeds: default_train_seeds(),
            validation_seeds: default_validation_seeds(),
            pipeline: PipelineConfig::default(),
            grid: None,
            fixed_th: None,
            jobs: default_jobs(),
        }
    }
}

pub fn default_jobs() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Applies `f` to every item on up to `jobs` threads; results keep input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

pub fn analyze_many(
    series: &[&TimeSeries],
    config: &PipelineConfig,
    model: &LinearModel,
    jobs: usize,
) -> Vec<Result<ClassificationReport>> {
    par_map(series, jobs, |s| analyze(s, config, model))
}

pub fn build_corpus(cfg: &ExperimentConfig) -> Result<Corpus> {
    let custom = cfg.train_seeds != default_train_seeds() || cfg.validation_seeds != default_validation_seeds();
    make_corpus(&cfg.train_seeds, &cfg.validation_seeds, cfg.n, custom)
}

pub fn train(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<Trained> {
    let svm = SvmConfig::default();
    match cfg.fixed_th {
        Some(th) => train_at(corpus, th, cfg.pipeline.pca.min_len, &svm),
        None => tune_and_train(corpus, cfg.grid.as_deref(), cfg.pipeline.pca.min_len, &svm),
    }
}

/// Generates the corpus, tunes and trains, then analyzes the validation
/// series in parallel.
pub fn run(cfg: &ExperimentConfig) -> Result<(Corpus, ExperimentSummary)> {
    let corpus = build_corpus(cfg)?;
    let summary = run_on(&corpus, cfg)?;
    Ok((corpus, summary))
}

pub fn run_on(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let trained = train(corpus, cfg)?;
    let mut pipeline = cfg.pipeline;
    pipeline.pca.th = trained.th;
    let series: Vec<&TimeSeries> = corpus.validation.iter().map(|s| &s.series).collect();
    let reports = analyze_many(&series, &pipeline, &trained.model, cfg.jobs)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(trained, &corpus.validation, reports))
}

/// Human-readable results table with summary lines.
pub fn table(summary: &ExperimentSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>6} {:>10} {:>5} {:>12} {:>10} {:>5} {:>5} {:>5} {:>5}",
        "Series", "Truth", "Betti Norm", "SVD", "VER", "AUER", "PCA", "Match", "Final", "OK"
    );
    for row in &summary.rows {
        let r = &row.report;
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>10} {:>5} {:>12.4} {:>10.4} {:>5} {:>5} {:>5} {:>5}",
            row.name,
            row.truth.abbrev(),
            r.svd.norm,
            r.svd_label.abbrev(),
            r.pca.ver,
            r.pca.auer,
            r.pca_label.abbrev(),
            if r.labels_match() { "Yes" } else { "No" },
            r.final_label.abbrev(),
            if row.correct() { "yes" } else { "no" }
        );
    }
    let t = &summary.trained;
    let _ = writeln!(out, "threshold Th = {}", t.th);
    let _ = writeln!(out, "PCA-leg validation accuracy = {:.3}", t.pca_validation_accuracy);
    let _ = writeln!(out, "SVD-leg accuracy = {:.3}", summary.svd_accuracy());
    let _ = writeln!(out, "final accuracy = {:.3}, uncertain = {}", summary.final_accuracy(), summary.uncertain());
    out
}

pub fn sweep_table(sweep: &[(f64, f64)], best: f64) -> String {
    let mut out = String::from("    Th  silhouette\n");
    for (th, score) in sweep {
        let mark = if *th == best { " *" } else { "" };
        let _ = writeln!(out, "{th:>6} {score:>11.5}{mark}");
    }
    out
}
