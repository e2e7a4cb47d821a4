//! End-to-end analysis of one series and the synthetic train/validate
//! experiment.

use alloc::string::String;
use alloc::vec::Vec;

use crate::embedding::{build_data_matrix, estimate_tau, EmbeddingParams, DEFAULT_DIMENSION, DEFAULT_MAX_COLUMNS};
use crate::pca_leg::{
    build_ratio_curve, default_grid, features, pca_label, train_linear, tune_threshold, FeatureVector, LinearModel,
    RatioCurve, SvmConfig, DEFAULT_MIN_LEN, DEFAULT_THRESHOLD,
};
use crate::svd_leg::{betti, svd_label, top2_right_singular, BettiDescriptor, BinaryImage, RasterConfig, SingularPair};
use crate::synth::{Corpus, LabeledSeries};
use crate::{combine_labels, ClassificationReport, Error, Label, Result, Stage, TimeSeries};

/// Fewest data-matrix columns the SVD leg accepts.
pub const DEFAULT_MIN_COLUMNS: usize = 128;
/// Tolerance for the orthonormality check on E1, E2.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMode {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub m: usize,
    pub tau: TauMode,
    /// Fixed column count; `None` takes as many as fit, up to `max_k`.
    pub k: Option<usize>,
    pub max_k: usize,
    pub min_columns: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            m: DEFAULT_DIMENSION,
            tau: TauMode::Auto,
            k: None,
            max_k: DEFAULT_MAX_COLUMNS,
            min_columns: DEFAULT_MIN_COLUMNS,
        }
    }
}

impl EmbeddingConfig {
    /// Resolves τ and k for a series.
    pub fn params_for(&self, samples: &[f64]) -> Result<EmbeddingParams> {
        if self.m < 2 {
            return Err(Error::InvalidParameter(alloc::format!("m must be at least 2, got {}", self.m)));
        }
        let mut tau = match self.tau {
            TauMode::Fixed(0) => return Err(Error::InvalidParameter("tau must be at least 1".into())),
            TauMode::Fixed(t) => t,
            TauMode::Auto => estimate_tau(samples)?,
        };
        let n = samples.len();
        let k = match self.k {
            Some(k) if k < self.min_columns => {
                return Err(Error::InvalidParameter(alloc::format!(
                    "k must be at least {}, got {k}",
                    self.min_columns
                )))
            }
            Some(k) => {
                // a fixed k wins over the estimated lag
                if k + (self.m - 1) * tau > n && n > k {
                    tau = tau.min((n - k) / (self.m - 1)).max(1);
                }
                k
            }
            None => n.saturating_sub((self.m - 1) * tau).min(self.max_k),
        };
        let needed = (self.m - 1) * tau + k.max(self.min_columns);
        if n < needed {
            return Err(Error::SeriesTooShort { needed, available: n });
        }
        Ok(EmbeddingParams { m: self.m, tau, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaConfig {
    pub th: f64,
    pub min_len: usize,
}

impl Default for PcaConfig {
    fn default() -> Self {
        PcaConfig {
            th: DEFAULT_THRESHOLD,
            min_len: DEFAULT_MIN_LEN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub embedding: EmbeddingConfig,
    pub raster: RasterConfig,
    pub pca: PcaConfig,
}

/// Output of the SVD leg alone.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdLegResult {
    pub embedding: EmbeddingParams,
    pub pair: SingularPair,
    pub image: BinaryImage,
    pub betti: BettiDescriptor,
    pub label: Label,
}

pub fn run_svd_leg(series: &TimeSeries, config: &PipelineConfig) -> Result<SvdLegResult> {
    let embedding = config
        .embedding
        .params_for(series.samples())
        .map_err(|e| e.at(Stage::Embedding))?;
    let matrix = build_data_matrix(series, embedding).map_err(|e| e.at(Stage::Embedding))?;
    let pair = top2_right_singular(&matrix).map_err(|e| e.at(Stage::Svd))?;
    pair.check(ORTHONORMAL_TOL).map_err(|e| e.at(Stage::Svd))?;
    let image = config.raster.image(&pair).map_err(|e| e.at(Stage::Raster))?;
    let descriptor = betti(&image).map_err(|e| e.at(Stage::Betti))?;
    let label = svd_label(&descriptor).map_err(|e| e.at(Stage::Betti))?;
    Ok(SvdLegResult {
        embedding,
        pair,
        image,
        betti: descriptor,
        label,
    })
}

/// Ratio curve and features of one series.
pub fn pca_features(samples: &[f64], config: &PcaConfig) -> Result<(RatioCurve, FeatureVector)> {
    let run = || -> Result<(RatioCurve, FeatureVector)> {
        let curve = build_ratio_curve(samples, config.th, config.min_len)?;
        curve.check()?;
        let fv = features(&curve)?;
        Ok((curve, fv))
    };
    run().map_err(|e| e.at(Stage::Pca))
}

/// Runs both legs and combines their labels. Any stage failure aborts the
/// whole analysis; no one-legged label is produced.
pub fn analyze(series: &TimeSeries, config: &PipelineConfig, model: &LinearModel) -> Result<ClassificationReport> {
    let svd = run_svd_leg(series, config)?;
    let (curve, fv) = pca_features(series.samples(), &config.pca)?;
    let (p_label, margin) = pca_label(model, &fv).map_err(|e| e.at(Stage::Classify))?;
    let final_label = combine_labels(svd.label, p_label).map_err(|e| e.at(Stage::Classify))?;
    Ok(ClassificationReport {
        series_name: series.name().into(),
        n: series.len(),
        embedding: svd.embedding,
        singular_pair: svd.pair,
        svd: svd.betti,
        curve,
        pca: fv,
        svd_label: svd.label,
        pca_label: p_label,
        final_label,
        svm_margin: margin,
    })
}

/// Tuned threshold, trained model and PCA-leg validation accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct Trained {
    pub th: f64,
    pub sweep: Vec<(f64, f64)>,
    pub model: LinearModel,
    pub min_len: usize,
    pub train_features: Vec<FeatureVector>,
    pub validation_features: Vec<FeatureVector>,
    /// Fraction of validation series whose PCA label matches ground truth.
    pub pca_validation_accuracy: f64,
}

fn feature_set(series: &[LabeledSeries], config: &PcaConfig) -> Result<Vec<FeatureVector>> {
    series
        .iter()
        .map(|s| pca_features(s.series.samples(), config).map(|(_, fv)| fv))
        .collect()
}

/// Tunes Th on every series of the corpus, trains the classifier on the
/// training split and scores it on the validation split.
pub fn tune_and_train(corpus: &Corpus, grid: Option<&[f64]>, min_len: usize, svm: &SvmConfig) -> Result<Trained> {
    let all: Vec<&[f64]> = corpus.all().map(|s| s.series.samples()).collect();
    let default = default_grid();
    let (th, sweep) = tune_threshold(&all, grid.unwrap_or(&default), min_len).map_err(|e| e.at(Stage::Pca))?;
    let mut trained = train_at(corpus, th, min_len, svm)?;
    trained.sweep = sweep;
    Ok(trained)
}

/// Trains at a fixed threshold (no sweep).
pub fn train_at(corpus: &Corpus, th: f64, min_len: usize, svm: &SvmConfig) -> Result<Trained> {
    let config = PcaConfig { th, min_len };
    let train_features = feature_set(&corpus.train, &config)?;
    let points: Vec<[f64; 2]> = train_features.iter().map(FeatureVector::log_point).collect();
    let labels: Vec<Label> = corpus.train.iter().map(|s| s.label).collect();
    let model = train_linear(&points, &labels, svm).map_err(|e| e.at(Stage::Classify))?;

    let validation_features = feature_set(&corpus.validation, &config)?;
    let mut correct = 0;
    for (fv, s) in validation_features.iter().zip(&corpus.validation) {
        if pca_label(&model, fv).map_err(|e| e.at(Stage::Classify))?.0 == s.label {
            correct += 1;
        }
    }
    Ok(Trained {
        th,
        sweep: Vec::new(),
        model,
        min_len,
        train_features,
        pca_validation_accuracy: correct as f64 / corpus.validation.len().max(1) as f64,
        validation_features,
    })
}

/// One row of the experiment summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub name: String,
    pub truth: Label,
    pub report: ClassificationReport,
}

impl ExperimentRow {
    pub fn correct(&self) -> bool {
        self.report.final_label == self.truth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub trained: Trained,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentSummary {
    pub fn svd_accuracy(&self) -> f64 {
        self.fraction(|r| r.report.svd_label == r.truth)
    }

    pub fn final_accuracy(&self) -> f64 {
        self.fraction(ExperimentRow::correct)
    }

    pub fn uncertain(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.report.final_label == Label::Uncertain)
            .count()
    }

    fn fraction(&self, f: impl Fn(&ExperimentRow) -> bool) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| f(r)).count() as f64 / self.rows.len() as f64
    }
}

/// Pairs validation reports with ground truth and sorts them by name.
pub fn assemble(trained: Trained, validation: &[LabeledSeries], reports: Vec<ClassificationReport>) -> ExperimentSummary {
    let mut rows: Vec<ExperimentRow> = validation
        .iter()
        .zip(reports)
        .map(|(s, report)| ExperimentRow {
            name: s.series.name().into(),
            truth: s.label,
            report,
        })
        .collect();
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    ExperimentSummary { trained, rows }
}

/// Sequential experiment: tune, train, then analyze each validation series.
/// The threshold in `config.pca` is replaced by the tuned one.
pub fn run_experiment(corpus: &Corpus, config: &PipelineConfig, grid: Option<&[f64]>) -> Result<ExperimentSummary> {
    let trained = tune_and_train(corpus, grid, config.pca.min_len, &SvmConfig::default())?;
    let mut cfg = *config;
    cfg.pca.th = trained.th;
    let reports = corpus
        .validation
        .iter()
        .map(|s| analyze(&s.series, &cfg, &trained.model))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(trained, &corpus.validation, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, GeneratorSpec, SynthKind};
    use crate::Source;
    use alloc::vec;

    fn series(kind: SynthKind, seed: u64) -> TimeSeries {
        generate(&GeneratorSpec::new(kind, 4096, seed)).unwrap()
    }

    #[test]
    fn embedding_sizes() {
        let cfg = EmbeddingConfig {
            tau: TauMode::Fixed(3),
            ..Default::default()
        };
        let z = vec![0.0; 6000];
        assert_eq!(cfg.params_for(&z).unwrap(), EmbeddingParams { m: 4, tau: 3, k: 5000 });
        assert_eq!(cfg.params_for(&z[..1000]).unwrap().k, 991);
        assert_eq!(
            cfg.params_for(&z[..100]),
            Err(Error::SeriesTooShort { needed: 137, available: 100 })
        );
    }

    #[test]
    fn fixed_k_clamps_tau() {
        let cfg = EmbeddingConfig {
            tau: TauMode::Fixed(40),
            k: Some(5000),
            ..Default::default()
        };
        let z = vec![0.0; 5030];
        assert_eq!(cfg.params_for(&z).unwrap(), EmbeddingParams { m: 4, tau: 10, k: 5000 });
        assert!(matches!(cfg.params_for(&z[..5002]), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn short_series_fails_in_embedding() {
        let z: Vec<f64> = (0..50).map(|i| ((i * 17) % 11) as f64).collect();
        let s = TimeSeries::new(z, 1.0, "short", Source::File("mem".into())).unwrap();
        let model = LinearModel { w: [1.0, 1.0], b: 0.0 };
        let err = analyze(&s, &PipelineConfig::default(), &model).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::Embedding));
    }

    #[test]
    fn legs_disagreeing_give_uncertain() {
        let s = series(SynthKind::WhiteNoise, 1);
        // a model that puts everything on the NS side
        let model = LinearModel { w: [0.0, 0.0], b: 1.0 };
        let r = analyze(&s, &PipelineConfig::default(), &model).unwrap();
        assert_eq!(r.svd_label, Label::Stochastic);
        assert_eq!(r.pca_label, Label::NonStochastic);
        assert_eq!(r.final_label, Label::Uncertain);
    }

    #[test]
    fn lorenz_svd_leg() {
        let r = run_svd_leg(&series(SynthKind::Lorenz, 3), &PipelineConfig::default()).unwrap();
        assert!(r.betti.norm > 1);
        assert_eq!(r.label, Label::NonStochastic);
    }

    #[test]
    fn deterministic() {
        let s = series(SynthKind::PinkNoise, 5);
        let model = LinearModel { w: [0.3, -1.0], b: 0.2 };
        let cfg = PipelineConfig::default();
        assert_eq!(analyze(&s, &cfg, &model), analyze(&s, &cfg, &model));
    }
}
