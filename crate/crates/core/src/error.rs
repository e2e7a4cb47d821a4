use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Pipeline stage that produced an analysis error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Embedding,
    Svd,
    Raster,
    Betti,
    Pca,
    Classify,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Embedding => "embedding",
            Stage::Svd => "svd",
            Stage::Raster => "raster",
            Stage::Betti => "betti",
            Stage::Pca => "pca",
            Stage::Classify => "classify",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series has zero variance")]
    DegenerateSeries,
    #[error("series too short: need {needed} samples, have {available}")]
    SeriesTooShort { needed: usize, available: usize },
    #[error("data matrix is rank deficient (sigma1 = {sigma1:e}, sigma2 = {sigma2:e})")]
    RankDeficient { sigma1: f64, sigma2: f64 },
    #[error("singular vector has zero range")]
    ZeroRange,
    #[error("image has no foreground pixels")]
    EmptyImage,
    #[error("segment of length {len} is too short for an eigenvalue ratio (need 4)")]
    SegmentTooShort { len: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("`Uncertain` is not a valid leg label")]
    UncertainInput,
    #[error("logistic map seed {0} lies on a degenerate orbit")]
    DegenerateSeed(f64),
    #[error("corpus must hold 27 training and 14 validation series, got {train} and {validation}")]
    CorpusSize { train: usize, validation: usize },
    #[error("line {line}: time does not increase")]
    NonMonotoneTime { line: usize },
    #[error("line {line}: rate must be finite and non-negative")]
    InvalidRate { line: usize },
    #[error("light curve has {rows} data rows, need at least 2")]
    TooFewRows { rows: usize },
    #[error("gap of {len} empty bins starting at bin {start} exceeds the limit of {limit}")]
    GapTooLarge { start: usize, len: usize, limit: usize },
    #[error("light curve spans fewer than 2 bins")]
    SpanTooShort,
    #[error("numerical invariant violated: {0}")]
    Numerical(String),
    #[error("{stage} stage failed: {source}")]
    Analysis { stage: Stage, source: Box<Error> },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Analysis {
            stage,
            source: Box::new(self),
        }
    }

    /// Stage name for errors raised by [`crate::pipeline::analyze`].
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Analysis { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}
