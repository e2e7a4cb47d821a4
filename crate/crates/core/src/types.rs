//! Domain types shared by both legs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::embedding::EmbeddingParams;
use crate::pca_leg::{FeatureVector, RatioCurve};
use crate::svd_leg::{BettiDescriptor, SingularPair};
use crate::synth::SynthKind;
use crate::{Error, Result};

/// Where a series came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Synthetic(SynthKind),
    File(String),
}

/// A uniformly sampled scalar series.
///
/// Construction checks that there are at least two samples, that every sample
/// is finite and that the sampling interval is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    dt: f64,
    name: String,
    source: Source,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, dt: f64, name: impl Into<String>, source: Source) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("sample {i} is not finite")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidSeries(format!("sampling interval must be positive, got {dt}")));
        }
        Ok(TimeSeries {
            samples,
            dt,
            name: name.into(),
            source,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Stochastic,
    NonStochastic,
    Uncertain,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Stochastic => "Stochastic",
            Label::NonStochastic => "NonStochastic",
            Label::Uncertain => "Uncertain",
        }
    }

    /// Short form used in result tables.
    pub fn abbrev(self) -> &'static str {
        match self {
            Label::Stochastic => "S",
            Label::NonStochastic => "NS",
            Label::Uncertain => "U",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Stochastic" | "S" => Ok(Label::Stochastic),
            "NonStochastic" | "NS" => Ok(Label::NonStochastic),
            "Uncertain" | "U" => Ok(Label::Uncertain),
            other => Err(Error::InvalidParameter(format!("unknown label `{other}`"))),
        }
    }
}

/// Keeps the common label when both legs agree, `Uncertain` otherwise.
///
/// Neither leg may report `Uncertain` itself.
pub fn combine_labels(svd_label: Label, pca_label: Label) -> Result<Label> {
    if svd_label == Label::Uncertain || pca_label == Label::Uncertain {
        return Err(Error::UncertainInput);
    }
    Ok(if svd_label == pca_label {
        svd_label
    } else {
        Label::Uncertain
    })
}

/// Everything produced while analyzing one series.
///
/// The singular pair and the ratio curve are kept so plots can be drawn
/// without re-running the analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub series_name: String,
    pub n: usize,
    pub embedding: EmbeddingParams,
    pub singular_pair: SingularPair,
    pub svd: BettiDescriptor,
    pub curve: RatioCurve,
    pub pca: FeatureVector,
    pub svd_label: Label,
    pub pca_label: Label,
    pub final_label: Label,
    /// Signed distance to the separating line in log-feature units,
    /// positive on the non-stochastic side.
    pub svm_margin: f64,
}

impl ClassificationReport {
    pub fn labels_match(&self) -> bool {
        self.svd_label == self.pca_label
    }
}
