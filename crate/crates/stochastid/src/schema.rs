//! JSON documents: per-series reports and trained models. Both carry
//! `"schema": 1`.

use serde::{Deserialize, Serialize};
use stochastid_core::pca_leg::LinearModel;
use stochastid_core::pipeline::Trained;
use stochastid_core::ClassificationReport;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const ORIENTATION: &str = "ns_positive";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BettiJson {
    pub b0: usize,
    pub b1: usize,
    pub norm: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema: u32,
    pub name: String,
    pub n: usize,
    pub tau: usize,
    pub m: usize,
    pub k: usize,
    pub betti: BettiJson,
    pub svd_label: String,
    pub ver: f64,
    pub auer: f64,
    pub pca_label: String,
    pub svm_margin: f64,
    pub final_label: String,
}

impl ReportJson {
    pub fn from_report(r: &ClassificationReport) -> CliResult<Self> {
        let json = ReportJson {
            schema: SCHEMA_VERSION,
            name: r.series_name.clone(),
            n: r.n,
            tau: r.embedding.tau,
            m: r.embedding.m,
            k: r.embedding.k,
            betti: BettiJson {
                b0: r.svd.b0,
                b1: r.svd.b1,
                norm: r.svd.norm,
            },
            svd_label: r.svd_label.to_string(),
            ver: r.pca.ver,
            auer: r.pca.auer,
            pca_label: r.pca_label.to_string(),
            svm_margin: r.svm_margin,
            final_label: r.final_label.to_string(),
        };
        if ![json.ver, json.auer, json.svm_margin].iter().all(|v| v.is_finite()) {
            return Err(CliError::Output(format!("non-finite value in report for {}", json.name)));
        }
        Ok(json)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedOn {
    pub n: usize,
    pub train_seeds: Vec<u64>,
    pub validation_seeds: Vec<u64>,
    pub pca_validation_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub schema: u32,
    pub w: [f64; 2],
    pub b: f64,
    pub orientation: String,
    pub th: f64,
    pub min_len: usize,
    pub trained_on: TrainedOn,
}

impl ModelJson {
    pub fn from_trained(t: &Trained, n: usize, train_seeds: &[u64], validation_seeds: &[u64]) -> Self {
        ModelJson {
            schema: SCHEMA_VERSION,
            w: t.model.w,
            b: t.model.b,
            orientation: ORIENTATION.into(),
            th: t.th,
            min_len: t.min_len,
            trained_on: TrainedOn {
                n,
                train_seeds: train_seeds.to_vec(),
                validation_seeds: validation_seeds.to_vec(),
                pca_validation_accuracy: t.pca_validation_accuracy,
            },
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let m: ModelJson = serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid model file: {e}")))?;
        if m.schema != SCHEMA_VERSION {
            return Err(CliError::usage(format!("unsupported model schema {}", m.schema)));
        }
        if m.orientation != ORIENTATION {
            return Err(CliError::usage(format!("unsupported model orientation `{}`", m.orientation)));
        }
        if !(m.w.iter().all(|v| v.is_finite()) && m.b.is_finite() && m.th > 1.0) {
            return Err(CliError::usage("model has non-finite weights or a threshold <= 1"));
        }
        Ok(m)
    }

    pub fn model(&self) -> LinearModel {
        LinearModel { w: self.w, b: self.b }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Output(e.to_string()))
}
