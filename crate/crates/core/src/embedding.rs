//! Lag selection from the autocorrelation function and the delay-embedded
//! data matrix.
//!
//! Row `r`, column `c` of the matrix holds `z[c + r * tau]` (0-based), so the
//! first row is the series prefix and every row after it is shifted by one
//! more lag.

use alloc::string::String;
use alloc::vec::Vec;

use crate::math::{mean, sqrt};
use crate::{Error, Result, TimeSeries};

/// Embedding dimension used when none is given.
pub const DEFAULT_DIMENSION: usize = 4;
/// Upper bound on the number of matrix columns.
pub const DEFAULT_MAX_COLUMNS: usize = 5000;
/// Largest lag searched by [`estimate_tau`].
pub const MAX_TAU_SEARCH: usize = 1000;
/// An autocorrelation within this many standard errors of zero counts as
/// having reached zero.
pub const ZERO_BAND_SE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingParams {
    /// Rows of the data matrix.
    pub m: usize,
    /// Lag between consecutive rows, in samples.
    pub tau: usize,
    /// Columns of the data matrix.
    pub k: usize,
}

impl EmbeddingParams {
    /// Samples needed to fill the matrix.
    pub fn span(&self) -> usize {
        self.k + (self.m - 1) * self.tau
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.tau == 0 || self.k == 0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "embedding needs m, tau, k >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Delay-embedded matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    params: EmbeddingParams,
    source_name: String,
}

impl DataMatrix {
    pub fn params(&self) -> EmbeddingParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.params.m
    }

    pub fn cols(&self) -> usize {
        self.params.k
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let k = self.params.k;
        &self.values[r * k..(r + 1) * k]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.params.k + c]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    /// Builds a matrix directly from row-major values (tests, fixtures).
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        if m == 0 || k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidParameter("rows must be non-empty and of equal length".into()));
        }
        Ok(DataMatrix {
            values: rows.concat(),
            params: EmbeddingParams { m, tau: 1, k },
            source_name: String::new(),
        })
    }
}

/// Normalized autocorrelation ρ(0..=max_lag), biased estimator (divides by N),
/// mean removed.
pub fn autocorrelation(samples: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = samples.len();
    if max_lag == 0 || max_lag >= n {
        return Err(Error::InvalidParameter(alloc::format!(
            "max_lag must be in 1..{n}, got {max_lag}"
        )));
    }
    let acf = Acf::new(samples)?;
    Ok((0..=max_lag).map(|lag| acf.at(lag)).collect())
}

/// Lazily evaluated autocorrelation.
struct Acf {
    centered: Vec<f64>,
    c0: f64,
}

impl Acf {
    fn new(samples: &[f64]) -> Result<Self> {
        let mu = mean(samples);
        let centered: Vec<f64> = samples.iter().map(|v| v - mu).collect();
        let c0: f64 = centered.iter().map(|v| v * v).sum();
        let scale = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        // relative standard deviation below 1e-12 counts as constant
        let floor = samples.len() as f64 * (1e-12 * scale) * (1e-12 * scale);
        if !(c0 > floor) {
            return Err(Error::DegenerateSeries);
        }
        Ok(Acf { centered, c0 })
    }

    fn at(&self, lag: usize) -> f64 {
        let z = &self.centered;
        let s: f64 = z[..z.len() - lag].iter().zip(&z[lag..]).map(|(a, b)| a * b).sum();
        s / self.c0
    }
}

/// Lag at which the autocorrelation first reaches zero or first has a strict
/// local minimum, whichever comes first.
///
/// "Zero" means within [`ZERO_BAND_SE`] standard errors (1/√N each) of zero.
/// Lags `1..=min(N/4, 1000)` are searched; when neither event happens the lag
/// of smallest |ρ| is used.
pub fn estimate_tau(samples: &[f64]) -> Result<usize> {
    let n = samples.len();
    let acf = Acf::new(samples)?;
    let window = (n / 4).min(MAX_TAU_SEARCH);
    if window == 0 {
        return Ok(1);
    }
    let zero_band = ZERO_BAND_SE / sqrt(n as f64);

    let mut prev = 1.0;
    let mut cur = acf.at(1);
    let mut best = (1, cur.abs());
    for lag in 1..=window {
        if cur <= zero_band {
            return Ok(lag);
        }
        // ρ(window + 1) always exists because window <= N/4
        let next = acf.at(lag + 1);
        if cur < prev && cur < next {
            return Ok(lag);
        }
        if cur.abs() < best.1 {
            best = (lag, cur.abs());
        }
        prev = cur;
        cur = next;
    }
    Ok(best.0)
}

/// Lays the series out as the delay matrix described by `params`.
pub fn build_data_matrix(series: &TimeSeries, params: EmbeddingParams) -> Result<DataMatrix> {
    params.validate()?;
    let z = series.samples();
    if params.span() > z.len() {
        return Err(Error::SeriesTooShort {
            needed: params.span(),
            available: z.len(),
        });
    }
    let mut values = Vec::with_capacity(params.m * params.k);
    for r in 0..params.m {
        let start = r * params.tau;
        values.extend_from_slice(&z[start..start + params.k]);
    }
    Ok(DataMatrix {
        values,
        params,
        source_name: series.name().into(),
    })
}
