//! Classify a scalar timeseries as stochastic or non-stochastic.
//!
//! Two independent legs look at the same series:
//!
//! * the SVD leg embeds the series into a delay matrix, rasterizes the scatter
//!   of its top two right singular vectors and counts Betti numbers of the
//!   resulting binary image (one blob and no voids means noise);
//! * the PCA leg recursively splits the series, measures the eigenvalue ratio
//!   of the half-vs-half 2x2 covariance of every interval, summarizes the
//!   ratio curve into two features and applies a linear classifier.
//!
//! The final label is kept when both legs agree and is `Uncertain` otherwise.
//!
//! This crate is `no_std` (it needs `alloc`). File formats, the command line
//! and parallel drivers live in the `stochastid` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod embedding;
pub mod fft;
pub mod ingest;
pub mod pca_leg;
pub mod pipeline;
pub mod svd_leg;
pub mod synth;
pub mod types;

pub use error::{Error, Result, Stage};
pub use types::{combine_labels, ClassificationReport, Label, Source, TimeSeries};
