//! PCA leg: eigenvalue ratios of lagged pairs over a recursive split of the
//! series, summarized as (VER, AUER) and classified by a linear SVM.

mod ratio;
mod svm;
mod tuning;

pub use ratio::{
    build_ratio_curve, eigen_ratio, features, sym2_eigenvalues, FeatureVector, LeafInterval, RatioCurve,
    DEFAULT_MIN_LEN, DEFAULT_THRESHOLD, FLAT_EIGENVALUE, LOG_EPSILON, RATIO_CAP,
};
pub use svm::{train_linear, LinearModel, SvmConfig, DEFAULT_EPOCHS, DEFAULT_LAMBDA, SHUFFLE_SEED};
pub use tuning::{default_grid, kmeans2, silhouette, threshold_score, tune_threshold};

use crate::{Label, Result};

/// Label and signed margin of one feature vector.
pub fn pca_label(model: &LinearModel, features: &FeatureVector) -> Result<(Label, f64)> {
    let (label, margin) = model.classify(&features.log_point());
    if !margin.is_finite() {
        return Err(crate::Error::Numerical("non-finite SVM margin".into()));
    }
    Ok((label, margin))
}
