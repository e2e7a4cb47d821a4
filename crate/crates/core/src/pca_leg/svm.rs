use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math::sqrt;
use crate::{Error, Label, Result};

pub const DEFAULT_LAMBDA: f64 = 1e-2;
pub const DEFAULT_EPOCHS: usize = 2000;
pub const SHUFFLE_SEED: u64 = 0x5EED;

/// Separating line `w·x + b = 0` in log-feature space; the positive side is
/// non-stochastic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearModel {
    pub w: [f64; 2],
    pub b: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64; 2]) -> f64 {
        self.w[0] * x[0] + self.w[1] * x[1] + self.b
    }

    /// Signed distance to the line, positive on the non-stochastic side.
    pub fn margin(&self, x: &[f64; 2]) -> f64 {
        let norm = sqrt(self.w[0] * self.w[0] + self.w[1] * self.w[1]);
        if norm == 0.0 {
            return 0.0;
        }
        self.decision(x) / norm
    }

    /// A score of exactly zero is labelled non-stochastic.
    pub fn classify(&self, x: &[f64; 2]) -> (Label, f64) {
        let label = if self.decision(x) >= 0.0 {
            Label::NonStochastic
        } else {
            Label::Stochastic
        };
        (label, self.margin(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            lambda: DEFAULT_LAMBDA,
            epochs: DEFAULT_EPOCHS,
            seed: SHUFFLE_SEED,
        }
    }
}

/// Pegasos hinge-loss subgradient descent with step 1/(λt) and projection
/// onto the ball of radius 1/√λ. The bias is treated as the weight of a
/// constant feature; the last iterate is returned.
pub fn train_linear(points: &[[f64; 2]], labels: &[Label], config: &SvmConfig) -> Result<LinearModel> {
    if points.len() != labels.len() || points.is_empty() {
        return Err(Error::InvalidParameter("need one label per training point".into()));
    }
    if !(config.lambda > 0.0) || config.epochs == 0 {
        return Err(Error::InvalidParameter("lambda and epochs must be positive".into()));
    }
    let ys = labels
        .iter()
        .map(|l| match l {
            Label::NonStochastic => Ok(1.0),
            Label::Stochastic => Ok(-1.0),
            Label::Uncertain => Err(Error::UncertainInput),
        })
        .collect::<Result<Vec<f64>>>()?;
    if ys.iter().all(|y| *y > 0.0) || ys.iter().all(|y| *y < 0.0) {
        return Err(Error::SingleClass);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut model = LinearModel { w: [0.0; 2], b: 0.0 };
    let radius = 1.0 / sqrt(config.lambda);
    let mut t = 0usize;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (config.lambda * t as f64);
            let (x, y) = (&points[i], ys[i]);
            let hinge = y * model.decision(x) < 1.0;
            let shrink = 1.0 - eta * config.lambda;
            model.w = [model.w[0] * shrink, model.w[1] * shrink];
            model.b *= shrink;
            if hinge {
                model.w[0] += eta * y * x[0];
                model.w[1] += eta * y * x[1];
                model.b += eta * y;
            }
            let norm = sqrt(model.w[0] * model.w[0] + model.w[1] * model.w[1] + model.b * model.b);
            if norm > radius {
                let f = radius / norm;
                model = LinearModel {
                    w: [model.w[0] * f, model.w[1] * f],
                    b: model.b * f,
                };
            }
        }
    }
    if !(model.w.iter().all(|v| v.is_finite()) && model.b.is_finite()) {
        return Err(Error::Numerical("SVM weights diverged".into()));
    }
    if model.w == [0.0; 2] {
        return Err(Error::Numerical("SVM weights vanished".into()));
    }
    Ok(model)
}
