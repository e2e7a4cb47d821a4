use alloc::vec::Vec;

use crate::math::{ln, mean, sqrt, variance};
use crate::{Error, Result};

/// Upper cap on an eigenvalue ratio (reached when λ₂ vanishes).
pub const RATIO_CAP: f64 = 1e6;
/// λ₁ at or below this means the segment is constant.
pub const FLAT_EIGENVALUE: f64 = 1e-12;
/// Offset added before taking logs of the features.
pub const LOG_EPSILON: f64 = 1e-9;
pub const DEFAULT_MIN_LEN: usize = 100;
pub const DEFAULT_THRESHOLD: f64 = 9.0;

/// Eigenvalues (λ₁ ≥ λ₂) of the symmetric matrix [[a, c], [c, b]].
///
/// λ₁ = ((a + b) + √((a − b)² + 4c²)) / 2. λ₂ is taken from the same
/// expression with the minus sign, except when λ₁ is positive, where det / λ₁
/// avoids the cancellation.
pub fn sym2_eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let tr = a + b;
    let disc = sqrt((a - b) * (a - b) + 4.0 * c * c);
    let l1 = (tr + disc) / 2.0;
    let l2 = if l1 > 0.0 && tr >= 0.0 {
        (a * b - c * c) / l1
    } else {
        (tr - disc) / 2.0
    };
    (l1, l2)
}

/// λ₁/λ₂ of the covariance of the pairs (zᵢ, zᵢ₊ₕ), h = ⌊L/2⌋, i < h.
///
/// An odd trailing sample is dropped. Constant segments give 1; ratios are
/// capped at [`RATIO_CAP`].
pub fn eigen_ratio(segment: &[f64]) -> Result<f64> {
    let len = segment.len();
    if len < 4 {
        return Err(Error::SegmentTooShort { len });
    }
    let h = len / 2;
    let (first, second) = (&segment[..h], &segment[h..2 * h]);
    let (m1, m2) = (mean(first), mean(second));
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for (x, y) in first.iter().zip(second) {
        let (dx, dy) = (x - m1, y - m2);
        a += dx * dx;
        b += dy * dy;
        c += dx * dy;
    }
    let denom = (h - 1) as f64;
    let (l1, l2) = sym2_eigenvalues(a / denom, b / denom, c / denom);
    if l1 <= FLAT_EIGENVALUE {
        return Ok(1.0);
    }
    let l2 = l2.max(0.0);
    if l2 * RATIO_CAP <= l1 {
        return Ok(RATIO_CAP);
    }
    Ok(l1 / l2)
}

/// One leaf of the recursive split, `[start, end)` in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafInterval {
    pub start: usize,
    pub end: usize,
    pub ratio: f64,
}

impl LeafInterval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Piecewise-constant eigenvalue-ratio curve over the even-truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCurve {
    pub leaves: Vec<LeafInterval>,
    pub threshold: f64,
    /// Even-truncated length N′ covered by the leaves.
    pub covered: usize,
}

impl RatioCurve {
    /// Leaves must tile `[0, covered)` in order with finite ratios ≥ 1.
    pub fn check(&self) -> Result<()> {
        let mut at = 0;
        for leaf in &self.leaves {
            if leaf.start != at || leaf.end <= leaf.start {
                return Err(Error::Numerical(alloc::format!(
                    "leaf [{}, {}) does not continue at {at}",
                    leaf.start,
                    leaf.end
                )));
            }
            if !(leaf.ratio >= 1.0 && leaf.ratio.is_finite()) {
                return Err(Error::Numerical(alloc::format!("leaf ratio {} out of range", leaf.ratio)));
            }
            at = leaf.end;
        }
        if at != self.covered {
            return Err(Error::Numerical(alloc::format!(
                "leaves end at {at}, expected {}",
                self.covered
            )));
        }
        Ok(())
    }

    pub fn max_ratio(&self) -> f64 {
        self.leaves.iter().map(|l| l.ratio).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Recursively halves intervals whose ratio is below `th`.
///
/// An interval becomes a leaf when its ratio reaches `th` or when its half
/// length drops below `min_len`.
pub fn build_ratio_curve(samples: &[f64], th: f64, min_len: usize) -> Result<RatioCurve> {
    if !(th > 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("threshold must exceed 1, got {th}")));
    }
    if min_len < 4 {
        return Err(Error::InvalidParameter(alloc::format!("min_len must be at least 4, got {min_len}")));
    }
    let covered = samples.len() - samples.len() % 2;
    if covered < 4 {
        return Err(Error::SegmentTooShort { len: samples.len() });
    }

    let mut leaves = Vec::new();
    // explicit stack, right half pushed first so leaves come out in time order
    let mut stack = alloc::vec![(0usize, covered)];
    while let Some((start, end)) = stack.pop() {
        let ratio = eigen_ratio(&samples[start..end])?;
        let half = (end - start) / 2;
        if ratio >= th || half < min_len {
            leaves.push(LeafInterval { start, end, ratio });
        } else {
            stack.push((start + half, end));
            stack.push((start, start + half));
        }
    }
    Ok(RatioCurve {
        leaves,
        threshold: th,
        covered,
    })
}

/// (VER, AUER) and their log images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub ver: f64,
    pub auer: f64,
    pub log_ver: f64,
    pub log_auer: f64,
}

impl FeatureVector {
    pub fn new(ver: f64, auer: f64) -> Self {
        FeatureVector {
            ver,
            auer,
            log_ver: ln(ver + LOG_EPSILON),
            log_auer: ln(auer + LOG_EPSILON),
        }
    }

    pub fn log_point(&self) -> [f64; 2] {
        [self.log_ver, self.log_auer]
    }
}

/// VER is the population variance of the leaf ratios; AUER is the area under
/// the step curve on the time axis normalized to [0, 1].
pub fn features(curve: &RatioCurve) -> Result<FeatureVector> {
    if curve.leaves.is_empty() || curve.covered == 0 {
        return Err(Error::InvalidParameter("empty ratio curve".into()));
    }
    let ratios: Vec<f64> = curve.leaves.iter().map(|l| l.ratio).collect();
    let total = curve.covered as f64;
    let auer = curve.leaves.iter().map(|l| l.ratio * l.len() as f64 / total).sum();
    Ok(FeatureVector::new(variance(&ratios), auer))
}
