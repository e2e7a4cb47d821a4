use alloc::vec;
use alloc::vec::Vec;

use crate::embedding::DataMatrix;
use crate::math::{dot, hypot, sqrt};
use crate::{Error, Result};

/// σ₂ below this fraction of σ₁ leaves E2 meaningless.
pub const RANK_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `D = U Σ Vᵀ` of an m×k matrix, singular values descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// Left singular vectors as columns of an m×m row-major matrix.
    pub u: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Right singular vectors, one per row (each of length k).
    pub vt: Vec<Vec<f64>>,
}

impl Svd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn left(&self, i: usize) -> Vec<f64> {
        let m = self.sigma.len();
        (0..m).map(|r| self.u[r * m + i]).collect()
    }
}

/// One-sided Jacobi SVD.
///
/// Rows of `D` are rotated pairwise until they are mutually orthogonal; the
/// rotated rows are then `σᵢ vᵢᵀ` and the accumulated rotations form `U`.
/// Each right singular vector is sign-fixed so its first nonzero component is
/// positive (the matching left vector flips with it).
pub fn svd(d: &DataMatrix) -> Svd {
    let m = d.rows();
    let k = d.cols();
    let mut rows: Vec<Vec<f64>> = (0..m).map(|r| d.row(r).to_vec()).collect();
    let mut u = vec![0.0; m * m];
    for i in 0..m {
        u[i * m + i] = 1.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha = dot(&rows[p], &rows[p]);
                let beta = dot(&rows[q], &rows[q]);
                let gamma = dot(&rows[p], &rows[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + hypot(1.0, zeta));
                let c = 1.0 / hypot(1.0, t);
                let s = c * t;
                let (lo, hi) = rows.split_at_mut(q);
                for (a, b) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
                for r in 0..m {
                    let (x, y) = (u[r * m + p], u[r * m + q]);
                    u[r * m + p] = c * x - s * y;
                    u[r * m + q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = rows.iter().enumerate().map(|(i, r)| (i, sqrt(dot(r, r)))).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut sorted_u = vec![0.0; m * m];
    let mut sigma = Vec::with_capacity(m);
    let mut vt = Vec::with_capacity(m);
    for (dst, &(src, s)) in order.iter().enumerate() {
        let mut v: Vec<f64> = if s > 0.0 {
            rows[src].iter().map(|x| x / s).collect()
        } else {
            vec![0.0; k]
        };
        let flip = v.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0);
        if flip {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        for r in 0..m {
            let val = u[r * m + src];
            sorted_u[r * m + dst] = if flip { -val } else { val };
        }
        sigma.push(s);
        vt.push(v);
    }
    Svd {
        u: sorted_u,
        sigma,
        vt,
    }
}

/// Top two right singular vectors of a data matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPair {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl SingularPair {
    /// Checks unit norms, orthogonality (both to `tol`) and ordering.
    pub fn check(&self, tol: f64) -> Result<()> {
        let n1 = sqrt(dot(&self.e1, &self.e1));
        let n2 = sqrt(dot(&self.e2, &self.e2));
        let cross = dot(&self.e1, &self.e2);
        if (n1 - 1.0).abs() > tol || (n2 - 1.0).abs() > tol || cross.abs() > tol {
            return Err(Error::Numerical(alloc::format!(
                "singular pair not orthonormal: |e1| = {n1}, |e2| = {n2}, e1.e2 = {cross:e}"
            )));
        }
        if !(self.sigma1 >= self.sigma2 && self.sigma2 >= 0.0) {
            return Err(Error::Numerical("singular values out of order".into()));
        }
        Ok(())
    }
}

pub fn top2_right_singular(d: &DataMatrix) -> Result<SingularPair> {
    if d.rows() < 2 || d.cols() < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "need at least a 2x2 data matrix, got {}x{}",
            d.rows(),
            d.cols()
        )));
    }
    let mut dec = svd(d);
    let (sigma1, sigma2) = (dec.sigma[0], dec.sigma[1]);
    if !(sigma2 >= RANK_TOLERANCE * sigma1) || sigma1 == 0.0 {
        return Err(Error::RankDeficient { sigma1, sigma2 });
    }
    let e2 = dec.vt.swap_remove(1);
    let e1 = dec.vt.swap_remove(0);
    Ok(SingularPair { e1, e2, sigma1, sigma2 })
}
