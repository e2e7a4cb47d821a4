use alloc::vec;
use alloc::vec::Vec;

use super::ratio::{build_ratio_curve, features};
use crate::math::sqrt;
use crate::{Error, Result};

const KMEANS_ITERATIONS: usize = 100;
const KMEANS_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_GRID_START: f64 = 2.0;
pub const DEFAULT_GRID_END: f64 = 20.0;

/// Integer thresholds 2, 3, ..., 20.
pub fn default_grid() -> Vec<f64> {
    (DEFAULT_GRID_START as usize..=DEFAULT_GRID_END as usize)
        .map(|t| t as f64)
        .collect()
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    sqrt(dx * dx + dy * dy)
}

/// Two-cluster Lloyd iteration seeded at the componentwise min and max
/// corners of the point cloud. Returns the assignment (0 or 1) per point.
pub fn kmeans2(points: &[[f64; 2]]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut centres = [[f64::INFINITY; 2], [f64::NEG_INFINITY; 2]];
    for p in points {
        for d in 0..2 {
            centres[0][d] = centres[0][d].min(p[d]);
            centres[1][d] = centres[1][d].max(p[d]);
        }
    }
    let mut assign = vec![0usize; points.len()];
    for _ in 0..KMEANS_ITERATIONS {
        for (a, p) in assign.iter_mut().zip(points) {
            *a = usize::from(dist(p, &centres[1]) < dist(p, &centres[0]));
        }
        let mut next = centres;
        for (c, centre) in next.iter_mut().enumerate() {
            let members: Vec<&[f64; 2]> = points.iter().zip(&assign).filter(|(_, a)| **a == c).map(|(p, _)| p).collect();
            if members.is_empty() {
                continue;
            }
            let n = members.len() as f64;
            *centre = [
                members.iter().map(|p| p[0]).sum::<f64>() / n,
                members.iter().map(|p| p[1]).sum::<f64>() / n,
            ];
        }
        let shift = dist(&next[0], &centres[0]).max(dist(&next[1], &centres[1]));
        centres = next;
        if shift < KMEANS_TOLERANCE {
            break;
        }
    }
    for (a, p) in assign.iter_mut().zip(points) {
        *a = usize::from(dist(p, &centres[1]) < dist(p, &centres[0]));
    }
    assign
}

/// Mean silhouette over all points. Points in singleton clusters score 0; a
/// clustering with fewer than two nonempty clusters scores 0.
pub fn silhouette(points: &[[f64; 2]], assign: &[usize]) -> f64 {
    let clusters = assign.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; clusters];
    for &a in assign {
        sizes[a] += 1;
    }
    if sizes.iter().filter(|s| **s > 0).count() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        let own = assign[i];
        if sizes[own] < 2 {
            continue;
        }
        let mut sums = vec![0.0; clusters];
        for (j, q) in points.iter().enumerate() {
            if i != j {
                sums[assign[j]] += dist(p, q);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..clusters)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / points.len() as f64
}

/// Silhouette score of the log-feature cloud at one threshold.
pub fn threshold_score(series: &[&[f64]], th: f64, min_len: usize) -> Result<f64> {
    let points = series
        .iter()
        .map(|s| Ok(features(&build_ratio_curve(s, th, min_len)?)?.log_point()))
        .collect::<Result<Vec<_>>>()?;
    Ok(silhouette(&points, &kmeans2(&points)))
}

/// Picks the grid threshold whose K = 2 clustering of the log features has
/// the highest mean silhouette; ties go to the smallest threshold.
pub fn tune_threshold(series: &[&[f64]], grid: &[f64], min_len: usize) -> Result<(f64, Vec<(f64, f64)>)> {
    if series.len() < 4 {
        return Err(Error::InvalidParameter("tuning needs at least four series".into()));
    }
    if grid.is_empty() || grid.iter().any(|&th| !(th > 1.0)) {
        return Err(Error::InvalidParameter("threshold grid must be nonempty with values above 1".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let scores = sorted
        .iter()
        .map(|&th| Ok((th, threshold_score(series, th, min_len)?)))
        .collect::<Result<Vec<_>>>()?;
    let best = scores
        .iter()
        .fold(scores[0], |best, &cur| if cur.1 > best.1 { cur } else { best });
    Ok((best.0, scores))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid() {
        let g = default_grid();
        assert_eq!(g.len(), 19);
        assert_eq!((g[0], g[18]), (2.0, 20.0));
    }

    #[test]
    fn two_blobs() {
        let pts = [[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [5.0, 5.0], [5.1, 5.0], [5.0, 5.1]];
        let a = kmeans2(&pts);
        assert_eq!(a, vec![0, 0, 0, 1, 1, 1]);
        let s = silhouette(&pts, &a);
        assert!(s > 0.95 && s <= 1.0);
    }

    #[test]
    fn silhouette_hand_computed() {
        // 1-D on the x axis: {0, 1} and {4}
        let pts = [[0.0, 0.0], [1.0, 0.0], [4.0, 0.0]];
        let s = silhouette(&pts, &[0, 0, 1]);
        // s(0) = (4 - 1)/4, s(1) = (3 - 1)/3, singleton scores 0
        let expect = (0.75 + 2.0 / 3.0) / 3.0;
        assert!((s - expect).abs() < 1e-15);
    }

    #[test]
    fn degenerate_clusterings_score_zero() {
        let pts = [[1.0, 1.0]; 4];
        assert_eq!(silhouette(&pts, &kmeans2(&pts)), 0.0);
        assert_eq!(silhouette(&pts, &[0, 0, 0, 0]), 0.0);
    }

    #[test]
    fn tuning_errors() {
        let s: Vec<f64> = (0..512).map(|i| (i as f64).sin()).collect();
        assert!(tune_threshold(&[&s, &s, &s], &[9.0], 100).is_err());
        assert!(tune_threshold(&[&s, &s, &s, &s], &[], 100).is_err());
        assert!(tune_threshold(&[&s, &s, &s, &s], &[1.0, 9.0], 100).is_err());
    }
}
