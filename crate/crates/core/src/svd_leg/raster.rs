use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SingularPair;
use crate::math::round;
use crate::{Error, Result};

pub const MIN_RESOLUTION: usize = 64;

/// Square binary image, row-major, `true` = foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    resolution: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    pub fn new(resolution: usize) -> Self {
        BinaryImage {
            resolution,
            bits: vec![false; resolution * resolution],
        }
    }

    /// Builds an image from rows of equal length (any size; used by tests and
    /// fixtures, not restricted to square).
    pub fn from_rows(rows: &[&[bool]]) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParameter("image rows must form a square".into()));
        }
        Ok(BinaryImage {
            resolution: r,
            bits: rows.concat(),
        })
    }

    pub fn from_bits(resolution: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != resolution * resolution {
            return Err(Error::InvalidParameter(format!(
                "expected {} bits, got {}",
                resolution * resolution,
                bits.len()
            )));
        }
        Ok(BinaryImage { resolution, bits })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.resolution + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.resolution + x] = v;
    }

    pub fn foreground(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// Scatter of (e1ᵢ, e2ᵢ), each axis min-max scaled onto the pixel grid with a
/// margin of `dilation + 1`, every point stamped as a filled disc of radius
/// `dilation`. Points are not joined.
pub fn rasterize(pair: &SingularPair, resolution: usize, dilation: usize) -> Result<BinaryImage> {
    rasterize_points(&pair.e1, &pair.e2, resolution, dilation)
}

/// Same as [`rasterize`] for arbitrary coordinates. A single point lands in
/// the centre; two or more points with no spread on an axis are an error.
pub fn rasterize_points(xs: &[f64], ys: &[f64], resolution: usize, dilation: usize) -> Result<BinaryImage> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::InvalidParameter("need matching, non-empty coordinate lists".into()));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let pad = dilation + 1;
    if 2 * pad >= resolution {
        return Err(Error::InvalidParameter(format!(
            "dilation {dilation} leaves no room in a {resolution}px image"
        )));
    }
    let span = (resolution - 1 - 2 * pad) as f64;
    let to_pixels = |vals: &[f64]| -> Result<Vec<usize>> {
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if vals.len() == 1 {
            return Ok(vec![resolution / 2]);
        }
        if !(hi > lo) {
            return Err(Error::ZeroRange);
        }
        Ok(vals
            .iter()
            .map(|&v| round((v - lo) / (hi - lo) * span) as usize + pad)
            .collect())
    };
    let px = to_pixels(xs)?;
    let py = to_pixels(ys)?;

    let r = dilation as isize;
    let disc: Vec<(isize, isize)> = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|(dx, dy)| dx * dx + dy * dy <= r * r)
        .collect();

    let mut img = BinaryImage::new(resolution);
    for (&x, &y) in px.iter().zip(&py) {
        for &(dx, dy) in &disc {
            img.set((x as isize + dx) as usize, (y as isize + dy) as usize, true);
        }
    }
    Ok(img)
}
