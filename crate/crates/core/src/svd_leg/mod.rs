//! SVD leg: right singular vectors of the delay matrix, a binary image of
//! their scatter, and the Betti-number rule.

mod betti;
mod decompose;
mod raster;

pub use betti::{betti, despeckle, label_components, svd_label, BettiDescriptor, Components, Connectivity};
pub use decompose::{svd, top2_right_singular, SingularPair, Svd, RANK_TOLERANCE};
pub use raster::{rasterize, rasterize_points, BinaryImage, MIN_RESOLUTION};

pub const DEFAULT_RESOLUTION: usize = 128;
pub const DEFAULT_DILATION: usize = 1;
pub const DEFAULT_MIN_COMPONENT_FRACTION: f64 = 0.03;
pub const DEFAULT_MIN_HOLE_FRACTION: f64 = 0.006;

/// How the E1-E2 scatter is turned into an image before counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterConfig {
    pub resolution: usize,
    pub dilation: usize,
    /// Components below this fraction of the foreground area are dropped.
    pub min_component_fraction: f64,
    /// Enclosed holes below this fraction of the image area are filled.
    pub min_hole_fraction: f64,
}

impl Default for RasterConfig {
    fn default() -> Self {
        RasterConfig {
            resolution: DEFAULT_RESOLUTION,
            dilation: DEFAULT_DILATION,
            min_component_fraction: DEFAULT_MIN_COMPONENT_FRACTION,
            min_hole_fraction: DEFAULT_MIN_HOLE_FRACTION,
        }
    }
}

impl RasterConfig {
    /// Rasterized and despeckled image of a singular pair.
    pub fn image(&self, pair: &SingularPair) -> crate::Result<BinaryImage> {
        let raw = rasterize(pair, self.resolution, self.dilation)?;
        Ok(despeckle(&raw, self.min_component_fraction, self.min_hole_fraction))
    }
}
