use alloc::vec;
use alloc::vec::Vec;

use super::BinaryImage;
use crate::{Error, Label, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

/// Component labels of the pixels equal to `value`, numbered from 1 in
/// raster order of their first pixel; other pixels get 0.
#[derive(Debug, Clone)]
pub struct Components {
    pub labels: Vec<u32>,
    /// Pixel count per label (index 0 unused).
    pub sizes: Vec<usize>,
    /// Whether the component reaches the image border (index 0 unused).
    pub touches_border: Vec<bool>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len() - 1
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Two-pass union-find labelling.
pub fn label_components(image: &BinaryImage, value: bool, connectivity: Connectivity) -> Components {
    let n = image.resolution();
    let bits = image.bits();
    let mut provisional = vec![0u32; n * n];
    let mut parent: Vec<u32> = vec![0];

    // already-visited neighbours in raster order
    let back: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(-1, 0), (0, -1)],
        Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
    };

    for y in 0..n {
        for x in 0..n {
            if bits[y * n + x] != value {
                continue;
            }
            let mut label = 0u32;
            for &(dx, dy) in back {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= n as isize {
                    continue;
                }
                let l = provisional[ny as usize * n + nx as usize];
                if l == 0 {
                    continue;
                }
                if label == 0 {
                    label = l;
                } else {
                    union(&mut parent, label, l);
                }
            }
            if label == 0 {
                label = parent.len() as u32;
                parent.push(label);
            }
            provisional[y * n + x] = label;
        }
    }

    let mut remap = vec![0u32; parent.len()];
    let mut sizes = vec![0usize];
    let mut touches_border = vec![false];
    let mut labels = provisional;
    for (i, l) in labels.iter_mut().enumerate() {
        if *l == 0 {
            continue;
        }
        let root = find(&mut parent, *l) as usize;
        if remap[root] == 0 {
            remap[root] = sizes.len() as u32;
            sizes.push(0);
            touches_border.push(false);
        }
        let id = remap[root];
        *l = id;
        sizes[id as usize] += 1;
        let (x, y) = (i % n, i / n);
        if x == 0 || y == 0 || x == n - 1 || y == n - 1 {
            touches_border[id as usize] = true;
        }
    }
    Components {
        labels,
        sizes,
        touches_border,
    }
}

/// Betti numbers of a binary image and their L1 norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BettiDescriptor {
    pub b0: usize,
    pub b1: usize,
    pub norm: usize,
}

impl BettiDescriptor {
    pub fn new(b0: usize, b1: usize) -> Self {
        BettiDescriptor { b0, b1, norm: b0 + b1 }
    }
}

/// b0 counts 8-connected foreground components; b1 counts 4-connected
/// background components that do not reach the border.
pub fn betti(image: &BinaryImage) -> Result<BettiDescriptor> {
    if image.foreground() == 0 {
        return Err(Error::EmptyImage);
    }
    let fg = label_components(image, true, Connectivity::Eight);
    let bg = label_components(image, false, Connectivity::Four);
    let holes = bg.touches_border.iter().skip(1).filter(|t| !**t).count();
    Ok(BettiDescriptor::new(fg.count(), holes))
}

/// Drops foreground components smaller than `min_component_fraction` of the
/// foreground area, then fills enclosed holes smaller than
/// `min_hole_fraction` of the image area.
///
/// The largest component is always kept, so a nonempty image stays nonempty.
pub fn despeckle(image: &BinaryImage, min_component_fraction: f64, min_hole_fraction: f64) -> BinaryImage {
    let n = image.resolution();
    let total = image.foreground() as f64;
    let fg = label_components(image, true, Connectivity::Eight);
    let largest = fg.sizes.iter().copied().max().unwrap_or(0);
    let keep: Vec<bool> = fg
        .sizes
        .iter()
        .map(|&s| s > 0 && (s as f64 >= min_component_fraction * total || s == largest))
        .collect();
    let mut bits: Vec<bool> = fg.labels.iter().map(|&l| l != 0 && keep[l as usize]).collect();

    let cleaned = BinaryImage::from_bits(n, bits.clone()).expect("same size");
    let bg = label_components(&cleaned, false, Connectivity::Four);
    let hole_floor = min_hole_fraction * (n * n) as f64;
    for (bit, &l) in bits.iter_mut().zip(&bg.labels) {
        if l != 0 && !bg.touches_border[l as usize] && (bg.sizes[l as usize] as f64) < hole_floor {
            *bit = true;
        }
    }
    BinaryImage::from_bits(n, bits).expect("same size")
}

/// Norm 1 (one blob, no voids) is stochastic; anything larger is not.
pub fn svd_label(descriptor: &BettiDescriptor) -> Result<Label> {
    match descriptor.norm {
        0 => Err(Error::EmptyImage),
        1 => Ok(Label::Stochastic),
        _ => Ok(Label::NonStochastic),
    }
}
