//! Reference implementations shared by the oracle tests and the acceptance
//! suite.

use std::collections::{HashSet, VecDeque};

use stochastid_core::svd_leg::BettiDescriptor;

/// Counts components of pixels equal to `value` by breadth-first search.
/// Returns (components, components not touching the border).
pub fn flood(bits: &[bool], n: usize, value: bool, diagonal: bool) -> (usize, usize) {
    let mut seen = vec![false; n * n];
    let mut steps = vec![(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    if diagonal {
        steps.extend([(1, 1), (1, -1), (-1, 1), (-1, -1)]);
    }
    let (mut all, mut inner) = (0, 0);
    for start in 0..n * n {
        if seen[start] || bits[start] != value {
            continue;
        }
        all += 1;
        let mut border = false;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(p) = queue.pop_front() {
            let (x, y) = ((p % n) as i64, (p / n) as i64);
            if x == 0 || y == 0 || x == n as i64 - 1 || y == n as i64 - 1 {
                border = true;
            }
            for (dx, dy) in &steps {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= n as i64 || ny >= n as i64 {
                    continue;
                }
                let q = ny as usize * n + nx as usize;
                if !seen[q] && bits[q] == value {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        if !border {
            inner += 1;
        }
    }
    (all, inner)
}

pub fn oracle(bits: &[bool], n: usize) -> BettiDescriptor {
    let (b0, _) = flood(bits, n, true, true);
    let (_, b1) = flood(bits, n, false, false);
    BettiDescriptor::new(b0, b1)
}

/// V - E + F of the union of closed unit squares at the foreground pixels.
pub fn euler(bits: &[bool], n: usize) -> i64 {
    let mut vertices = HashSet::new();
    let mut edges = HashSet::new();
    let mut faces = 0i64;
    for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
        let (x, y) = (i % n, i / n);
        faces += 1;
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            vertices.insert((x + dx, y + dy));
        }
        edges.insert((x, y, 'h'));
        edges.insert((x, y + 1, 'h'));
        edges.insert((x, y, 'v'));
        edges.insert((x + 1, y, 'v'));
    }
    vertices.len() as i64 - edges.len() as i64 + faces
}
