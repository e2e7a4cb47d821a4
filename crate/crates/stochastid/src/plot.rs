//! SVG emission for the E1-E2 scatter, the ratio curve and the feature
//! plane. Plain text, no plotting dependency.

use std::fmt::Write;

use stochastid_core::pca_leg::{LinearModel, RatioCurve};
use stochastid_core::svd_leg::SingularPair;
use stochastid_core::Label;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 50.0;

/// Affine map from a data range onto a pixel range.
#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn fit(values: impl IntoIterator<Item = f64>, px_lo: f64, px_hi: f64) -> Axis {
        let (mut lo, mut hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = (hi - lo) * 0.05;
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn frame(out: &mut String, x: Axis, y: Axis, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (x.px_lo, x.px_hi, y.px_hi, y.px_lo);
    let _ = writeln!(
        out,
        r#"<rect class="frame" x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{xlabel}</text>"#,
        (x0 + x1) / 2.0,
        y1 + 32.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{ylabel}</text>"#,
        x0 - 32.0,
        (y0 + y1) / 2.0,
        x0 - 32.0,
        (y0 + y1) / 2.0
    );
    for (v, px) in [(x.lo, x0), (x.hi, x1)] {
        let _ = writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" font-size="10" text-anchor="middle">{v:.3}</text>"#,
            y1 + 14.0
        );
    }
    for (v, py) in [(y.lo, y1), (y.hi, y0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{py:.1}" font-size="10" text-anchor="end">{v:.3}</text>"#,
            x0 - 4.0
        );
    }
}

/// Scatter of E1 against E2.
pub fn e1e2_svg(pair: &SingularPair, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, WIDTH);
    let x = Axis::fit(pair.e1.iter().copied(), MARGIN, WIDTH - MARGIN / 2.0);
    let y = Axis::fit(pair.e2.iter().copied(), WIDTH - MARGIN, MARGIN / 2.0);
    frame(&mut out, x, y, "E1", "E2");
    let _ = writeln!(out, r#"<text x="{:.1}" y="16" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(out, r#"<g class="points" fill="black">"#);
    for (a, b) in pair.e1.iter().zip(&pair.e2) {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="1"/>"#, x.map(*a), y.map(*b));
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Step curve of leaf ratios above the series itself, sharing the time axis.
pub fn ratio_svg(curve: &RatioCurve, samples: &[f64], title: &str) -> String {
    let height = 640.0;
    let mut out = String::new();
    header(&mut out, WIDTH, height);
    let _ = writeln!(out, r#"<text x="{:.1}" y="16" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));

    let n = curve.covered.max(1) as f64;
    let tx = |px_lo, px_hi| Axis {
        lo: 0.0,
        hi: 1.0,
        px_lo,
        px_hi,
    };
    let x = tx(MARGIN, WIDTH - MARGIN / 2.0);
    let ratios = curve.leaves.iter().map(|l| l.ratio).chain([1.0, curve.threshold]);
    let y = Axis::fit(ratios, 300.0, 40.0);
    frame(&mut out, x, y, "normalized time", "eigenvalue ratio");
    let _ = writeln!(
        out,
        r#"<line class="threshold" x1="{:.2}" y1="{th:.2}" x2="{:.2}" y2="{th:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        x.px_lo,
        x.px_hi,
        th = y.map(curve.threshold)
    );
    let mut prev: Option<(f64, f64)> = None;
    for leaf in &curve.leaves {
        let (x0, x1) = (x.map(leaf.start as f64 / n), x.map(leaf.end as f64 / n));
        let py = y.map(leaf.ratio);
        if let Some((px, pyy)) = prev {
            let _ = writeln!(
                out,
                r#"<line class="step" x1="{px:.2}" y1="{pyy:.2}" x2="{px:.2}" y2="{py:.2}" stroke="steelblue"/>"#
            );
        }
        let _ = writeln!(
            out,
            r#"<line class="leaf" x1="{x0:.2}" y1="{py:.2}" x2="{x1:.2}" y2="{py:.2}" stroke="steelblue" stroke-width="2"/>"#
        );
        prev = Some((x1, py));
    }

    let lower_x = tx(MARGIN, WIDTH - MARGIN / 2.0);
    let shown = &samples[..curve.covered.min(samples.len())];
    let ly = Axis::fit(shown.iter().copied(), height - MARGIN, 360.0);
    frame(&mut out, lower_x, ly, "normalized time", "value");
    let step = (shown.len() / 4000).max(1);
    let mut path = String::new();
    for (i, v) in shown.iter().enumerate().step_by(step) {
        let cmd = if path.is_empty() { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.2} {:.2} ", lower_x.map(i as f64 / n), ly.map(*v));
    }
    let _ = writeln!(out, r#"<path class="series" d="{}" fill="none" stroke="black" stroke-width="0.5"/>"#, path.trim_end());
    out.push_str("</svg>\n");
    out
}

/// One point to draw in the feature plane.
#[derive(Debug, Clone)]
pub struct FeaturePoint {
    pub name: String,
    pub log_ver: f64,
    pub log_auer: f64,
    pub label: Label,
}

/// Log-feature scatter with the classifier's separating line.
pub fn features_svg(points: &[FeaturePoint], model: &LinearModel, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, WIDTH);
    let _ = writeln!(out, r#"<text x="{:.1}" y="16" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let x = Axis::fit(points.iter().map(|p| p.log_ver), MARGIN, WIDTH - MARGIN / 2.0);
    let y = Axis::fit(points.iter().map(|p| p.log_auer), WIDTH - MARGIN, MARGIN / 2.0);
    frame(&mut out, x, y, "ln VER", "ln AUER");

    if let Some(((ax, ay), (bx, by))) = clip_line(model, x, y) {
        let _ = writeln!(
            out,
            r#"<line class="boundary" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red"/>"#,
            x.map(ax),
            y.map(ay),
            x.map(bx),
            y.map(by)
        );
    }
    for p in points {
        let (cx, cy) = (x.map(p.log_ver), y.map(p.log_auer));
        let colour = match p.label {
            Label::Stochastic => "royalblue",
            Label::NonStochastic => "darkorange",
            Label::Uncertain => "gray",
        };
        let _ = writeln!(
            out,
            r#"<circle class="point" cx="{cx:.2}" cy="{cy:.2}" r="4" fill="{colour}"><title>{} ({})</title></circle>"#,
            escape(&p.name),
            p.label.abbrev()
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Segment of `w·p + b = 0` inside the plotted box.
fn clip_line(model: &LinearModel, x: Axis, y: Axis) -> Option<((f64, f64), (f64, f64))> {
    let [w0, w1] = model.w;
    let b = model.b;
    let mut hits = Vec::new();
    if w1 != 0.0 {
        for xv in [x.lo, x.hi] {
            let yv = -(w0 * xv + b) / w1;
            if yv >= y.lo && yv <= y.hi {
                hits.push((xv, yv));
            }
        }
    }
    if w0 != 0.0 {
        for yv in [y.lo, y.hi] {
            let xv = -(w1 * yv + b) / w0;
            if xv >= x.lo && xv <= x.hi {
                hits.push((xv, yv));
            }
        }
    }
    hits.dedup();
    match hits.as_slice() {
        [a, b, ..] => Some((*a, *b)),
        _ => None,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
