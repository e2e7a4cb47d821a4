//! Plain-text light curves and their resampling onto a uniform grid.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{floor, round};
use crate::{Error, Result, Source, TimeSeries};

pub const DEFAULT_DT: f64 = 0.1;
/// Longest run of empty bins that is filled by interpolation.
pub const MAX_GAP_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct LightCurve {
    /// (time in seconds, rate in counts/s), times strictly increasing.
    pub rows: Vec<(f64, f64)>,
    pub source_path: String,
}

/// Parses whitespace- or comma-separated text. Lines starting with `#` or `!`
/// are comments; lines with fewer than two numeric tokens are skipped; the
/// first two numeric tokens of a line are (time, rate).
pub fn parse_lightcurve(text: &str, source_path: &str) -> Result<LightCurve> {
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.starts_with('#') || trimmed.starts_with('!') {
            continue;
        }
        let mut nums = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .filter_map(|t| t.parse::<f64>().ok());
        let (Some(t), Some(rate)) = (nums.next(), nums.next()) else {
            continue;
        };
        if !t.is_finite() {
            return Err(Error::NonMonotoneTime { line: line_no });
        }
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidRate { line: line_no });
        }
        if rows.last().is_some_and(|&(prev, _)| t <= prev) {
            return Err(Error::NonMonotoneTime { line: line_no });
        }
        rows.push((t, rate));
    }
    if rows.len() < 2 {
        return Err(Error::TooFewRows { rows: rows.len() });
    }
    Ok(LightCurve {
        rows,
        source_path: source_path.into(),
    })
}

/// Mean rate per bin of width `dt` on the grid t₀, t₀ + dt, ...; bin j
/// collects timestamps nearest to t₀ + j·dt. Runs of up to
/// [`MAX_GAP_BINS`] empty bins are linearly interpolated.
pub fn resample(lc: &LightCurve, dt: f64) -> Result<TimeSeries> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("dt must be positive, got {dt}")));
    }
    if lc.rows.len() < 2 {
        return Err(Error::TooFewRows { rows: lc.rows.len() });
    }
    let t0 = lc.rows[0].0;
    let t_last = lc.rows[lc.rows.len() - 1].0;
    // the small offset keeps grids like 0, 0.1, 0.2 from losing their last bin
    let len = floor((t_last - t0) / dt + 1e-9) as usize + 1;
    if len < 2 {
        return Err(Error::SpanTooShort);
    }

    let mut sums = vec![0.0; len];
    let mut counts = vec![0usize; len];
    for &(t, rate) in &lc.rows {
        let j = (round((t - t0) / dt) as usize).min(len - 1);
        sums[j] += rate;
        counts[j] += 1;
    }
    let mut values: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { f64::NAN })
        .collect();

    let mut j = 0;
    while j < len {
        if counts[j] > 0 {
            j += 1;
            continue;
        }
        let start = j;
        while j < len && counts[j] == 0 {
            j += 1;
        }
        let run = j - start;
        if run > MAX_GAP_BINS {
            return Err(Error::GapTooLarge {
                start,
                len: run,
                limit: MAX_GAP_BINS,
            });
        }
        // first and last bins always hold a sample, so both neighbours exist
        let (lo, hi) = (values[start - 1], values[j]);
        for (step, v) in values[start..j].iter_mut().enumerate() {
            let f = (step + 1) as f64 / (run + 1) as f64;
            *v = lo + (hi - lo) * f;
        }
    }

    let name = lc
        .source_path
        .rsplit(['/', '\\'])
        .next()
        .unwrap_or(&lc.source_path);
    TimeSeries::new(values, dt, name, Source::File(lc.source_path.clone()))
}
