//! Series and light-curve files.

use std::fs;
use std::io::Write;
use std::path::Path;

use stochastid_core::ingest::{parse_lightcurve, resample};
use stochastid_core::svd_leg::{BinaryImage, SingularPair};
use stochastid_core::{Source, TimeSeries};

use crate::error::{CliError, CliResult};

/// Parses a one-column CSV. A first line that is not a number is taken as a
/// header; every other line must hold exactly one number.
pub fn parse_series_csv(text: &str) -> CliResult<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::usage(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() != 1 {
            return Err(CliError::usage(format!(
                "line {line}: expected one column, found {}",
                record.len()
            )));
        }
        match record[0].parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(CliError::usage(format!("line {line}: `{}` is not a number", &record[0]))),
        }
    }
    Ok(values)
}

pub fn read_series_csv(path: &Path, dt: f64) -> CliResult<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    let values = parse_series_csv(&text)?;
    TimeSeries::new(values, dt, series_name(path), Source::File(path.display().to_string()))
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Reads a light-curve file and resamples it to a uniform grid.
pub fn read_lightcurve(path: &Path, dt: f64) -> CliResult<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    let lc = parse_lightcurve(&text, &path.display().to_string())
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let series = resample(&lc, dt)?;
    Ok(TimeSeries::new(
        series.into_samples(),
        dt,
        series_name(path),
        Source::File(lc.source_path),
    )?)
}

pub fn series_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// One-column CSV with a `value` header. `{}` formatting of f64 round-trips.
pub fn series_csv(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 20 + 6);
    out.push_str("value\n");
    for v in samples {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn pair_csv(pair: &SingularPair) -> String {
    let mut out = String::from("e1,e2\n");
    for (a, b) in pair.e1.iter().zip(&pair.e2) {
        out.push_str(&format!("{a},{b}\n"));
    }
    out
}

/// Binary PGM (P5), foreground black on white.
pub fn pgm(image: &BinaryImage) -> Vec<u8> {
    let r = image.resolution();
    let mut out = format!("P5\n{r} {r}\n255\n").into_bytes();
    out.extend(image.bits().iter().map(|&b| if b { 0u8 } else { 255u8 }));
    out
}

/// Writes to `path`, or to standard output for `-`.
pub fn write_output(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if path.as_os_str() == "-" {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::write(path, e));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::write(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        assert_eq!(parse_series_csv("value\n1\n2.5\n").unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_series_csv("1\r\n-2\r\n").unwrap(), vec![1.0, -2.0]);
        assert_eq!(parse_series_csv("3\n\n4\n").unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_series_csv("value\n1\nx\n").is_err());
        assert!(parse_series_csv("1,2\n").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let xs = [0.1, -1e-300, 12345.678901234567, f64::MIN_POSITIVE];
        assert_eq!(parse_series_csv(&series_csv(&xs)).unwrap(), xs);
    }

    #[test]
    fn pgm_layout() {
        let mut img = BinaryImage::new(64);
        img.set(1, 0, true);
        let bytes = pgm(&img);
        let header = b"P5\n64 64\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 64 * 64);
        assert_eq!(bytes[header.len() + 1], 0);
        assert_eq!(bytes[header.len()], 255);
    }
}
