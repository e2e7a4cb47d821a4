use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

/// Labels NS exactly when VER > 10; keeps these tests independent of training.
fn fixture_model() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/ver_threshold_model.json")
}

fn stochastid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochastid"))
        .args(args)
        .env_remove("STOCHASTID_MODEL")
        .output()
        .expect("binary runs")
}

fn generate(dir: &Path, kind: &str, n: usize, seed: u64) -> PathBuf {
    let path = dir.join(format!("{kind}-{seed}.csv"));
    let out = stochastid(&[
        "generate",
        "--kind",
        kind,
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn analyze(input: &Path) -> Value {
    let out = stochastid(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--model",
        fixture_model().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "white", 1024, 42);
    let first = std::fs::read(&a).unwrap();
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 1025);
    let b = generate(dir.path(), "white", 1024, 42);
    assert_eq!(first, std::fs::read(b).unwrap());
}

#[test]
fn generate_rejects_unknown_kind() {
    let out = stochastid(&["generate", "--kind", "brown", "--n", "1024"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn short_series_fails_in_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.csv");
    let body: String = (0..50).map(|i| format!("{}\n", (i as f64 * 0.7).sin())).collect();
    std::fs::write(&path, body).unwrap();
    let out = stochastid(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--model",
        fixture_model().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("embedding"));
}

#[test]
fn analyze_without_model_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "white", 2048, 1);
    let out = stochastid(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_reports_white_noise_and_lorenz() {
    let dir = tempfile::tempdir().unwrap();
    let white = analyze(&generate(dir.path(), "white", 16384, 0));
    assert_eq!(white["schema"], 1);
    assert_eq!(white["n"], 16384);
    assert_eq!(white["betti"]["norm"], 1);
    assert_eq!(white["final_label"], "Stochastic");

    let lorenz = analyze(&generate(dir.path(), "lorenz", 16384, 0));
    assert!(lorenz["betti"]["norm"].as_u64().unwrap() > 1);
    assert_eq!(lorenz["final_label"], "NonStochastic");
    for key in ["ver", "auer", "svm_margin"] {
        assert!(lorenz[key].as_f64().unwrap().is_finite());
    }
}

#[test]
fn model_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "white", 4096, 3);
    let out = Command::new(env!("CARGO_BIN_EXE_stochastid"))
        .args(["analyze", "--input", path.to_str().unwrap()])
        .env("STOCHASTID_MODEL", fixture_model())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["n"], 4096);
}

#[test]
fn analyze_writes_the_image() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "logistic", 4096, 0);
    let image = dir.path().join("img/logistic.pgm");
    let out = stochastid(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--model",
        fixture_model().to_str().unwrap(),
        "--image",
        image.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(image).unwrap();
    assert!(bytes.starts_with(b"P5\n128 128\n255\n"));
    assert_eq!(bytes.len(), b"P5\n128 128\n255\n".len() + 128 * 128);
}

#[test]
fn e1e2_plot_has_one_row_per_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "lorenz", 4096, 2);
    let svg = dir.path().join("e1e2.svg");
    let out = stochastid(&["plot", "--what", "e1e2", "--input", path.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = analyze(&path);
    let k = report["k"].as_u64().unwrap() as usize;
    let csv = std::fs::read_to_string(svg.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("e1,e2"));
    assert_eq!(lines.count(), k);
    let text = std::fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("<circle").count(), k);
}

#[test]
fn ratio_plot_is_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "pink", 4096, 2);
    let svg = dir.path().join("ratio.svg");
    let out = stochastid(&[
        "plot",
        "--what",
        "ratio",
        "--input",
        path.to_str().unwrap(),
        "--th",
        "9",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains(r#"class="leaf""#));
}

#[test]
fn features_plot_needs_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let white = generate(dir.path(), "white", 4096, 0);
    let lorenz = generate(dir.path(), "lorenz", 4096, 0);
    let svg = dir.path().join("f.svg");
    let args = [
        "plot",
        "--what",
        "features",
        "--input",
        white.to_str().unwrap(),
        lorenz.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ];
    assert_eq!(stochastid(&args).status.code(), Some(2));

    let model = fixture_model();
    let mut with_model = args.to_vec();
    with_model.extend(["--model", model.to_str().unwrap()]);
    assert!(stochastid(&with_model).status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.contains(r#"class="boundary""#));
    assert_eq!(text.matches(r#"class="point""#).count(), 2);
}

#[test]
fn ingest_resamples_light_curves() {
    let dir = tempfile::tempdir().unwrap();
    let lc = dir.path().join("obs.lc");
    let mut text = String::from("# TIME RATE\n");
    for i in 0..300 {
        if (100..105).contains(&i) {
            continue;
        }
        text.push_str(&format!("{:.3} {}\n", 1000.0 + i as f64 * 0.1, 50 + i % 7));
    }
    std::fs::write(&lc, text).unwrap();
    let csv = dir.path().join("obs.csv");
    let out = stochastid(&["ingest", "--input", lc.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(csv).unwrap();
    assert_eq!(body.lines().count(), 301);

    std::fs::write(&lc, "0 1\n0.1 2\n5.0 3\n").unwrap();
    let out = stochastid(&["ingest", "--input", lc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_tau_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "white", 2048, 0);
    let model = fixture_model();
    let out = stochastid(&["analyze", "--input", path.to_str().unwrap(), "--model", model.to_str().unwrap(), "--tau", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
