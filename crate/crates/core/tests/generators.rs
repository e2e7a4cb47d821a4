//! Statistical checks on the synthetic families and on lag selection.

use stochastid_core::embedding::{autocorrelation, estimate_tau};
use stochastid_core::synth::{generate, GeneratorSpec, Params, SynthKind};
use stochastid_core::Error;

const N: usize = 16384;

fn series(kind: SynthKind, seed: u64) -> Vec<f64> {
    generate(&GeneratorSpec::new(kind, N, seed)).unwrap().into_samples()
}

fn mean_sd(z: &[f64]) -> (f64, f64) {
    let mu = z.iter().sum::<f64>() / z.len() as f64;
    let var = z.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / z.len() as f64;
    (mu, var.sqrt())
}

#[test]
fn white_noise_is_centred_and_uncorrelated() {
    for seed in 0..100 {
        let z = series(SynthKind::WhiteNoise, seed);
        let (mu, sd) = mean_sd(&z);
        assert!(mu.abs() < 0.05 * sd, "seed {seed}: mean {mu}");
        let rho = autocorrelation(&z, 1).unwrap();
        assert!(rho[1].abs() < 0.05, "seed {seed}: rho(1) {}", rho[1]);
    }
}

#[test]
fn white_noise_acf_vanishes_up_to_lag_50() {
    let z = series(SynthKind::WhiteNoise, 7);
    let rho = autocorrelation(&z, 50).unwrap();
    assert!((rho[0] - 1.0).abs() < 1e-12);
    for (lag, r) in rho.iter().enumerate().skip(1) {
        assert!(r.abs() < 0.05, "lag {lag}: {r}");
    }
}

#[test]
fn pink_noise_spectrum_falls_as_one_over_f() {
    let mut planner = rustfft::FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(N);
    let mut power = vec![0.0; N / 2];
    for seed in 0..20 {
        let z = series(SynthKind::PinkNoise, seed);
        assert_eq!(z.len(), N);
        let mut buf: Vec<rustfft::num_complex::Complex<f64>> =
            z.iter().map(|&v| rustfft::num_complex::Complex::new(v, 0.0)).collect();
        fft.process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf) {
            *p += c.norm_sqr();
        }
    }
    let pts: Vec<(f64, f64)> = (1..N / 2).map(|k| ((k as f64).ln(), power[k].ln())).collect();
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (mx / pts.len() as f64, my / pts.len() as f64);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!(slope > -1.3 && slope < -0.7, "slope {slope}");
}

#[test]
fn pink_noise_is_standardized() {
    let (mu, sd) = mean_sd(&series(SynthKind::PinkNoise, 3));
    assert!(mu.abs() < 1e-12 && (sd - 1.0).abs() < 1e-9, "{mu} {sd}");
}

#[test]
fn logistic_orbit_stays_in_unit_interval() {
    for seed in 0..10 {
        let z = series(SynthKind::LogisticMap, seed);
        assert!(z.iter().all(|v| *v > 0.0 && *v < 1.0), "seed {seed}");
    }
    let z = generate(&GeneratorSpec::new(SynthKind::LogisticMap, 512, 0).with_params(Params::Logistic { x0: 0.2 }))
        .unwrap()
        .into_samples();
    for w in z.windows(2) {
        assert_eq!(w[1], 4.0 * w[0] * (1.0 - w[0]));
    }
    for x0 in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let spec = GeneratorSpec::new(SynthKind::LogisticMap, 512, 0).with_params(Params::Logistic { x0 });
        assert!(matches!(generate(&spec), Err(Error::DegenerateSeed(_))), "x0 {x0}");
    }
}

#[test]
fn lorenz_stays_on_the_attractor() {
    for seed in 0..5 {
        let z = series(SynthKind::Lorenz, seed);
        assert!(z.iter().all(|v| v.is_finite() && v.abs() <= 30.0), "seed {seed}");
    }
}

#[test]
fn generation_is_reproducible_and_seed_dependent() {
    for kind in SynthKind::ALL {
        assert_eq!(series(kind, 11), series(kind, 11));
        assert_ne!(series(kind, 11), series(kind, 12), "{kind}");
    }
}

#[test]
fn white_noise_lag_is_one() {
    for seed in 0..100 {
        assert_eq!(estimate_tau(&series(SynthKind::WhiteNoise, seed)).unwrap(), 1, "seed {seed}");
    }
}

#[test]
fn sine_lag_is_a_quarter_period() {
    let z: Vec<f64> = (0..4000).map(|i| (2.0 * std::f64::consts::PI * i as f64 / 40.0).sin()).collect();
    let tau = estimate_tau(&z).unwrap();
    assert!(tau == 10 || tau == 11, "tau {tau}");
}

#[test]
fn alternating_series() {
    let z: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let rho = autocorrelation(&z, 1).unwrap();
    assert!((rho[1] + 999.0 / 1000.0).abs() < 1e-12);
    assert_eq!(estimate_tau(&z).unwrap(), 1);
    assert_eq!(estimate_tau(&[2.0; 100]), Err(Error::DegenerateSeries));
}
