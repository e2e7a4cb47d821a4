//! Seeded generators for the four synthetic families and the labelled corpus
//! built from them.
//!
//! Every generator is a pure function of its [`GeneratorSpec`]: the RNG is a
//! ChaCha8 stream seeded with `seed` on a per-family stream id, so the same
//! spec always yields the same samples.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fft::{fft, Complex, Direction};
use crate::math::{mean, sqrt, variance};
use crate::{Error, Label, Result, Source, TimeSeries};

pub const MIN_SAMPLES: usize = 256;
pub const DEFAULT_SAMPLES: usize = 16384;

pub const LOGISTIC_RATE: f64 = 4.0;
pub const LOGISTIC_TRANSIENT: usize = 100;

pub const LORENZ_SIGMA: f64 = 10.0;
pub const LORENZ_RHO: f64 = 28.0;
pub const LORENZ_BETA: f64 = 8.0 / 3.0;
pub const LORENZ_STEP: f64 = 0.01;
pub const LORENZ_TRANSIENT: usize = 1000;

pub const TRAIN_SIZE: usize = 27;
pub const VALIDATION_SIZE: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthKind {
    WhiteNoise,
    PinkNoise,
    LogisticMap,
    Lorenz,
}

impl SynthKind {
    pub const ALL: [SynthKind; 4] = [
        SynthKind::WhiteNoise,
        SynthKind::PinkNoise,
        SynthKind::LogisticMap,
        SynthKind::Lorenz,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            SynthKind::WhiteNoise => "white",
            SynthKind::PinkNoise => "pink",
            SynthKind::LogisticMap => "logistic",
            SynthKind::Lorenz => "lorenz",
        }
    }

    /// Ground-truth label of the family.
    pub fn label(self) -> Label {
        match self {
            SynthKind::WhiteNoise | SynthKind::PinkNoise => Label::Stochastic,
            SynthKind::LogisticMap | SynthKind::Lorenz => Label::NonStochastic,
        }
    }

    fn stream(self) -> u64 {
        match self {
            SynthKind::WhiteNoise => 1,
            SynthKind::PinkNoise => 2,
            SynthKind::LogisticMap => 3,
            SynthKind::Lorenz => 4,
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SynthKind::ALL
            .into_iter()
            .find(|k| k.slug() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown generator kind `{s}`")))
    }
}

/// Family-specific overrides. `Auto` draws everything from the seed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Params {
    #[default]
    Auto,
    /// Explicit initial condition of the logistic map.
    Logistic { x0: f64 },
    /// Explicit offset δ of the Lorenz start (1 + δ, 1, 1).
    Lorenz { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: SynthKind,
    pub n: usize,
    pub seed: u64,
    pub params: Params,
}

impl GeneratorSpec {
    pub fn new(kind: SynthKind, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            n,
            seed,
            params: Params::Auto,
        }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> String {
        format!("{}-{:04}", self.kind.slug(), self.seed)
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.kind.stream());
        rng
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<TimeSeries> {
    if spec.n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            spec.n
        )));
    }
    let (samples, dt) = match (spec.kind, spec.params) {
        (SynthKind::WhiteNoise, Params::Auto) => (white_noise(&mut spec.rng(), spec.n), 1.0),
        (SynthKind::PinkNoise, Params::Auto) => (pink_noise(&mut spec.rng(), spec.n), 1.0),
        (SynthKind::LogisticMap, Params::Auto) => {
            let x0 = spec.rng().random_range(0.01..0.99);
            (logistic_map(x0, spec.n)?, 1.0)
        }
        (SynthKind::LogisticMap, Params::Logistic { x0 }) => (logistic_map(x0, spec.n)?, 1.0),
        (SynthKind::Lorenz, Params::Auto) => {
            let delta = spec.rng().random_range(-0.1..0.1);
            (lorenz_x(delta, spec.n), LORENZ_STEP)
        }
        (SynthKind::Lorenz, Params::Lorenz { delta }) => (lorenz_x(delta, spec.n), LORENZ_STEP),
        (kind, params) => {
            return Err(Error::InvalidParameter(format!(
                "parameters {params:?} do not apply to {kind}"
            )))
        }
    };
    TimeSeries::new(samples, dt, spec.name(), Source::Synthetic(spec.kind))
}

fn white_noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Gaussian white noise shaped by 1/√f in the frequency domain (DC removed),
/// truncated to `n` samples and standardized.
fn pink_noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let len = n.next_power_of_two();
    let mut buf: Vec<Complex> = (0..len)
        .map(|_| Complex::new(rng.sample(StandardNormal), 0.0))
        .collect();
    fft(&mut buf, Direction::Forward);
    for (j, c) in buf.iter_mut().enumerate() {
        let f = j.min(len - j) as f64 / len as f64;
        *c = if j == 0 { Complex::default() } else { c.scale(1.0 / sqrt(f)) };
    }
    fft(&mut buf, Direction::Inverse);

    let mut out: Vec<f64> = buf[..n].iter().map(|c| c.re).collect();
    let mu = mean(&out);
    let sd = sqrt(variance(&out));
    for v in &mut out {
        *v = (*v - mu) / sd;
    }
    out
}

fn logistic_map(x0: f64, n: usize) -> Result<Vec<f64>> {
    if !(x0 > 0.0 && x0 < 1.0) || [0.25, 0.5, 0.75].contains(&x0) {
        return Err(Error::DegenerateSeed(x0));
    }
    let step = |x: f64| LOGISTIC_RATE * x * (1.0 - x);
    let mut x = x0;
    for _ in 0..LOGISTIC_TRANSIENT {
        x = step(x);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        x = step(x);
        out.push(x);
    }
    Ok(out)
}

fn lorenz_rhs(s: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = s;
    [
        LORENZ_SIGMA * (y - x),
        x * (LORENZ_RHO - z) - y,
        x * y - LORENZ_BETA * z,
    ]
}

fn rk4_step(s: [f64; 3], h: f64) -> [f64; 3] {
    let add = |a: [f64; 3], b: [f64; 3], k: f64| [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]];
    let k1 = lorenz_rhs(s);
    let k2 = lorenz_rhs(add(s, k1, h / 2.0));
    let k3 = lorenz_rhs(add(s, k2, h / 2.0));
    let k4 = lorenz_rhs(add(s, k3, h));
    let mut out = s;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn lorenz_x(delta: f64, n: usize) -> Vec<f64> {
    let mut s = [1.0 + delta, 1.0, 1.0];
    for _ in 0..LORENZ_TRANSIENT {
        s = rk4_step(s, LORENZ_STEP);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        s = rk4_step(s, LORENZ_STEP);
        out.push(s[0]);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub series: TimeSeries,
    pub label: Label,
    pub spec: GeneratorSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub train: Vec<LabeledSeries>,
    pub validation: Vec<LabeledSeries>,
}

impl Corpus {
    pub fn all(&self) -> impl Iterator<Item = &LabeledSeries> {
        self.train.iter().chain(&self.validation)
    }
}

pub fn default_train_seeds() -> Vec<u64> {
    (0..TRAIN_SIZE as u64).collect()
}

pub fn default_validation_seeds() -> Vec<u64> {
    (1000..1000 + VALIDATION_SIZE as u64).collect()
}

/// Builds the training corpus (white noise, then logistic map) and the
/// validation corpus (pink noise, then Lorenz). The first half of each seed
/// list, rounded up, goes to the stochastic family.
///
/// Sizes other than 27/14 are refused unless `allow_custom_sizes` is set.
pub fn make_corpus(
    train_seeds: &[u64],
    val_seeds: &[u64],
    n: usize,
    allow_custom_sizes: bool,
) -> Result<Corpus> {
    let sized = train_seeds.len() == TRAIN_SIZE && val_seeds.len() == VALIDATION_SIZE;
    if !sized && !allow_custom_sizes {
        return Err(Error::CorpusSize {
            train: train_seeds.len(),
            validation: val_seeds.len(),
        });
    }
    if train_seeds.len() < 2 || val_seeds.len() < 2 {
        return Err(Error::InvalidParameter("each split needs at least 2 series".into()));
    }
    let split = |seeds: &[u64], noise: SynthKind, chaos: SynthKind| -> Result<Vec<LabeledSeries>> {
        let cut = seeds.len().div_ceil(2);
        seeds
            .iter()
            .enumerate()
            .map(|(i, &seed)| {
                let kind = if i < cut { noise } else { chaos };
                let spec = GeneratorSpec::new(kind, n, seed);
                Ok(LabeledSeries {
                    series: generate(&spec)?,
                    label: kind.label(),
                    spec,
                })
            })
            .collect()
    };
    Ok(Corpus {
        train: split(train_seeds, SynthKind::WhiteNoise, SynthKind::LogisticMap)?,
        validation: split(val_seeds, SynthKind::PinkNoise, SynthKind::Lorenz)?,
    })
}
