//! Synthetic feature fields with known spectral structure, plus per-scene
//! fixture suites with injected diagnostic/quality relationships.
//!
//! Randomness comes from `ChaCha8Rng`; every channel (and every scene) draws
//! from its own stream derived from the user seed, so output does not depend
//! on evaluation order.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::DiagnosticsConfig;
use crate::diagnostics::{diagnose_pair, SpectralError};
use crate::feature::FeatureMap;
use crate::records::{Diagnostic, DiagnosticsRecord, ProbeMode, SceneRecord};
use crate::spectrum::Fft2;
use crate::upsample::{upsample, UpsampleError, UpsampleKind, UpsampleMethod};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synthesis spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Upsample(#[from] UpsampleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SynthKind {
    /// Random-phase field whose power falls off as `r^-beta`.
    PowerLaw {
        beta: f64,
    },
    /// Real sinusoid at orientation `angle` (radians, `[0, pi)`) and `freq` cycles/sample.
    Grating {
        angle: f64,
        freq: f64,
    },
    /// I.i.d. standard normal samples.
    WhiteNoise,
    Constant {
        value: f32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(flatten)]
    pub kind: SynthKind,
    pub size: usize,
    pub channels: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn power_law(beta: f64, size: usize, channels: usize, seed: u64) -> Self {
        Self {
            kind: SynthKind::PowerLaw { beta },
            size,
            channels,
            seed,
        }
    }

    /// Grating spec; `angle` is folded into `[0, pi)` since orientation is mod pi.
    pub fn grating(angle: f64, freq: f64, size: usize, channels: usize, seed: u64) -> Self {
        Self {
            kind: SynthKind::Grating {
                angle: angle.rem_euclid(PI),
                freq,
            },
            size,
            channels,
            seed,
        }
    }

    pub fn white_noise(size: usize, channels: usize, seed: u64) -> Self {
        Self {
            kind: SynthKind::WhiteNoise,
            size,
            channels,
            seed,
        }
    }

    pub fn constant(value: f32, size: usize, channels: usize) -> Self {
        Self {
            kind: SynthKind::Constant { value },
            size,
            channels,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.size < 4 {
            return bad(format!("size must be >= 4 (got {})", self.size));
        }
        if self.channels < 1 {
            return bad("channels must be >= 1".into());
        }
        match self.kind {
            SynthKind::PowerLaw { beta } if !(beta >= 0.0 && beta.is_finite()) => {
                bad(format!("beta must be finite and >= 0 (got {beta})"))
            }
            SynthKind::Grating { angle, .. } if !(0.0..PI).contains(&angle) => {
                bad(format!("angle must lie in [0, pi) (got {angle})"))
            }
            SynthKind::Grating { freq, .. } if !(freq > 0.0 && freq < 0.5) => {
                bad(format!("freq must lie in (0, 0.5) (got {freq})"))
            }
            SynthKind::Constant { value } if !value.is_finite() => {
                bad("value must be finite".into())
            }
            _ => Ok(()),
        }
    }
}

/// SplitMix64 finalizer; derives independent stream seeds.
fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, stream))
}

/// Signed frequency index of unshifted DFT index `k` on an axis of length `n`.
fn signed_index(k: usize, n: usize) -> f64 {
    if k >= n.div_ceil(2) {
        k as f64 - n as f64
    } else {
        k as f64
    }
}

/// Inverse-transformed power-law channel before truncation to `f32`:
/// returns the complex spatial samples (imaginary parts should vanish).
pub(crate) fn power_law_complex(n: usize, beta: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut spec = vec![Complex64::new(0.0, 0.0); n * n];
    for ky in 0..n {
        for kx in 0..n {
            let idx = ky * n + kx;
            let partner = ((n - ky) % n) * n + (n - kx) % n;
            if idx == 0 || idx > partner {
                continue;
            }
            let (fy, fx) = (
                signed_index(ky, n) / n as f64,
                signed_index(kx, n) / n as f64,
            );
            let amp = (fx * fx + fy * fy).sqrt().powf(-beta / 2.0);
            if idx == partner {
                // self-conjugate (Nyquist) point must be real
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                spec[idx] = Complex64::new(sign * amp, 0.0);
            } else {
                let z = Complex64::from_polar(amp, rng.random::<f64>() * TAU);
                spec[idx] = z;
                spec[partner] = z.conj();
            }
        }
    }
    Fft2::new(n, n, FftDirection::Inverse).process(&mut spec);
    let scale = 1.0 / (n * n) as f64;
    spec.iter_mut().for_each(|z| *z *= scale);
    spec
}

fn unit_rms(plane: &[f64]) -> Vec<f32> {
    let rms = (plane.iter().map(|v| v * v).sum::<f64>() / plane.len() as f64).sqrt();
    let s = if rms > 0.0 { 1.0 / rms } else { 1.0 };
    plane.iter().map(|v| (v * s) as f32).collect()
}

/// Generates the field described by `spec`. Identical specs give bit-identical maps.
///
/// Power-law fields are scaled to unit RMS per channel; scaling does not
/// affect any of the diagnostics.
pub fn generate(spec: &SynthSpec) -> Result<FeatureMap, SynthError> {
    spec.validate()?;
    let n = spec.size;
    if let SynthKind::Constant { value } = spec.kind {
        return Ok(FeatureMap::filled(n, n, spec.channels, value).expect("validated shape"));
    }
    let planes: Vec<Vec<f32>> = (0..spec.channels)
        .map(|c| {
            let mut rng = stream_rng(spec.seed, c as u64);
            match spec.kind {
                SynthKind::PowerLaw { beta } => {
                    let z = power_law_complex(n, beta, &mut rng);
                    unit_rms(&z.iter().map(|v| v.re).collect::<Vec<_>>())
                }
                SynthKind::Grating { angle, freq } => {
                    let phase = rng.random::<f64>() * TAU;
                    let (fu, fv) = (freq * angle.cos(), freq * angle.sin());
                    (0..n * n)
                        .map(|k| {
                            let (y, x) = ((k / n) as f64, (k % n) as f64);
                            (TAU * (fu * x + fv * y) + phase).cos() as f32
                        })
                        .collect()
                }
                SynthKind::WhiteNoise => (0..n * n)
                    .map(|_| rng.sample::<f64, _>(StandardNormal) as f32)
                    .collect(),
                SynthKind::Constant { .. } => unreachable!(),
            }
        })
        .collect();
    Ok(FeatureMap::from_planes(n, n, &planes).expect("validated shape"))
}

/// Which diagnostic/metric relationship a scene suite injects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SceneRelation {
    SscDrivesPsnr,
    AdcDrivesRpe,
    NoiseOnly,
}

impl fmt::Display for SceneRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            SceneRelation::SscDrivesPsnr => "ssc-drives-psnr",
            SceneRelation::AdcDrivesRpe => "adc-drives-rpe",
            SceneRelation::NoiseOnly => "noise-only",
        })
    }
}

impl FromStr for SceneRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ssc-drives-psnr" => Ok(SceneRelation::SscDrivesPsnr),
            "adc-drives-rpe" => Ok(SceneRelation::AdcDrivesRpe),
            "noise-only" => Ok(SceneRelation::NoiseOnly),
            _ => Err(format!("unknown scene relation `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub n_scenes: usize,
    pub relation: SceneRelation,
    /// Noise standard deviation as a multiple of the driving diagnostic's
    /// cross-scene standard deviation. Zero gives an exact monotone relation.
    pub noise: f64,
    pub seed: u64,
    pub lr_size: usize,
    pub hr_size: usize,
    pub channels: usize,
}

impl SuiteSpec {
    pub fn new(n_scenes: usize, relation: SceneRelation, noise: f64, seed: u64) -> Self {
        Self {
            n_scenes,
            relation,
            noise,
            seed,
            lr_size: 16,
            hr_size: 64,
            channels: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneFixture {
    pub scene_id: String,
    pub lr: FeatureMap,
    pub hr: FeatureMap,
    pub method: UpsampleMethod,
    pub diagnostics: DiagnosticsRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSuite {
    pub scenes: Vec<SceneFixture>,
    pub metrics: Vec<SceneRecord>,
    /// Human-readable statement of how the metrics were derived.
    pub construction: String,
}

fn sample_sd(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 1.0;
    }
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd > 0.0 {
        sd
    } else {
        1.0
    }
}

fn scene_fixture(
    index: usize,
    spec: &SuiteSpec,
    cfg: &DiagnosticsConfig,
) -> Result<SceneFixture, SynthError> {
    let scene_id = format!("scene{index:03}");
    let mut rng = stream_rng(spec.seed, 1_000_000 + index as u64);
    let base = generate(&SynthSpec::power_law(
        rng.random_range(0.5..3.0),
        spec.lr_size,
        spec.channels,
        rng.random(),
    ))?;
    let grating = generate(&SynthSpec::grating(
        rng.random_range(0.0..PI),
        rng.random_range(0.1..0.4),
        spec.lr_size,
        spec.channels,
        rng.random(),
    ))?;
    let lr = base
        .axpby(1.0, &grating, rng.random_range(0.0..2.0))
        .expect("same shape");
    let kind = UpsampleKind::ALL[rng.random_range(0..UpsampleKind::ALL.len())];
    let method = UpsampleMethod::new(kind);
    let hr = upsample(&lr, &method, spec.hr_size, spec.hr_size)?;
    let mut diagnostics = diagnose_pair(&lr, &hr, cfg)?;
    diagnostics.lr_id = format!("{scene_id}_lr");
    diagnostics.hr_id = format!("{scene_id}_hr_{kind}");
    Ok(SceneFixture {
        scene_id,
        lr,
        hr,
        method,
        diagnostics,
    })
}

/// Builds `n_scenes` LR/HR pairs, diagnoses them, and derives scene metrics
/// from the chosen relation.
pub fn make_scene_suite(
    spec: &SuiteSpec,
    cfg: &DiagnosticsConfig,
) -> Result<SceneSuite, SynthError> {
    if spec.n_scenes < 3 {
        return Err(SynthError::InvalidSpec(format!(
            "need at least 3 scenes (got {})",
            spec.n_scenes
        )));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(SynthError::InvalidSpec(format!(
            "noise must be >= 0 (got {})",
            spec.noise
        )));
    }
    if spec.hr_size < spec.lr_size {
        return Err(SynthError::InvalidSpec("hr_size must be >= lr_size".into()));
    }
    let scenes = (0..spec.n_scenes)
        .map(|i| scene_fixture(i, spec, cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let driver = match spec.relation {
        SceneRelation::SscDrivesPsnr => Some(Diagnostic::Ssc),
        SceneRelation::AdcDrivesRpe => Some(Diagnostic::Adc),
        SceneRelation::NoiseOnly => None,
    };
    // undefined driver values fall back to the mean of the defined ones
    let raw: Vec<Option<f64>> = scenes
        .iter()
        .map(|s| driver.and_then(|d| s.diagnostics.get(d)))
        .collect();
    let defined: Vec<f64> = raw.iter().flatten().copied().collect();
    let fallback = if defined.is_empty() {
        0.0
    } else {
        defined.iter().sum::<f64>() / defined.len() as f64
    };
    let sd = sample_sd(&defined);
    let drive: Vec<f64> = raw.iter().map(|v| v.unwrap_or(fallback)).collect();

    let mut rng = stream_rng(spec.seed, u64::MAX);
    let noise = spec.noise * sd;
    let mut z = move || noise * rng.sample::<f64, _>(StandardNormal);
    let mut u = {
        let mut rng = stream_rng(spec.seed, u64::MAX - 1);
        move |lo: f64, hi: f64| rng.random_range(lo..hi)
    };

    let mut metrics = Vec::new();
    let record = |scene: &str, mode, psnr, ssim, lpips, rpe| SceneRecord {
        scene_id: scene.to_string(),
        probe_mode: mode,
        psnr,
        ssim,
        lpips,
        rpe_mean: rpe,
    };
    let construction = match spec.relation {
        SceneRelation::SscDrivesPsnr => {
            for (s, &d) in scenes.iter().zip(&drive) {
                let psnr = 10.0 * (d + z()) + 2.0;
                let ssim = (0.5 + 0.2 * (d + z())).clamp(0.0, 1.0);
                let lpips = (0.25 * (1.0 - d - z()) + 0.05).max(0.0);
                metrics.push(record(&s.scene_id, ProbeMode::All, psnr, ssim, lpips, None));
            }
            format!(
                "mode A; psnr = 10*(ssc + e) + 2; ssim = clamp(0.5 + 0.2*(ssc + e), 0, 1); \
                 lpips = max(0, 0.25*(1 - ssc - e) + 0.05); e ~ N(0, ({} * sd(ssc))^2), independent per use",
                spec.noise
            )
        }
        SceneRelation::AdcDrivesRpe => {
            for (s, &d) in scenes.iter().zip(&drive) {
                let rpe = (2.0 + 20.0 * (1.0 - d + z())).max(0.0);
                let (p, q, l) = (u(18.0, 26.0), u(0.5, 0.9), u(0.05, 0.4));
                metrics.push(record(&s.scene_id, ProbeMode::Geometry, p, q, l, Some(rpe)));
                let (p, q, l) = (u(18.0, 26.0), u(0.5, 0.9), u(0.05, 0.4));
                metrics.push(record(&s.scene_id, ProbeMode::Texture, p, q, l, None));
            }
            format!(
                "modes G,T; G rpe_mean = max(0, 2 + 20*(1 - adc + e)), e ~ N(0, ({} * sd(adc))^2); \
                 all other metrics uniform noise independent of diagnostics",
                spec.noise
            )
        }
        SceneRelation::NoiseOnly => {
            for s in &scenes {
                for mode in [ProbeMode::All, ProbeMode::Geometry, ProbeMode::Texture] {
                    let (p, q, l) = (u(18.0, 26.0), u(0.5, 0.9), u(0.05, 0.4));
                    let rpe = (mode == ProbeMode::Geometry).then(|| u(1.0, 10.0));
                    metrics.push(record(&s.scene_id, mode, p, q, l, rpe));
                }
            }
            "modes A,G,T; every metric uniform noise independent of diagnostics".to_string()
        }
    };
    Ok(SceneSuite {
        scenes,
        metrics,
        construction,
    })
}
