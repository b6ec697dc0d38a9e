//! Six spectral diagnostics comparing a low-resolution feature map with its
//! upsampled counterpart.
//!
//! | metric | built from | range |
//! |---|---|---|
//! | SSC | Pearson of log radial spectra | [-1, 1] |
//! | BWG | L1 distance of normalized band energies | [0, 2] |
//! | HFSS | drift of the high-frequency power-law slope | [0, inf) |
//! | CSC | normalized complex coherence on the shared frequency support | [0, 1] |
//! | ADC | Pearson of angular energy distributions | [-1, 1] |
//! | dMCS | change of the mid-band energy fraction | [0, 1] |

use rustfft::num_complex::Complex64;
use rustfft::FftDirection;
use thiserror::Error;

use crate::config::{DiagnosticsConfig, FreqRange};
use crate::feature::FeatureMap;
use crate::records::DiagnosticsRecord;
use crate::spectrum::{
    accumulate_power, angular_spectrum, for_each_channel, radial_spectrum, AngularSpectrum, Fft2,
    PowerSpectrum, RadialSpectrum,
};
use crate::stats::pearson;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("UndefinedCorrelation: {0}")]
    UndefinedCorrelation(String),
    #[error("UndefinedDistribution: total band energy is zero")]
    UndefinedDistribution,
    #[error("FitUnderdetermined{}: {found} qualifying bins in [{range}), need 4", side.map(|s| format!(" ({s})")).unwrap_or_default())]
    FitUnderdetermined {
        found: usize,
        range: FreqRange,
        side: Option<&'static str>,
    },
    #[error("UndefinedCoherence: {0}")]
    UndefinedCoherence(String),
    #[error("UndefinedRatio: total non-DC energy is zero")]
    UndefinedRatio,
    #[error("ChannelMismatch: LR has {lr} channels, HR has {hr}")]
    ChannelMismatch { lr: usize, hr: usize },
    #[error("BinMismatch: {0}")]
    BinMismatch(String),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl SpectralError {
    /// Short machine-readable error name.
    pub fn kind(&self) -> &'static str {
        match self {
            SpectralError::UndefinedCorrelation(_) => "UndefinedCorrelation",
            SpectralError::UndefinedDistribution => "UndefinedDistribution",
            SpectralError::FitUnderdetermined { .. } => "FitUnderdetermined",
            SpectralError::UndefinedCoherence(_) => "UndefinedCoherence",
            SpectralError::UndefinedRatio => "UndefinedRatio",
            SpectralError::ChannelMismatch { .. } => "ChannelMismatch",
            SpectralError::BinMismatch(_) => "BinMismatch",
            SpectralError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

fn check_bins(lr: &RadialSpectrum, hr: &RadialSpectrum) -> Result<(), SpectralError> {
    if lr.bin_count() != hr.bin_count() {
        return Err(SpectralError::BinMismatch(format!(
            "{} vs {} radial bins",
            lr.bin_count(),
            hr.bin_count()
        )));
    }
    Ok(())
}

/// Pearson correlation of `log(P + eps)` over bins populated in both spectra.
pub fn ssc(
    lr: &RadialSpectrum,
    hr: &RadialSpectrum,
    cfg: &DiagnosticsConfig,
) -> Result<f64, SpectralError> {
    check_bins(lr, hr)?;
    let eps = cfg.log_epsilon;
    let (xs, ys): (Vec<f64>, Vec<f64>) = lr
        .means()
        .iter()
        .zip(hr.means())
        .filter_map(|(a, b)| Some((((*a)? + eps).ln(), ((*b)? + eps).ln())))
        .unzip();
    if xs.len() < 3 {
        return Err(SpectralError::UndefinedCorrelation(format!(
            "only {} radial bins populated in both spectra",
            xs.len()
        )));
    }
    pearson(&xs, &ys).map_err(|e| SpectralError::UndefinedCorrelation(e.to_string()))
}

/// Summed radial power per equal-width band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEnergies(pub Vec<f64>);

impl BandEnergies {
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    fn normalized(&self) -> Result<Vec<f64>, SpectralError> {
        let total = self.total();
        if total.is_nan() || total <= 0.0 {
            return Err(SpectralError::UndefinedDistribution);
        }
        Ok(self.0.iter().map(|e| e / total).collect())
    }
}

/// Band of a radial bin center for `bands` equal-width bands over `[0, 0.5]`.
fn band_of(center: f64, bands: usize) -> usize {
    ((center * 2.0 * bands as f64).floor() as usize).min(bands - 1)
}

pub fn band_energies(
    rs: &RadialSpectrum,
    cfg: &DiagnosticsConfig,
) -> Result<BandEnergies, SpectralError> {
    let k = cfg.bands;
    if k < 2 {
        return Err(SpectralError::InvalidConfig(format!(
            "bands must be >= 2 (got {k})"
        )));
    }
    let mut e = vec![0.0; k];
    let mut any = false;
    for (_, center, p) in rs.populated() {
        e[band_of(center, k)] += p;
        any = true;
    }
    if !any {
        return Err(SpectralError::UndefinedDistribution);
    }
    Ok(BandEnergies(e))
}

/// L1 distance between the two band-energy distributions.
pub fn bwg(lr: &BandEnergies, hr: &BandEnergies) -> Result<f64, SpectralError> {
    if lr.0.len() != hr.0.len() {
        return Err(SpectralError::BinMismatch(format!(
            "{} vs {} bands",
            lr.0.len(),
            hr.0.len()
        )));
    }
    let (a, b) = (lr.normalized()?, hr.normalized()?);
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        .min(2.0))
}

/// Least-squares fit of `log P = -beta * log r + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub beta: f64,
    pub intercept: f64,
    pub range: FreqRange,
    pub n_points: usize,
}

/// Fits the decay slope over bins whose centers fall in `range`.
pub fn fit_slope(
    rs: &RadialSpectrum,
    range: FreqRange,
    eps: f64,
) -> Result<SlopeFit, SpectralError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = rs
        .populated()
        .filter(|&(_, center, p)| range.contains(center) && p > 0.0)
        .map(|(_, center, p)| (center.ln(), (p + eps).ln()))
        .unzip();
    if xs.len() < 4 {
        return Err(SpectralError::FitUnderdetermined {
            found: xs.len(),
            range,
            side: None,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    Ok(SlopeFit {
        beta: -slope,
        intercept: my - slope * mx,
        range,
        n_points: xs.len(),
    })
}

/// `|beta_hr - beta_lr|` over the configured high-frequency range.
pub fn hfss(
    lr: &RadialSpectrum,
    hr: &RadialSpectrum,
    cfg: &DiagnosticsConfig,
) -> Result<f64, SpectralError> {
    let label = |side: &'static str| {
        move |e| match e {
            SpectralError::FitUnderdetermined { found, range, .. } => {
                SpectralError::FitUnderdetermined {
                    found,
                    range,
                    side: Some(side),
                }
            }
            other => other,
        }
    };
    let a = fit_slope(lr, cfg.hf_range, cfg.log_epsilon).map_err(label("lr"))?;
    let b = fit_slope(hr, cfg.hf_range, cfg.log_epsilon).map_err(label("hr"))?;
    Ok((b.beta - a.beta).abs())
}

/// Pearson correlation of the two angular energy vectors.
pub fn adc(lr: &AngularSpectrum, hr: &AngularSpectrum) -> Result<f64, SpectralError> {
    if lr.bin_count() != hr.bin_count() {
        return Err(SpectralError::BinMismatch(format!(
            "{} vs {} angular bins",
            lr.bin_count(),
            hr.bin_count()
        )));
    }
    pearson(lr.energies(), hr.energies())
        .map_err(|e| SpectralError::UndefinedCorrelation(e.to_string()))
}

/// Fraction of radial power in bins whose centers fall in the mid band.
pub fn mcs(rs: &RadialSpectrum, cfg: &DiagnosticsConfig) -> Result<f64, SpectralError> {
    let (mut mid, mut total) = (0.0, 0.0);
    for (_, center, p) in rs.populated() {
        total += p;
        if cfg.mid_range.contains(center) {
            mid += p;
        }
    }
    if total.is_nan() || total <= 0.0 {
        return Err(SpectralError::UndefinedRatio);
    }
    Ok((mid / total).clamp(0.0, 1.0))
}

pub fn delta_mcs(
    lr: &RadialSpectrum,
    hr: &RadialSpectrum,
    cfg: &DiagnosticsConfig,
) -> Result<f64, SpectralError> {
    Ok((mcs(hr, cfg)? - mcs(lr, cfg)?).abs())
}

/// Running per-channel coherence between an LR spectrum and the matching
/// central block of an HR spectrum.
struct CoherenceAccumulator {
    lr: (usize, usize),
    hr: (usize, usize),
    exclude_dc: bool,
    per_channel: Vec<f64>,
    skipped: usize,
}

impl CoherenceAccumulator {
    fn new(
        lr: (usize, usize),
        hr: (usize, usize),
        exclude_dc: bool,
    ) -> Result<Self, SpectralError> {
        if lr.0 > hr.0 || lr.1 > hr.1 {
            return Err(SpectralError::UndefinedCoherence(format!(
                "LR grid {}x{} exceeds HR grid {}x{}",
                lr.0, lr.1, hr.0, hr.1
            )));
        }
        Ok(Self {
            lr,
            hr,
            exclude_dc,
            per_channel: Vec::new(),
            skipped: 0,
        })
    }

    fn push(&mut self, lr: &[Complex64], hr: &[Complex64]) {
        let ((h, w), (hh, hw)) = (self.lr, self.hr);
        let (dy, dx) = (hh / 2 - h / 2, hw / 2 - w / 2);
        let dc = (h / 2, w / 2);
        let mut cross = Complex64::new(0.0, 0.0);
        let (mut ea, mut eb) = (0.0, 0.0);
        for i in 0..h {
            for j in 0..w {
                if self.exclude_dc && (i, j) == dc {
                    continue;
                }
                let a = lr[i * w + j];
                let b = hr[(i + dy) * hw + j + dx];
                cross += a * b.conj();
                ea += a.norm_sqr();
                eb += b.norm_sqr();
            }
        }
        if ea > 0.0 && eb > 0.0 {
            self.per_channel
                .push((cross.norm() / (ea * eb).sqrt()).min(1.0));
        } else {
            self.skipped += 1;
        }
    }

    fn finish(self) -> Result<f64, SpectralError> {
        if self.per_channel.is_empty() {
            return Err(SpectralError::UndefinedCoherence(
                "no channel has non-zero energy on both sides".into(),
            ));
        }
        Ok(self.per_channel.iter().sum::<f64>() / self.per_channel.len() as f64)
    }
}

/// Streams both maps channel by channel through the DFT, accumulating
/// power spectra and (when the grids nest) the coherence terms.
struct PairSpectra {
    lr_power: PowerSpectrum,
    hr_power: PowerSpectrum,
    coherence: Result<f64, SpectralError>,
}

impl PairSpectra {
    fn compute(lr: &FeatureMap, hr: &FeatureMap, cfg: &DiagnosticsConfig) -> Self {
        let (h, w, c) = lr.shape();
        let (hh, hw, _) = hr.shape();
        let mut lr_fft = Fft2::new(h, w, FftDirection::Forward);
        let mut lr_specs = Vec::with_capacity(c);
        let mut lr_sums = vec![0.0; h * w];
        for_each_channel(lr, |_, plane| {
            let mut s = Vec::new();
            lr_fft.forward_centered(plane, &mut s);
            accumulate_power(&mut lr_sums, &s);
            lr_specs.push(s);
        });

        let mut coherence =
            CoherenceAccumulator::new((h, w), (hh, hw), cfg.dc_policy.excludes_dc());
        let mut hr_fft = Fft2::new(hh, hw, FftDirection::Forward);
        let mut hr_sums = vec![0.0; hh * hw];
        let mut spec = Vec::new();
        for_each_channel(hr, |ch, plane| {
            hr_fft.forward_centered(plane, &mut spec);
            accumulate_power(&mut hr_sums, &spec);
            if let Ok(acc) = coherence.as_mut() {
                acc.push(&lr_specs[ch], &spec);
            }
        });

        Self {
            lr_power: PowerSpectrum::from_sums(h, w, lr_sums, c),
            hr_power: PowerSpectrum::from_sums(hh, hw, hr_sums, hr.channels()),
            coherence: coherence.and_then(CoherenceAccumulator::finish),
        }
    }
}

fn check_pair(
    lr: &FeatureMap,
    hr: &FeatureMap,
    cfg: &DiagnosticsConfig,
) -> Result<(), SpectralError> {
    cfg.validate().map_err(SpectralError::InvalidConfig)?;
    if lr.channels() != hr.channels() {
        return Err(SpectralError::ChannelMismatch {
            lr: lr.channels(),
            hr: hr.channels(),
        });
    }
    Ok(())
}

/// Complex spectral coherence, averaged over channels.
///
/// The HR spectrum is cropped to the central `h x w` block so both spectra
/// cover the same integer frequencies (cycles per image).
pub fn csc(
    lr: &FeatureMap,
    hr: &FeatureMap,
    cfg: &DiagnosticsConfig,
) -> Result<f64, SpectralError> {
    check_pair(lr, hr, cfg)?;
    PairSpectra::compute(lr, hr, cfg).coherence
}

/// Runs every diagnostic on `(lr, hr)`. Undefined metrics are left `None`
/// with the reason recorded; only a channel mismatch or invalid config fails.
pub fn diagnose_pair(
    lr: &FeatureMap,
    hr: &FeatureMap,
    cfg: &DiagnosticsConfig,
) -> Result<DiagnosticsRecord, SpectralError> {
    check_pair(lr, hr, cfg)?;
    let spectra = PairSpectra::compute(lr, hr, cfg);
    let (rad_lr, rad_hr) = (
        radial_spectrum(&spectra.lr_power, cfg),
        radial_spectrum(&spectra.hr_power, cfg),
    );
    let (ang_lr, ang_hr) = (
        angular_spectrum(&spectra.lr_power, cfg),
        angular_spectrum(&spectra.hr_power, cfg),
    );

    let mut record = DiagnosticsRecord::empty("lr", "hr", cfg.fingerprint());
    let mut put = |name: &str, value: Result<f64, SpectralError>| -> Option<f64> {
        match value {
            Ok(v) => Some(v),
            Err(e) => {
                record.reasons.insert(name.to_string(), e.to_string());
                None
            }
        }
    };
    let ssc_v = put("ssc", ssc(&rad_lr, &rad_hr, cfg));
    let bwg_v = put(
        "bwg",
        band_energies(&rad_lr, cfg).and_then(|a| bwg(&a, &band_energies(&rad_hr, cfg)?)),
    );
    let hfss_v = put("hfss", hfss(&rad_lr, &rad_hr, cfg));
    let csc_v = put("csc", spectra.coherence);
    let adc_v = put("adc", adc(&ang_lr, &ang_hr));
    let mcs_lr = put("mcs_lr", mcs(&rad_lr, cfg));
    let mcs_hr = put("mcs_hr", mcs(&rad_hr, cfg));
    let delta = match (mcs_lr, mcs_hr) {
        (Some(a), Some(b)) => Some((b - a).abs()),
        _ => {
            record.reasons.insert(
                "delta_mcs".into(),
                SpectralError::UndefinedRatio.to_string(),
            );
            None
        }
    };
    record.ssc = ssc_v;
    record.bwg = bwg_v;
    record.hfss = hfss_v;
    record.csc = csc_v;
    record.adc = adc_v;
    record.mcs_lr = mcs_lr;
    record.mcs_hr = mcs_hr;
    record.delta_mcs = delta;
    Ok(record)
}
