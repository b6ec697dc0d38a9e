//! Record types exchanged between the diagnostics, the statistics layer and disk.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The six per-pair spectral diagnostics, in canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    Ssc,
    Bwg,
    Hfss,
    Csc,
    Adc,
    DeltaMcs,
}

impl Diagnostic {
    pub const ALL: [Diagnostic; 6] = [
        Diagnostic::Ssc,
        Diagnostic::Bwg,
        Diagnostic::Hfss,
        Diagnostic::Csc,
        Diagnostic::Adc,
        Diagnostic::DeltaMcs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::Ssc => "ssc",
            Diagnostic::Bwg => "bwg",
            Diagnostic::Hfss => "hfss",
            Diagnostic::Csc => "csc",
            Diagnostic::Adc => "adc",
            Diagnostic::DeltaMcs => "delta_mcs",
        }
    }

    /// Drift-style diagnostics where a smaller value means better preservation.
    pub fn lower_is_better(self) -> bool {
        matches!(
            self,
            Diagnostic::Bwg | Diagnostic::Hfss | Diagnostic::DeltaMcs
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Diagnostic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Diagnostic::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown diagnostic `{s}`"))
    }
}

/// Which Gaussian parameter group was regressed when the scene metrics were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProbeMode {
    #[serde(rename = "A")]
    All,
    #[serde(rename = "G")]
    Geometry,
    #[serde(rename = "T")]
    Texture,
}

impl ProbeMode {
    pub fn letter(self) -> &'static str {
        match self {
            ProbeMode::All => "A",
            ProbeMode::Geometry => "G",
            ProbeMode::Texture => "T",
        }
    }
}

impl fmt::Display for ProbeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.letter())
    }
}

impl FromStr for ProbeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "all" => Ok(ProbeMode::All),
            "g" | "geometry" => Ok(ProbeMode::Geometry),
            "t" | "texture" => Ok(ProbeMode::Texture),
            other => Err(format!("unknown probe mode `{other}`")),
        }
    }
}

/// Novel-view-synthesis quality metrics reported per scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityMetric {
    Psnr,
    Ssim,
    Lpips,
    RpeMean,
}

impl QualityMetric {
    pub const ALL: [QualityMetric; 4] = [
        QualityMetric::Psnr,
        QualityMetric::Ssim,
        QualityMetric::Lpips,
        QualityMetric::RpeMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QualityMetric::Psnr => "psnr",
            QualityMetric::Ssim => "ssim",
            QualityMetric::Lpips => "lpips",
            QualityMetric::RpeMean => "rpe_mean",
        }
    }

    pub fn lower_is_better(self) -> bool {
        matches!(self, QualityMetric::Lpips | QualityMetric::RpeMean)
    }
}

impl fmt::Display for QualityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for QualityMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QualityMetric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown quality metric `{s}`"))
    }
}

/// Per-scene reconstruction quality for one probing mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneRecord {
    pub scene_id: String,
    pub probe_mode: ProbeMode,
    pub psnr: f64,
    pub ssim: f64,
    pub lpips: f64,
    /// Degrees; only reported for geometry probing.
    pub rpe_mean: Option<f64>,
}

impl SceneRecord {
    pub fn metric(&self, m: QualityMetric) -> Option<f64> {
        match m {
            QualityMetric::Psnr => Some(self.psnr),
            QualityMetric::Ssim => Some(self.ssim),
            QualityMetric::Lpips => Some(self.lpips),
            QualityMetric::RpeMean => self.rpe_mean,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.psnr.is_finite() {
            return Err(format!("psnr must be finite (got {})", self.psnr));
        }
        if !(0.0..=1.0).contains(&self.ssim) {
            return Err(format!("ssim must lie in [0, 1] (got {})", self.ssim));
        }
        if !(self.lpips >= 0.0 && self.lpips.is_finite()) {
            return Err(format!("lpips must be >= 0 (got {})", self.lpips));
        }
        if let Some(rpe) = self.rpe_mean {
            if !(rpe >= 0.0 && rpe.is_finite()) {
                return Err(format!("rpe_mean must be >= 0 (got {rpe})"));
            }
        }
        Ok(())
    }
}

/// The six diagnostics for one LR/HR pair. `None` marks an undefined
/// metric; the reason is kept in `reasons` under the field name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub ssc: Option<f64>,
    pub bwg: Option<f64>,
    pub hfss: Option<f64>,
    pub csc: Option<f64>,
    pub adc: Option<f64>,
    pub mcs_lr: Option<f64>,
    pub mcs_hr: Option<f64>,
    pub delta_mcs: Option<f64>,
    pub lr_id: String,
    pub hr_id: String,
    /// Fingerprint of the `DiagnosticsConfig` that produced the record.
    pub config: String,
    #[serde(default)]
    pub reasons: BTreeMap<String, String>,
}

/// Accessors for every numeric field of a [`DiagnosticsRecord`], in key order.
pub(crate) type FieldAccess = (
    &'static str,
    fn(&DiagnosticsRecord) -> Option<f64>,
    fn(&mut DiagnosticsRecord) -> &mut Option<f64>,
);

pub(crate) const RECORD_FIELDS: [FieldAccess; 8] = [
    ("ssc", |r| r.ssc, |r| &mut r.ssc),
    ("bwg", |r| r.bwg, |r| &mut r.bwg),
    ("hfss", |r| r.hfss, |r| &mut r.hfss),
    ("csc", |r| r.csc, |r| &mut r.csc),
    ("adc", |r| r.adc, |r| &mut r.adc),
    ("mcs_lr", |r| r.mcs_lr, |r| &mut r.mcs_lr),
    ("mcs_hr", |r| r.mcs_hr, |r| &mut r.mcs_hr),
    ("delta_mcs", |r| r.delta_mcs, |r| &mut r.delta_mcs),
];

impl DiagnosticsRecord {
    pub fn empty(
        lr_id: impl Into<String>,
        hr_id: impl Into<String>,
        config: impl Into<String>,
    ) -> Self {
        Self {
            ssc: None,
            bwg: None,
            hfss: None,
            csc: None,
            adc: None,
            mcs_lr: None,
            mcs_hr: None,
            delta_mcs: None,
            lr_id: lr_id.into(),
            hr_id: hr_id.into(),
            config: config.into(),
            reasons: BTreeMap::new(),
        }
    }

    pub fn get(&self, d: Diagnostic) -> Option<f64> {
        match d {
            Diagnostic::Ssc => self.ssc,
            Diagnostic::Bwg => self.bwg,
            Diagnostic::Hfss => self.hfss,
            Diagnostic::Csc => self.csc,
            Diagnostic::Adc => self.adc,
            Diagnostic::DeltaMcs => self.delta_mcs,
        }
    }

    /// Checks every defined field against its declared range.
    pub fn validate(&self) -> Result<(), String> {
        const TOL: f64 = 1e-12;
        let ranges: [(&str, Option<f64>, f64, f64); 8] = [
            ("ssc", self.ssc, -1.0, 1.0),
            ("bwg", self.bwg, 0.0, 2.0),
            ("hfss", self.hfss, 0.0, f64::INFINITY),
            ("csc", self.csc, 0.0, 1.0),
            ("adc", self.adc, -1.0, 1.0),
            ("mcs_lr", self.mcs_lr, 0.0, 1.0),
            ("mcs_hr", self.mcs_hr, 0.0, 1.0),
            ("delta_mcs", self.delta_mcs, 0.0, 1.0),
        ];
        for (name, value, lo, hi) in ranges {
            if let Some(v) = value {
                if !v.is_finite() || v < lo - TOL || v > hi + TOL {
                    return Err(format!("{name} = {v} outside [{lo}, {hi}]"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for d in Diagnostic::ALL {
            assert_eq!(d.name().parse::<Diagnostic>().unwrap(), d);
        }
        for m in QualityMetric::ALL {
            assert_eq!(m.name().parse::<QualityMetric>().unwrap(), m);
        }
        assert_eq!(
            "Geometry".parse::<ProbeMode>().unwrap(),
            ProbeMode::Geometry
        );
        assert_eq!("t".parse::<ProbeMode>().unwrap(), ProbeMode::Texture);
    }

    #[test]
    fn scene_record_ranges() {
        let mut r = SceneRecord {
            scene_id: "lego".into(),
            probe_mode: ProbeMode::All,
            psnr: 24.0,
            ssim: 0.8,
            lpips: 0.1,
            rpe_mean: None,
        };
        assert!(r.validate().is_ok());
        r.ssim = 1.2;
        assert!(r.validate().is_err());
        r.ssim = 0.5;
        r.rpe_mean = Some(-1.0);
        assert!(r.validate().is_err());
    }

    #[test]
    fn record_field_table_matches_struct() {
        let mut r = DiagnosticsRecord::empty("a", "b", "c");
        for (i, (_, _, set)) in RECORD_FIELDS.iter().enumerate() {
            *set(&mut r) = Some(i as f64 / 10.0);
        }
        assert_eq!(r.ssc, Some(0.0));
        assert_eq!(r.delta_mcs, Some(0.7));
        assert_eq!(RECORD_FIELDS[4].1(&r), Some(0.4));
    }
}
