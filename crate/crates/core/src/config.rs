//! Binning and fitting parameters shared by every spectral diagnostic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Half-open interval `[lo, hi)` of normalized radial frequency (cycles/sample).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqRange {
    pub lo: f64,
    pub hi: f64,
}

impl FreqRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    #[inline]
    pub fn contains(&self, r: f64) -> bool {
        r >= self.lo && r < self.hi
    }

    fn validate(&self, name: &str) -> Result<(), String> {
        if self.lo.is_finite()
            && self.hi.is_finite()
            && 0.0 <= self.lo
            && self.lo < self.hi
            && self.hi <= 0.5
        {
            Ok(())
        } else {
            Err(format!(
                "{name} must satisfy 0 <= lo < hi <= 0.5 (got {}:{})",
                self.lo, self.hi
            ))
        }
    }
}

impl fmt::Display for FreqRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for FreqRange {
    type Err = String;

    /// Parses `LO:HI`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{t}` as a number"))
        };
        Ok(Self::new(parse(lo)?, parse(hi)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DcPolicy {
    Exclude,
    Include,
}

impl DcPolicy {
    pub fn excludes_dc(self) -> bool {
        self == DcPolicy::Exclude
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    /// Number of equal-width radial bins over `[0, 0.5]`.
    pub radial_bins: usize,
    /// Number of equal-width bands over `[0, 0.5]` for band energies.
    pub bands: usize,
    /// Radial range for the high-frequency power-law fit.
    pub hf_range: FreqRange,
    /// Radial range counted as mid-band.
    pub mid_range: FreqRange,
    /// Number of orientation bins over `[0, pi)`.
    pub angular_bins: usize,
    /// Added inside logarithms of power.
    pub log_epsilon: f64,
    pub dc_policy: DcPolicy,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            radial_bins: 32,
            bands: 4,
            hf_range: FreqRange::new(0.25, 0.5),
            mid_range: FreqRange::new(0.125, 0.375),
            angular_bins: 16,
            log_epsilon: 1e-12,
            dc_policy: DcPolicy::Exclude,
        }
    }
}

impl DiagnosticsConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, n) in [
            ("radial_bins", self.radial_bins),
            ("bands", self.bands),
            ("angular_bins", self.angular_bins),
        ] {
            if n < 2 {
                return Err(format!("{name} must be >= 2 (got {n})"));
            }
        }
        self.hf_range.validate("hf_range")?;
        self.mid_range.validate("mid_range")?;
        if !(self.log_epsilon >= 0.0 && self.log_epsilon.is_finite()) {
            return Err(format!(
                "log_epsilon must be finite and >= 0 (got {})",
                self.log_epsilon
            ));
        }
        Ok(())
    }

    /// Canonical one-line rendering; the fingerprint is hashed from this.
    pub fn canonical(&self) -> String {
        format!(
            "radial_bins={};bands={};hf_range={};mid_range={};angular_bins={};log_epsilon={:e};dc_policy={}",
            self.radial_bins,
            self.bands,
            self.hf_range,
            self.mid_range,
            self.angular_bins,
            self.log_epsilon,
            if self.dc_policy.excludes_dc() { "exclude" } else { "include" },
        )
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&digest[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = DiagnosticsConfig::default();
        cfg.validate().unwrap();
        assert_eq!(
            cfg.canonical(),
            "radial_bins=32;bands=4;hf_range=0.25:0.5;mid_range=0.125:0.375;angular_bins=16;log_epsilon=1e-12;dc_policy=exclude"
        );
        assert_eq!(cfg.fingerprint().len(), 16);
    }

    #[test]
    fn fingerprint_tracks_every_field() {
        let base = DiagnosticsConfig::default();
        let variants = [
            DiagnosticsConfig {
                radial_bins: 16,
                ..base.clone()
            },
            DiagnosticsConfig {
                bands: 5,
                ..base.clone()
            },
            DiagnosticsConfig {
                hf_range: FreqRange::new(0.3, 0.5),
                ..base.clone()
            },
            DiagnosticsConfig {
                mid_range: FreqRange::new(0.1, 0.3),
                ..base.clone()
            },
            DiagnosticsConfig {
                angular_bins: 8,
                ..base.clone()
            },
            DiagnosticsConfig {
                log_epsilon: 1e-9,
                ..base.clone()
            },
            DiagnosticsConfig {
                dc_policy: DcPolicy::Include,
                ..base.clone()
            },
        ];
        for v in variants {
            assert_ne!(v.fingerprint(), base.fingerprint(), "{}", v.canonical());
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let mut cfg = DiagnosticsConfig {
            hf_range: FreqRange::new(0.3, 0.2),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.hf_range = FreqRange::new(0.25, 0.6);
        assert!(cfg.validate().is_err());
        cfg.hf_range = FreqRange::new(0.25, 0.5);
        cfg.bands = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn parses_ranges() {
        assert_eq!(
            "0.1:0.4".parse::<FreqRange>().unwrap(),
            FreqRange::new(0.1, 0.4)
        );
        assert!("0.1-0.4".parse::<FreqRange>().is_err());
    }
}
