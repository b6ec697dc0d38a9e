//! Frequency-domain diagnostics for feature-map upsampling.
//!
//! The crate covers the whole path from a low-resolution feature map to a
//! cross-scene correlation table:
//!
//! * [`io`] reads and writes FMAP tensors, scene-metric CSV and diagnostics JSON.
//! * [`upsample`] implements NSM zero-padding and four interpolating resamplers.
//! * [`spectrum`] and [`diagnostics`] compute power, radial and angular spectra
//!   and the six pairwise diagnostics (SSC, BWG, HFSS, CSC, ADC, ΔMCS).
//! * [`stats`] aggregates views per scene and correlates diagnostics with
//!   reconstruction quality.
//! * [`synth`] generates fields with known spectra for testing.
//! * [`cli`] wires everything into the `specprobe` binary.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod feature;
pub mod io;
pub mod records;
pub mod spectrum;
pub mod stats;
pub mod synth;
pub mod upsample;

pub use config::{DcPolicy, DiagnosticsConfig, FreqRange};
pub use diagnostics::{diagnose_pair, SpectralError};
pub use feature::{FeatureMap, ShapeError};
pub use records::{Diagnostic, DiagnosticsRecord, ProbeMode, QualityMetric, SceneRecord};
pub use upsample::{upsample, UpsampleKind, UpsampleMethod};
