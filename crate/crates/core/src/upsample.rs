//! Channel-wise spatial resampling of feature maps.
//!
//! Interpolating kernels use the half-pixel mapping
//! `src = (dst + 0.5) * in / out - 0.5`, clamp-to-edge borders and per-sample
//! weight renormalization. [`nsm_pad`] does no resampling at all: it places
//! the source in the top-left corner and zero-fills the rest.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feature::FeatureMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UpsampleError {
    #[error("unknown upsampling method `{0}`")]
    UnknownMethod(String),
    #[error("target size must be at least 1x1 (got {0}x{1})")]
    ZeroTarget(usize, usize),
    #[error(
        "NSM never crops: target {target_h}x{target_w} is smaller than source {height}x{width}"
    )]
    TargetSmaller {
        height: usize,
        width: usize,
        target_h: usize,
        target_w: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0} has no interpolation kernel")]
    NotInterpolating(UpsampleKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpsampleKind {
    Nsm,
    Nearest,
    Bilinear,
    Bicubic,
    Lanczos,
}

impl UpsampleKind {
    pub const ALL: [UpsampleKind; 5] = [
        UpsampleKind::Nsm,
        UpsampleKind::Nearest,
        UpsampleKind::Bilinear,
        UpsampleKind::Bicubic,
        UpsampleKind::Lanczos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UpsampleKind::Nsm => "nsm",
            UpsampleKind::Nearest => "nearest",
            UpsampleKind::Bilinear => "bilinear",
            UpsampleKind::Bicubic => "bicubic",
            UpsampleKind::Lanczos => "lanczos",
        }
    }
}

impl fmt::Display for UpsampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for UpsampleKind {
    type Err = UpsampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UpsampleKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UpsampleError::UnknownMethod(s.to_string()))
    }
}

/// An upsampling method plus its kernel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpsampleMethod {
    pub kind: UpsampleKind,
    pub lanczos_taps: u32,
    pub bicubic_a: f64,
}

impl UpsampleMethod {
    pub const DEFAULT_LANCZOS_TAPS: u32 = 3;
    pub const DEFAULT_BICUBIC_A: f64 = -0.5;

    pub fn new(kind: UpsampleKind) -> Self {
        Self {
            kind,
            lanczos_taps: Self::DEFAULT_LANCZOS_TAPS,
            bicubic_a: Self::DEFAULT_BICUBIC_A,
        }
    }

    pub fn nsm() -> Self {
        Self::new(UpsampleKind::Nsm)
    }

    pub fn nearest() -> Self {
        Self::new(UpsampleKind::Nearest)
    }

    pub fn bilinear() -> Self {
        Self::new(UpsampleKind::Bilinear)
    }

    pub fn bicubic(a: f64) -> Self {
        Self {
            bicubic_a: a,
            ..Self::new(UpsampleKind::Bicubic)
        }
    }

    pub fn lanczos(taps: u32) -> Self {
        Self {
            lanczos_taps: taps,
            ..Self::new(UpsampleKind::Lanczos)
        }
    }

    pub fn validate(&self) -> Result<(), UpsampleError> {
        if self.lanczos_taps < 1 {
            return Err(UpsampleError::InvalidParameter(
                "lanczos_taps must be >= 1".into(),
            ));
        }
        if !(self.bicubic_a >= -1.0 && self.bicubic_a < 0.0) {
            return Err(UpsampleError::InvalidParameter(format!(
                "bicubic_a must lie in [-1, 0) (got {})",
                self.bicubic_a
            )));
        }
        Ok(())
    }

    /// Half-width of the kernel support in source pixels.
    fn support(&self) -> Option<usize> {
        match self.kind {
            UpsampleKind::Bilinear => Some(1),
            UpsampleKind::Bicubic => Some(2),
            UpsampleKind::Lanczos => Some(self.lanczos_taps as usize),
            UpsampleKind::Nsm | UpsampleKind::Nearest => None,
        }
    }
}

impl Default for UpsampleMethod {
    fn default() -> Self {
        Self::bilinear()
    }
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        let a = PI * t;
        a.sin() / a
    }
}

/// Kernel weight at offset `x` (in source pixels) for an interpolating method.
pub fn kernel_weight(method: &UpsampleMethod, x: f64) -> Result<f64, UpsampleError> {
    let ax = x.abs();
    Ok(match method.kind {
        UpsampleKind::Bilinear => (1.0 - ax).max(0.0),
        UpsampleKind::Bicubic => {
            let a = method.bicubic_a;
            if ax < 1.0 {
                ((a + 2.0) * ax - (a + 3.0)) * ax * ax + 1.0
            } else if ax < 2.0 {
                ((a * ax - 5.0 * a) * ax + 8.0 * a) * ax - 4.0 * a
            } else {
                0.0
            }
        }
        UpsampleKind::Lanczos => {
            let taps = f64::from(method.lanczos_taps);
            if ax == 0.0 {
                1.0
            } else if ax >= taps || ax.fract() == 0.0 {
                0.0
            } else {
                sinc(x) * sinc(x / taps)
            }
        }
        kind @ (UpsampleKind::Nsm | UpsampleKind::Nearest) => {
            return Err(UpsampleError::NotInterpolating(kind))
        }
    })
}

/// Zero-pads `map` on the right and bottom up to `target_h x target_w`.
pub fn nsm_pad(
    map: &FeatureMap,
    target_h: usize,
    target_w: usize,
) -> Result<FeatureMap, UpsampleError> {
    let (h, w, c) = map.shape();
    if target_h < h || target_w < w {
        return Err(UpsampleError::TargetSmaller {
            height: h,
            width: w,
            target_h,
            target_w,
        });
    }
    if (h, w) == (target_h, target_w) {
        return Ok(map.clone());
    }
    let mut data = vec![0.0f32; target_h * target_w * c];
    for y in 0..h {
        let src = &map.data()[y * w * c..(y + 1) * w * c];
        data[y * target_w * c..y * target_w * c + w * c].copy_from_slice(src);
    }
    Ok(FeatureMap::new(target_h, target_w, c, data).expect("padded shape is valid"))
}

/// Source taps for every output coordinate along one axis.
struct AxisTaps {
    /// `starts[o]..starts[o + 1]` indexes into `index`/`weight` for output `o`.
    starts: Vec<usize>,
    index: Vec<usize>,
    weight: Vec<f64>,
}

impl AxisTaps {
    fn taps(&self, o: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.starts[o]..self.starts[o + 1];
        self.index[r.clone()]
            .iter()
            .copied()
            .zip(self.weight[r].iter().copied())
    }

    fn nearest(input: usize, output: usize) -> Self {
        // floor((dst + 0.5) * in / out) in exact integer arithmetic
        let index: Vec<usize> = (0..output)
            .map(|o| ((2 * o + 1) * input / (2 * output)).min(input - 1))
            .collect();
        Self {
            starts: (0..=output).collect(),
            weight: vec![1.0; output],
            index,
        }
    }

    fn kernel(method: &UpsampleMethod, support: usize, input: usize, output: usize) -> Self {
        let scale = input as f64 / output as f64;
        let mut starts = Vec::with_capacity(output + 1);
        let mut index = Vec::with_capacity(output * 2 * support);
        let mut weight = Vec::with_capacity(output * 2 * support);
        let last = input as isize - 1;
        for o in 0..output {
            starts.push(index.len());
            let src = (o as f64 + 0.5) * scale - 0.5;
            let base = src.floor() as isize;
            let first = weight.len();
            for i in (base - support as isize + 1)..=(base + support as isize) {
                let w = kernel_weight(method, src - i as f64).expect("interpolating kernel");
                index.push(i.clamp(0, last) as usize);
                weight.push(w);
            }
            let total: f64 = weight[first..].iter().sum();
            for w in &mut weight[first..] {
                *w /= total;
            }
        }
        starts.push(index.len());
        Self {
            starts,
            index,
            weight,
        }
    }

    fn build(method: &UpsampleMethod, input: usize, output: usize) -> Self {
        match method.support() {
            Some(s) => Self::kernel(method, s, input, output),
            None => Self::nearest(input, output),
        }
    }
}

/// Resamples every channel of `map` to `target_h x target_w`.
pub fn upsample(
    map: &FeatureMap,
    method: &UpsampleMethod,
    target_h: usize,
    target_w: usize,
) -> Result<FeatureMap, UpsampleError> {
    if target_h == 0 || target_w == 0 {
        return Err(UpsampleError::ZeroTarget(target_h, target_w));
    }
    method.validate()?;
    if method.kind == UpsampleKind::Nsm {
        return nsm_pad(map, target_h, target_w);
    }
    let (h, w, c) = map.shape();
    let rows = AxisTaps::build(method, h, target_h);
    let cols = AxisTaps::build(method, w, target_w);
    let src = map.data();

    // horizontal pass: h x target_w x c
    let mut tmp = vec![0.0f64; h * target_w * c];
    for y in 0..h {
        for ox in 0..target_w {
            let out = &mut tmp[(y * target_w + ox) * c..(y * target_w + ox + 1) * c];
            for (ix, wt) in cols.taps(ox) {
                let px = &src[(y * w + ix) * c..(y * w + ix + 1) * c];
                for (acc, &v) in out.iter_mut().zip(px) {
                    *acc += wt * f64::from(v);
                }
            }
        }
    }

    // vertical pass: target_h x target_w x c
    let row_len = target_w * c;
    let mut data = vec![0.0f32; target_h * row_len];
    let mut acc = vec![0.0f64; row_len];
    for oy in 0..target_h {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (iy, wt) in rows.taps(oy) {
            let row = &tmp[iy * row_len..(iy + 1) * row_len];
            for (a, &v) in acc.iter_mut().zip(row) {
                *a += wt * v;
            }
        }
        for (d, &a) in data[oy * row_len..(oy + 1) * row_len].iter_mut().zip(&acc) {
            *d = a as f32;
        }
    }
    Ok(FeatureMap::new(target_h, target_w, c, data).expect("resampled shape is valid"))
}
