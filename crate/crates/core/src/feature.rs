//! Dense `H x W x C` feature tensors.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("feature map dimensions must be >= 1 (got {height}x{width}x{channels})")]
    ZeroDimension {
        height: usize,
        width: usize,
        channels: usize,
    },
    #[error("data length {len} does not match {height}x{width}x{channels}")]
    LengthMismatch {
        height: usize,
        width: usize,
        channels: usize,
        len: usize,
    },
    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },
}

/// A real-valued feature tensor stored row-major, channel-last:
/// element `(y, x, c)` lives at `(y * width + x) * channels + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f32>,
}

impl FeatureMap {
    pub fn new(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f32>,
    ) -> Result<Self, ShapeError> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(ShapeError::ZeroDimension {
                height,
                width,
                channels,
            });
        }
        let expected = height
            .checked_mul(width)
            .and_then(|n| n.checked_mul(channels));
        if expected != Some(data.len()) {
            return Err(ShapeError::LengthMismatch {
                height,
                width,
                channels,
                len: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(ShapeError::NonFinite { index });
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Result<Self, ShapeError> {
        Self::filled(height, width, channels, 0.0)
    }

    pub fn filled(
        height: usize,
        width: usize,
        channels: usize,
        value: f32,
    ) -> Result<Self, ShapeError> {
        let len = height.saturating_mul(width).saturating_mul(channels);
        Self::new(height, width, channels, vec![value; len])
    }

    /// Builds a map from a generator evaluated at every `(y, x, c)`.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self, ShapeError> {
        let mut data = Vec::with_capacity(height * width * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(y, x, c));
                }
            }
        }
        Self::new(height, width, channels, data)
    }

    /// Assembles a map from per-channel planes, each row-major `height * width`.
    pub fn from_planes(
        height: usize,
        width: usize,
        planes: &[Vec<f32>],
    ) -> Result<Self, ShapeError> {
        let channels = planes.len();
        if let Some(bad) = planes.iter().find(|p| p.len() != height * width) {
            return Err(ShapeError::LengthMismatch {
                height,
                width,
                channels: 1,
                len: bad.len(),
            });
        }
        Self::from_fn(height, width, channels, |y, x, c| planes[c][y * width + x])
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `(height, width, channels)`
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    #[inline]
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn index(&self, y: usize, x: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> f32 {
        self.data[self.index(y, x, c)]
    }

    /// Copies channel `c` out as a row-major plane.
    pub fn channel_plane(&self, c: usize) -> Vec<f32> {
        assert!(c < self.channels, "channel {c} out of range");
        self.data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    /// Applies `f` elementwise. Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f32) -> f32) -> Self {
        let data: Vec<f32> = self.data.iter().map(|&v| f(v)).collect();
        Self::new(self.height, self.width, self.channels, data).expect("map produced invalid data")
    }

    /// Elementwise `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: f32, other: &FeatureMap, beta: f32) -> Result<Self, ShapeError> {
        if self.shape() != other.shape() {
            return Err(ShapeError::LengthMismatch {
                height: self.height,
                width: self.width,
                channels: self.channels,
                len: other.data.len(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| alpha * a + beta * b)
            .collect();
        Self::new(self.height, self.width, self.channels, data)
    }

    /// Circular shift by `(dy, dx)` pixels.
    pub fn roll(&self, dy: usize, dx: usize) -> Self {
        let (h, w) = (self.height, self.width);
        Self::from_fn(h, w, self.channels, |y, x, c| {
            self.get((y + h - dy % h) % h, (x + w - dx % w) % w, c)
        })
        .expect("roll preserves shape")
    }

    /// Reorders channels: output channel `i` is input channel `perm[i]`.
    pub fn permute_channels(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.channels);
        Self::from_fn(self.height, self.width, self.channels, |y, x, c| {
            self.get(y, x, perm[c])
        })
        .expect("permutation preserves shape")
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.data.iter().map(|&v| f64::from(v) * f64::from(v)).sum()
    }
}
