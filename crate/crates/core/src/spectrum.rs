//! 2D Fourier spectra of feature maps and their radial / angular profiles.
//!
//! All grids are stored centered: index `(i, j)` holds the frequency
//! `(v, u) = ((i - h/2) / h, (j - w/2) / w)` in cycles per sample, with the
//! DC term at `(h/2, w/2)` (integer division). `u` runs along the width axis,
//! `v` along the height axis.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::config::{DcPolicy, DiagnosticsConfig};
use crate::feature::FeatureMap;

/// Normalized frequency of centered index `i` on an axis of length `n`.
#[inline]
pub fn freq_coord(i: usize, n: usize) -> f64 {
    (i as f64 - (n / 2) as f64) / n as f64
}

/// In-place unnormalized 2D FFT over row-major `height x width` buffers.
pub(crate) struct Fft2 {
    height: usize,
    width: usize,
    rows: Arc<dyn Fft<f64>>,
    cols: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl Fft2 {
    pub(crate) fn new(height: usize, width: usize, direction: FftDirection) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let rows = planner.plan_fft(width, direction);
        let cols = planner.plan_fft(height, direction);
        let scratch_len = rows
            .get_inplace_scratch_len()
            .max(cols.get_inplace_scratch_len());
        Self {
            height,
            width,
            rows,
            cols,
            scratch: vec![Complex64::default(); scratch_len],
            transposed: vec![Complex64::default(); height * width],
        }
    }

    pub(crate) fn process(&mut self, buf: &mut [Complex64]) {
        let (h, w) = (self.height, self.width);
        debug_assert_eq!(buf.len(), h * w);
        self.rows.process_with_scratch(buf, &mut self.scratch);
        for y in 0..h {
            for x in 0..w {
                self.transposed[x * h + y] = buf[y * w + x];
            }
        }
        self.cols
            .process_with_scratch(&mut self.transposed, &mut self.scratch);
        for x in 0..w {
            for y in 0..h {
                buf[y * w + x] = self.transposed[x * h + y];
            }
        }
    }

    /// Forward transform of a real plane, returned centered.
    pub(crate) fn forward_centered(&mut self, plane: &[f32], out: &mut Vec<Complex64>) {
        let (h, w) = (self.height, self.width);
        let mut buf: Vec<Complex64> = plane
            .iter()
            .map(|&v| Complex64::new(f64::from(v), 0.0))
            .collect();
        self.process(&mut buf);
        out.clear();
        out.reserve(h * w);
        for i in 0..h {
            let ky = (i + h - h / 2) % h;
            for j in 0..w {
                let kx = (j + w - w / 2) % w;
                out.push(buf[ky * w + kx]);
            }
        }
    }
}

/// Calls `f(c, plane)` for every channel in increasing order. Channels are
/// gathered in blocks so that wide maps are not re-scanned once per channel.
pub(crate) fn for_each_channel(map: &FeatureMap, mut f: impl FnMut(usize, &[f32])) {
    const BLOCK: usize = 32;
    let (h, w, c) = map.shape();
    let n = h * w;
    let data = map.data();
    let mut planes = vec![0.0f32; BLOCK.min(c) * n];
    let mut c0 = 0;
    while c0 < c {
        let b = BLOCK.min(c - c0);
        for p in 0..n {
            let px = &data[p * c + c0..p * c + c0 + b];
            for (k, &v) in px.iter().enumerate() {
                planes[k * n + p] = v;
            }
        }
        for k in 0..b {
            f(c0 + k, &planes[k * n..(k + 1) * n]);
        }
        c0 += b;
    }
}

/// Per-channel centered complex DFT of a feature map.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    height: usize,
    width: usize,
    channels: Vec<Vec<Complex64>>,
}

impl SpectrumGrid {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// Centered coefficients of channel `c`, row-major.
    pub fn channel(&self, c: usize) -> &[Complex64] {
        &self.channels[c]
    }

    /// Index of the DC coefficient in a centered channel buffer.
    pub fn dc_index(&self) -> usize {
        (self.height / 2) * self.width + self.width / 2
    }
}

/// Unnormalized forward 2D DFT of every channel, centered.
pub fn dft2(map: &FeatureMap) -> SpectrumGrid {
    let (h, w, _) = map.shape();
    let mut fft = Fft2::new(h, w, FftDirection::Forward);
    let mut channels = Vec::with_capacity(map.channels());
    for_each_channel(map, |_, plane| {
        let mut out = Vec::new();
        fft.forward_centered(plane, &mut out);
        channels.push(out);
    });
    SpectrumGrid {
        height: h,
        width: w,
        channels,
    }
}

/// Channel-averaged power `|F(w)|^2` on the centered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl PowerSpectrum {
    pub(crate) fn from_sums(
        height: usize,
        width: usize,
        mut sums: Vec<f64>,
        channels: usize,
    ) -> Self {
        let c = channels as f64;
        for v in &mut sums {
            *v /= c;
        }
        Self {
            height,
            width,
            values: sums,
        }
    }

    /// Builds a spectrum directly from centered values (must be non-negative).
    pub fn from_values(height: usize, width: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), height * width);
        assert!(
            values.iter().all(|v| *v >= 0.0),
            "power must be non-negative"
        );
        Self {
            height,
            width,
            values,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Yields `(u, v, power)` for every grid point, skipping DC when asked.
    fn points(&self, dc: DcPolicy) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let (h, w) = (self.height, self.width);
        let dc_index = (h / 2) * w + w / 2;
        self.values
            .iter()
            .enumerate()
            .filter(move |(k, _)| !(dc.excludes_dc() && *k == dc_index))
            .map(move |(k, &p)| (freq_coord(k % w, w), freq_coord(k / w, h), p))
    }
}

pub(crate) fn accumulate_power(sums: &mut [f64], spectrum: &[Complex64]) {
    for (s, z) in sums.iter_mut().zip(spectrum) {
        *s += z.norm_sqr();
    }
}

/// Mean of `|F_c|^2` over channels.
pub fn power_spectrum(grid: &SpectrumGrid) -> PowerSpectrum {
    let mut sums = vec![0.0; grid.height * grid.width];
    for ch in &grid.channels {
        accumulate_power(&mut sums, ch);
    }
    PowerSpectrum::from_sums(grid.height, grid.width, sums, grid.channels.len())
}

/// Orientation-averaged power in equal-width bins over `r` in `[0, 0.5]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    bin_width: f64,
    mean: Vec<Option<f64>>,
    counts: Vec<usize>,
    dc_excluded: bool,
}

impl RadialSpectrum {
    /// Builds a profile from explicit per-bin means; `None` marks an empty bin.
    pub fn from_bins(mean: Vec<Option<f64>>, dc_excluded: bool) -> Self {
        let k = mean.len();
        assert!(k >= 1);
        let counts = mean.iter().map(|m| usize::from(m.is_some())).collect();
        Self {
            bin_width: 0.5 / k as f64,
            mean,
            counts,
            dc_excluded,
        }
    }

    pub fn bin_count(&self) -> usize {
        self.mean.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }

    /// `(lo, hi)` edges of bin `k`.
    pub fn bin_edges(&self, k: usize) -> (f64, f64) {
        (k as f64 * self.bin_width, (k + 1) as f64 * self.bin_width)
    }

    pub fn mean(&self, k: usize) -> Option<f64> {
        self.mean[k]
    }

    pub fn means(&self) -> &[Option<f64>] {
        &self.mean
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn dc_excluded(&self) -> bool {
        self.dc_excluded
    }

    /// `(center, mean)` of every non-empty bin.
    pub fn populated(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.mean
            .iter()
            .enumerate()
            .filter_map(|(k, m)| m.map(|m| (k, self.bin_center(k), m)))
    }
}

/// Radial bin of radius `r`, or `None` beyond the Nyquist circle.
#[inline]
fn radial_bin(r: f64, bins: usize) -> Option<usize> {
    if r > 0.5 {
        return None;
    }
    Some(((r * 2.0 * bins as f64).floor() as usize).min(bins - 1))
}

pub fn radial_spectrum(p: &PowerSpectrum, cfg: &DiagnosticsConfig) -> RadialSpectrum {
    let k = cfg.radial_bins;
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (u, v, power) in p.points(cfg.dc_policy) {
        if let Some(b) = radial_bin((u * u + v * v).sqrt(), k) {
            sums[b] += power;
            counts[b] += 1;
        }
    }
    let mean = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &n)| (n > 0).then(|| s / n as f64))
        .collect();
    RadialSpectrum {
        bin_width: 0.5 / k as f64,
        mean,
        counts,
        dc_excluded: cfg.dc_policy.excludes_dc(),
    }
}

/// Total power per orientation bin over `theta` in `[0, pi)`.
///
/// Orientation is folded modulo `pi`, so `w` and `-w` land in the same bin and
/// both contribute. Only points inside the Nyquist circle (`r <= 0.5`) are
/// counted, which keeps every bin's sampled area equal on square grids.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum {
    energy: Vec<f64>,
    dc_excluded: bool,
}

impl AngularSpectrum {
    pub fn from_energies(energy: Vec<f64>, dc_excluded: bool) -> Self {
        Self {
            energy,
            dc_excluded,
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energy
    }

    pub fn bin_count(&self) -> usize {
        self.energy.len()
    }

    pub fn bin_width(&self) -> f64 {
        PI / self.energy.len() as f64
    }

    pub fn dc_excluded(&self) -> bool {
        self.dc_excluded
    }

    pub fn total(&self) -> f64 {
        self.energy.iter().sum()
    }

    /// Bin containing orientation `theta` (radians, any value; folded mod pi).
    pub fn bin_of(&self, theta: f64) -> usize {
        angular_bin(theta, self.energy.len())
    }
}

#[inline]
fn angular_bin(theta: f64, bins: usize) -> usize {
    let mut t = theta % PI;
    if t < 0.0 {
        t += PI;
    }
    if t >= PI {
        t -= PI;
    }
    ((t / PI * bins as f64).floor() as usize).min(bins - 1)
}

pub fn angular_spectrum(p: &PowerSpectrum, cfg: &DiagnosticsConfig) -> AngularSpectrum {
    let m = cfg.angular_bins;
    let mut energy = vec![0.0; m];
    for (u, v, power) in p.points(cfg.dc_policy) {
        if (u * u + v * v).sqrt() > 0.5 {
            continue;
        }
        energy[angular_bin(v.atan2(u), m)] += power;
    }
    AngularSpectrum {
        energy,
        dc_excluded: cfg.dc_policy.excludes_dc(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_coordinates() {
        assert_eq!(freq_coord(2, 4), 0.0);
        assert_eq!(freq_coord(0, 4), -0.5);
        assert_eq!(freq_coord(3, 4), 0.25);
        assert_eq!(freq_coord(1, 3), 0.0);
        assert!((freq_coord(0, 3) + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_map_is_pure_dc() {
        let n = 6;
        let m = FeatureMap::filled(n, n, 1, 2.5).unwrap();
        let g = dft2(&m);
        let dc = g.dc_index();
        for (k, z) in g.channel(0).iter().enumerate() {
            if k == dc {
                assert!((z.re - 2.5 * (n * n) as f64).abs() < 1e-9 && z.im.abs() < 1e-9);
            } else {
                assert!(z.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn impulse_has_flat_magnitude() {
        let m = FeatureMap::from_fn(5, 8, 1, |y, x, _| if (y, x) == (0, 0) { 1.0 } else { 0.0 })
            .unwrap();
        assert!(dft2(&m)
            .channel(0)
            .iter()
            .all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn channel_blocks_cover_wide_maps() {
        let m = FeatureMap::from_fn(2, 3, 70, |y, x, c| (y * 1000 + x * 100 + c) as f32).unwrap();
        let mut seen = Vec::new();
        for_each_channel(&m, |c, plane| {
            assert_eq!(plane, m.channel_plane(c).as_slice());
            seen.push(c);
        });
        assert_eq!(seen, (0..70).collect::<Vec<_>>());
    }

    #[test]
    fn duplicated_channels_do_not_change_power() {
        let one = FeatureMap::from_fn(6, 6, 1, |y, x, _| ((y * 7 + x * 3) % 5) as f32).unwrap();
        let two = FeatureMap::from_fn(6, 6, 2, |y, x, _| one.get(y, x, 0)).unwrap();
        let a = power_spectrum(&dft2(&one));
        let b = power_spectrum(&dft2(&two));
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
        let g = dft2(&one);
        for (p, z) in a.values().iter().zip(g.channel(0)) {
            assert_eq!(*p, z.norm_sqr());
        }
    }

    #[test]
    fn small_grid_marks_empty_bins() {
        let p = PowerSpectrum::from_values(4, 4, vec![1.0; 16]);
        let rs = radial_spectrum(&p, &DiagnosticsConfig::default());
        assert_eq!(rs.bin_count(), 32);
        let populated = rs.means().iter().filter(|m| m.is_some()).count();
        assert!(populated < 8, "{populated}");
        for (m, n) in rs.means().iter().zip(rs.counts()) {
            assert_eq!(m.is_some(), *n > 0);
        }
        // radii on a 4x4 grid: 0.25 (x4), 0.354 (x4), 0.5 (x2); 0.559 and 0.707 dropped
        assert_eq!(rs.counts().iter().sum::<usize>(), 4 + 4 + 2);
        assert_eq!(populated, 3);
    }

    #[test]
    fn angular_folding() {
        let m = 8;
        assert_eq!(angular_bin(0.0, m), 0);
        assert_eq!(angular_bin(PI, m), 0);
        assert_eq!(angular_bin(-PI, m), 0);
        assert_eq!(angular_bin(-PI / 2.0, m), 4);
        assert_eq!(angular_bin(PI / 2.0, m), 4);
        assert_eq!(angular_bin(PI - 1e-9, m), 7);
    }

    #[test]
    fn angular_total_matches_in_disk_power() {
        let m = FeatureMap::from_fn(12, 12, 2, |y, x, c| ((y * 5 + x * 11 + c * 3) % 7) as f32)
            .unwrap();
        let p = power_spectrum(&dft2(&m));
        let cfg = DiagnosticsConfig::default();
        let a = angular_spectrum(&p, &cfg);
        let expected: f64 = p
            .points(cfg.dc_policy)
            .filter(|(u, v, _)| (u * u + v * v).sqrt() <= 0.5)
            .map(|t| t.2)
            .sum();
        assert!((a.total() - expected).abs() <= 1e-9 * expected);
        let zero = power_spectrum(&dft2(&FeatureMap::zeros(8, 8, 1).unwrap()));
        assert!(angular_spectrum(&zero, &cfg)
            .energies()
            .iter()
            .all(|&e| e == 0.0));
    }
}
