//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's numerical code.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use specprobe::{FeatureMap, UpsampleKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_map(h: usize, w: usize, c: usize, seed: u64) -> FeatureMap {
    let mut r = rng(seed);
    let data = (0..h * w * c)
        .map(|_| r.sample::<f64, _>(StandardNormal) as f32)
        .collect();
    FeatureMap::new(h, w, c, data).unwrap()
}

/// Naive double-loop DFT of channel `c`, laid out centered and row-major.
pub fn naive_dft(map: &FeatureMap, c: usize) -> Vec<Complex64> {
    let (h, w, _) = map.shape();
    let mut out = Vec::with_capacity(h * w);
    for i in 0..h {
        let ky = i as f64 - (h / 2) as f64;
        for j in 0..w {
            let kx = j as f64 - (w / 2) as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..h {
                for x in 0..w {
                    let phase = -2.0 * PI * (ky * y as f64 / h as f64 + kx * x as f64 / w as f64);
                    acc += Complex64::from_polar(f64::from(map.get(y, x, c)), phase);
                }
            }
            out.push(acc);
        }
    }
    out
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Kernel value, written out from the textbook formulas.
pub fn kernel(kind: UpsampleKind, x: f64, lanczos_a: f64, cubic_a: f64) -> f64 {
    let t = x.abs();
    match kind {
        UpsampleKind::Bilinear => (1.0 - t).max(0.0),
        UpsampleKind::Bicubic => {
            let a = cubic_a;
            if t <= 1.0 {
                (a + 2.0) * t.powi(3) - (a + 3.0) * t.powi(2) + 1.0
            } else if t < 2.0 {
                a * t.powi(3) - 5.0 * a * t.powi(2) + 8.0 * a * t - 4.0 * a
            } else {
                0.0
            }
        }
        UpsampleKind::Lanczos => {
            if t < lanczos_a {
                sinc(x) * sinc(x / lanczos_a)
            } else {
                0.0
            }
        }
        _ => panic!("no kernel for {kind:?}"),
    }
}

/// Direct per-output-pixel evaluation of the 2D tensor-product kernel with
/// half-pixel centers, clamp-to-edge taps and weights renormalized to sum to 1.
pub fn direct_resample(
    map: &FeatureMap,
    kind: UpsampleKind,
    th: usize,
    tw: usize,
    lanczos_a: f64,
    cubic_a: f64,
) -> Vec<f64> {
    let (h, w, ch) = map.shape();
    let mut out = vec![0.0; th * tw * ch];
    for oy in 0..th {
        let sy = (oy as f64 + 0.5) * h as f64 / th as f64 - 0.5;
        for ox in 0..tw {
            let sx = (ox as f64 + 0.5) * w as f64 / tw as f64 - 0.5;
            if kind == UpsampleKind::Nearest {
                let y = ((sy + 0.5).floor().max(0.0) as usize).min(h - 1);
                let x = ((sx + 0.5).floor().max(0.0) as usize).min(w - 1);
                for c in 0..ch {
                    out[(oy * tw + ox) * ch + c] = f64::from(map.get(y, x, c));
                }
                continue;
            }
            let mut acc = vec![0.0; ch];
            let mut wsum = 0.0;
            for ty in (sy.floor() as i64 - 4)..=(sy.floor() as i64 + 5) {
                let ky = kernel(kind, sy - ty as f64, lanczos_a, cubic_a);
                if ky == 0.0 {
                    continue;
                }
                for tx in (sx.floor() as i64 - 4)..=(sx.floor() as i64 + 5) {
                    let kx = kernel(kind, sx - tx as f64, lanczos_a, cubic_a);
                    if kx == 0.0 {
                        continue;
                    }
                    let y = ty.clamp(0, h as i64 - 1) as usize;
                    let x = tx.clamp(0, w as i64 - 1) as usize;
                    wsum += ky * kx;
                    for (c, a) in acc.iter_mut().enumerate() {
                        *a += ky * kx * f64::from(map.get(y, x, c));
                    }
                }
            }
            for c in 0..ch {
                out[(oy * tw + ox) * ch + c] = acc[c] / wsum;
            }
        }
    }
    out
}

/// Average-tie ranks by counting: rank = 1 + #less + (#equal - 1) / 2.
pub fn brute_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Covariance-formula Pearson.
pub fn direct_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Heap's algorithm over indices `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Radial bin means recomputed from a centered power grid, DC excluded.
pub fn radial_means(power: &[f64], h: usize, w: usize, bins: usize) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; bins];
    let mut cnt = vec![0usize; bins];
    for i in 0..h {
        for j in 0..w {
            if i == h / 2 && j == w / 2 {
                continue;
            }
            let v = (i as f64 - (h / 2) as f64) / h as f64;
            let u = (j as f64 - (w / 2) as f64) / w as f64;
            let r = (u * u + v * v).sqrt();
            if r > 0.5 {
                continue;
            }
            let k = ((r / 0.5 * bins as f64) as usize).min(bins - 1);
            sum[k] += power[i * w + j];
            cnt[k] += 1;
        }
    }
    sum.iter()
        .zip(&cnt)
        .map(|(s, &n)| (n > 0).then(|| s / n as f64))
        .collect()
}
