//! Independent reference implementations used as test oracles. Nothing here
//! calls into the code paths it checks: entropies use the direct power
//! forms, the blur is a brute-force 2-D convolution.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|v| v * v.ln())
        .sum::<f64>()
}

pub fn tsallis(p: &[f64], q: f64) -> f64 {
    (1.0 - p
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|v| v.powf(q))
        .sum::<f64>())
        / (q - 1.0)
}

pub fn kaniadakis(p: &[f64], k: f64) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|v| (v.powf(1.0 + k) - v.powf(1.0 - k)) / (2.0 * k))
        .sum::<f64>()
}

pub fn z(p: &[f64], k: f64) -> f64 {
    p.iter()
        .filter(|&&v| v > 0.0)
        .map(|v| (v.powf(1.0 + k) + v.powf(1.0 - k)) / 2.0)
        .sum()
}

/// Random distribution over `n` bins; roughly a quarter of the bins empty.
pub fn random_dist(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                rng.random_range(0.0..1.0f64).powi(3)
            }
        })
        .collect();
    if w.iter().all(|&v| v == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|v| v / total).collect()
}

pub fn kernel(sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as i64;
    let raw: Vec<f64> = (-r..=r)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Full 2-D convolution with the outer-product kernel and clamped reads.
pub fn brute_blur(data: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    let k = kernel(sigma);
    let r = (k.len() / 2) as i64;
    let clamp = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for dy in -r..=r {
                let yy = clamp(y as i64 + dy, h);
                let wy = k[(dy + r) as usize];
                for dx in -r..=r {
                    let xx = clamp(x as i64 + dx, w);
                    acc += wy * k[(dx + r) as usize] * data[yy * w + xx];
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}
