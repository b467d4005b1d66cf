//! Multi-scale retinex with colour restoration, parameterized the way the
//! GIMP Retinex plug-in exposes it: a level (how the surround scales are
//! spread), the largest scale, the number of scales and the dynamic slider.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Channel, ImageRgb8, WorkingImage};
use crate::par;

pub const DEFAULT_SCALE: u32 = 240;
pub const DEFAULT_SCALE_DIVISION: u32 = 3;
pub const DEFAULT_DYNAMIC: f64 = 1.2;

pub const MIN_SCALE: u32 = 3;
pub const MAX_SCALE_DIVISION: u32 = 8;

/// Smallest admissible Gaussian standard deviation.
pub const MIN_SIGMA: f64 = 0.5;

/// Gain inside the colour restoration logarithm.
pub const RESTORATION_ALPHA: f64 = 128.0;

/// Stretch output for a working image with (numerically) zero spread.
pub const DEGENERATE_TONE: u8 = 128;
const DEGENERATE_STD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetinexLevel {
    /// Scales spread linearly; dark and bright areas treated alike.
    Uniform,
    /// Scales crowded at small surrounds; enhances dark areas.
    Low,
    /// Scales crowded at large surrounds; favours bright areas.
    High,
}

impl RetinexLevel {
    pub const ALL: [RetinexLevel; 3] =
        [RetinexLevel::Uniform, RetinexLevel::Low, RetinexLevel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            RetinexLevel::Uniform => "uniform",
            RetinexLevel::Low => "low",
            RetinexLevel::High => "high",
        }
    }
}

impl fmt::Display for RetinexLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RetinexLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(RetinexLevel::Uniform),
            "low" => Ok(RetinexLevel::Low),
            "high" => Ok(RetinexLevel::High),
            other => Err(Error::InvalidParams(format!(
                "unknown level {other:?}, expected uniform, low or high"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetinexParams {
    pub level: RetinexLevel,
    /// Largest surround size in pixels.
    pub scale: u32,
    /// Number of surround scales.
    pub scale_division: u32,
    /// Width of the output stretch in standard deviations.
    pub dynamic: f64,
}

impl Default for RetinexParams {
    fn default() -> Self {
        Self {
            level: RetinexLevel::Uniform,
            scale: DEFAULT_SCALE,
            scale_division: DEFAULT_SCALE_DIVISION,
            dynamic: DEFAULT_DYNAMIC,
        }
    }
}

impl RetinexParams {
    pub fn new(level: RetinexLevel, scale: u32, scale_division: u32, dynamic: f64) -> Result<Self> {
        let p = Self {
            level,
            scale,
            scale_division,
            dynamic,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_scale(self.scale, self.scale_division)?;
        check_dynamic(self.dynamic)
    }

    /// Short identifier, e.g. `low_s240_n3_d1.2`.
    pub fn id(&self) -> String {
        format!(
            "{}_s{}_n{}_d{}",
            self.level, self.scale, self.scale_division, self.dynamic
        )
    }
}

fn check_scale(scale: u32, n: u32) -> Result<()> {
    if scale < MIN_SCALE {
        return Err(Error::InvalidParams(format!(
            "scale must be at least {MIN_SCALE}, got {scale}"
        )));
    }
    if !(1..=MAX_SCALE_DIVISION).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "scale division must be in 1..={MAX_SCALE_DIVISION}, got {n}"
        )));
    }
    Ok(())
}

fn check_dynamic(dynamic: f64) -> Result<()> {
    if !(dynamic.is_finite() && dynamic > 0.0) {
        return Err(Error::InvalidParams(format!(
            "dynamic must be positive, got {dynamic}"
        )));
    }
    Ok(())
}

/// Gaussian surround widths for `n` scales up to `scale`.
///
/// Uniform spaces them linearly from 2 (capped at `scale`), low grows them
/// exponentially from 2 upward, high places them exponentially down from
/// `scale`. One scale gives
/// `scale / 2`, two give `scale / 2` and `scale`.
pub fn scale_distribution(level: RetinexLevel, scale: u32, n: u32) -> Result<Vec<f64>> {
    check_scale(scale, n)?;
    let s = f64::from(scale);
    match n {
        1 => return Ok(vec![s / 2.0]),
        2 => return Ok(vec![s / 2.0, s]),
        _ => {}
    }
    let nf = f64::from(n);
    let log_step = (s - 2.0).ln() / nf;
    Ok((0..n)
        .map(f64::from)
        .map(|i| match level {
            // exceeds `scale` only when scale < 2n
            RetinexLevel::Uniform => (2.0 + i * (s / nf)).min(s),
            RetinexLevel::Low => 2.0 + (i * log_step).exp(),
            RetinexLevel::High => s - (i * log_step).exp(),
        })
        .collect())
}

/// Normalized 1-D Gaussian taps for offsets `-r..=r`, `r = ⌈3σ⌉`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma >= MIN_SIGMA) {
        return Err(Error::InvalidParams(format!(
            "sigma must be at least {MIN_SIGMA}, got {sigma}"
        )));
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let denom = 2.0 * sigma * sigma;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-((k * k) as f64) / denom).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    Ok(taps)
}

/// 1-D convolution with clamp-to-edge replication.
///
/// Taps that fall off either end all read the edge sample, so their weights
/// are pre-summed; the inner loop only touches in-range samples. This keeps
/// surrounds much larger than the image affordable.
fn convolve_clamped(src: &[f64], dst: &mut [f64], kernel: &[f64], prefix: &[f64]) {
    let n = src.len() as i64;
    let r = (kernel.len() / 2) as i64;
    let last = src[src.len() - 1];
    for (x, out) in dst.iter_mut().enumerate() {
        let x = x as i64;
        // tap index t = offset + r, reading src[x + offset]
        let t_lo = (r - x).max(0);
        let t_hi = (n - 1 - x + r).min(2 * r);
        let mut acc = 0.0;
        if t_lo > 0 {
            acc += prefix[t_lo as usize] * src[0];
        }
        let base = x - r;
        for t in t_lo..=t_hi {
            acc += kernel[t as usize] * src[(base + t) as usize];
        }
        if t_hi < 2 * r {
            acc += (prefix[kernel.len()] - prefix[(t_hi + 1) as usize]) * last;
        }
        *out = acc;
    }
}

/// Separable Gaussian blur with standard deviation `sigma`, kernel truncated
/// at `⌈3σ⌉` and edges replicated.
pub fn gaussian_blur(channel: &Channel, sigma: f64) -> Result<Channel> {
    let kernel = gaussian_kernel(sigma)?;
    let mut prefix = Vec::with_capacity(kernel.len() + 1);
    prefix.push(0.0);
    for t in &kernel {
        prefix.push(prefix[prefix.len() - 1] + t);
    }

    let (w, h) = (channel.width(), channel.height());
    let src = channel.data();
    let mut horiz = vec![0.0; w * h];
    for (row_in, row_out) in src.chunks_exact(w).zip(horiz.chunks_exact_mut(w)) {
        convolve_clamped(row_in, row_out, &kernel, &prefix);
    }

    let mut out = vec![0.0; w * h];
    let mut col_in = vec![0.0; h];
    let mut col_out = vec![0.0; h];
    for x in 0..w {
        for (y, v) in col_in.iter_mut().enumerate() {
            *v = horiz[y * w + x];
        }
        convolve_clamped(&col_in, &mut col_out, &kernel, &prefix);
        for (y, v) in col_out.iter().enumerate() {
            out[y * w + x] = *v;
        }
    }
    Ok(Channel::from_parts(w, h, out))
}

/// `ln(I + 1) − ln(G_σ * I + 1)`.
pub fn single_scale_retinex(channel: &Channel, sigma: f64) -> Result<Channel> {
    let surround = gaussian_blur(channel, sigma)?;
    let data = channel
        .data()
        .iter()
        .zip(surround.data())
        .map(|(&v, &s)| (v + 1.0).ln() - (s + 1.0).ln())
        .collect();
    Ok(Channel::from_parts(channel.width(), channel.height(), data))
}

/// Equal-weight average of single-scale retinex outputs, one per sigma.
pub fn multi_scale_retinex(channel: &Channel, sigmas: &[f64]) -> Result<Channel> {
    if sigmas.is_empty() {
        return Err(Error::InvalidParams("no surround scales".into()));
    }
    let per_scale = par::map(sigmas, |&s| single_scale_retinex(channel, s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(average(&per_scale))
}

fn average(parts: &[Channel]) -> Channel {
    let (w, h) = (parts[0].width(), parts[0].height());
    let weight = 1.0 / parts.len() as f64;
    let mut acc = vec![0.0; w * h];
    for part in parts {
        for (a, v) in acc.iter_mut().zip(part.data()) {
            *a += v;
        }
    }
    acc.iter_mut().for_each(|a| *a *= weight);
    Channel::from_parts(w, h, acc)
}

/// Colour restoration factor `ln(α I_c + 1) − ln(I_R + I_G + I_B + 3)` for
/// each channel.
pub fn color_restoration(channels: &[Channel; 3]) -> [Channel; 3] {
    let (w, h) = (channels[0].width(), channels[0].height());
    let log_sum: Vec<f64> = (0..w * h)
        .map(|i| (channels.iter().map(|c| c.data()[i]).sum::<f64>() + 3.0).ln())
        .collect();
    channels.each_ref().map(|c| {
        let data = c
            .data()
            .iter()
            .zip(&log_sum)
            .map(|(&v, &ls)| (RESTORATION_ALPHA * v + 1.0).ln() - ls)
            .collect();
        Channel::from_parts(w, h, data)
    })
}

/// Linear stretch of `[μ − D·s, μ + D·s]` onto `[0, 255]`, with the mean and
/// standard deviation pooled over all three planes. Values outside the
/// window clip.
pub fn dynamic_stretch(working: &WorkingImage, dynamic: f64) -> Result<ImageRgb8> {
    check_dynamic(dynamic)?;
    let (w, h) = (working.width(), working.height());
    let count = (3 * w * h) as f64;
    let mean = working.values().sum::<f64>() / count;
    let var = working
        .values()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / count;
    let std = var.sqrt();

    if std < DEGENERATE_STD {
        return ImageRgb8::filled(w, h, [DEGENERATE_TONE; 3]);
    }

    let lo = mean - dynamic * std;
    let hi = mean + dynamic * std;
    let gain = 255.0 / (hi - lo);
    let to_u8 = |v: f64| ((v - lo) * gain).clamp(0.0, 255.0).round() as u8;

    let mut data = Vec::with_capacity(3 * w * h);
    let planes = [working.plane(0), working.plane(1), working.plane(2)];
    for i in 0..w * h {
        for plane in planes {
            data.push(to_u8(plane[i]));
        }
    }
    ImageRgb8::new(w, h, data)
}

/// Log-domain MSRCR output before the stretch.
pub fn msrcr_working(image: &ImageRgb8, params: &RetinexParams) -> Result<WorkingImage> {
    params.validate()?;
    let sigmas = scale_distribution(params.level, params.scale, params.scale_division)?;
    let channels = image.to_channels();

    // every (channel, scale) blur is independent; reduce in a fixed order
    let jobs: Vec<(usize, f64)> = (0..3)
        .flat_map(|c| sigmas.iter().map(move |&s| (c, s)))
        .collect();
    let ssr = par::map(&jobs, |&(c, s)| single_scale_retinex(&channels[c], s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let msr: Vec<Channel> = ssr.chunks(sigmas.len()).map(average).collect();

    let restoration = color_restoration(&channels);
    let restored: Vec<Channel> = msr
        .iter()
        .zip(&restoration)
        .map(|(r, c)| {
            let data = r.data().iter().zip(c.data()).map(|(a, b)| a * b).collect();
            Channel::from_parts(r.width(), r.height(), data)
        })
        .collect();
    let [r, g, b]: [Channel; 3] = restored.try_into().expect("three restored channels");
    WorkingImage::from_channels([r, g, b])
}

/// Full MSRCR filter: multi-scale retinex, colour restoration, dynamic
/// stretch back to 8 bits.
pub fn msrcr(image: &ImageRgb8, params: &RetinexParams) -> Result<ImageRgb8> {
    dynamic_stretch(&msrcr_working(image, params)?, params.dynamic)
}
