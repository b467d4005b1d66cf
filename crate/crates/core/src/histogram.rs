//! Grey-tone histograms and the probability distributions built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageRgb8;

pub const TONES: usize = 256;

/// Allowed deviation of a distribution's total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// BT.601 luma rounded half away from zero, computed in integers so that
/// exact ties (x.5) never depend on floating-point rounding.
pub fn grey_tone([r, g, b]: [u8; 3]) -> u8 {
    let weighted = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    // weights sum to 1000, so the result never exceeds 255
    ((weighted + 500) / 1000).min(255) as u8
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram256 {
    counts: [u64; TONES],
    total: u64,
}

impl Histogram256 {
    pub fn from_counts(counts: [u64; TONES]) -> Self {
        Self {
            total: counts.iter().sum(),
            counts,
        }
    }

    pub fn counts(&self) -> &[u64; TONES] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Histogram of the grey tones of `image`.
pub fn grey_histogram(image: &ImageRgb8) -> Result<Histogram256> {
    if image.width() == 0 || image.height() == 0 {
        return Err(Error::InvalidInput("empty image".into()));
    }
    let mut counts = [0u64; TONES];
    for px in image.pixels() {
        counts[grey_tone(px) as usize] += 1;
    }
    Ok(Histogram256::from_counts(counts))
}

/// Normalized frequencies `p_i`. Usually 256 tones, but joint distributions
/// are flattened into longer vectors of the same type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbDist {
    p: Vec<f64>,
}

impl ProbDist {
    /// Validates non-negativity and unit mass.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidInput("empty distribution".into()));
        }
        if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "probability {v} is negative or not finite"
            )));
        }
        let mass = compensated_sum(&p);
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {mass}, not 1"
            )));
        }
        Ok(Self { p })
    }

    /// Normalizes arbitrary non-negative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "weights must have positive finite total, got {total}"
            )));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("uniform over zero outcomes".into()));
        }
        Ok(Self {
            p: vec![1.0 / n as f64; n],
        })
    }

    /// All mass on outcome `at` of `n`.
    pub fn delta(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::InvalidInput(format!("index {at} outside {n} bins")));
        }
        let mut p = vec![0.0; n];
        p[at] = 1.0;
        Ok(Self { p })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Iterator over the non-zero probabilities.
    pub fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.p.iter().copied().filter(|&v| v > 0.0)
    }
}

impl TryFrom<Vec<f64>> for ProbDist {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        Self::new(p)
    }
}

impl From<ProbDist> for Vec<f64> {
    fn from(d: ProbDist) -> Self {
        d.p
    }
}

pub fn to_distribution(h: &Histogram256) -> Result<ProbDist> {
    if h.total == 0 {
        return Err(Error::InvalidInput("histogram has no samples".into()));
    }
    let total = h.total as f64;
    ProbDist::new(h.counts.iter().map(|&c| c as f64 / total).collect())
}

/// Shorthand for `to_distribution(grey_histogram(image))`.
pub fn image_distribution(image: &ImageRgb8) -> Result<ProbDist> {
    to_distribution(&grey_histogram(image)?)
}

/// Joint distribution of two variables, row index = A, column index = B.
///
/// When built from images the integer co-occurrence counts are kept, so the
/// marginals follow exactly the same path as the single-image histograms.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
    counts: Option<Vec<u64>>,
}

impl JointDist {
    pub fn new(rows: usize, cols: usize, p: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || p.len() != rows.saturating_mul(cols) {
            return Err(Error::InvalidInput(format!(
                "expected {rows}x{cols} joint entries, got {}",
                p.len()
            )));
        }
        // reuse the mass and sign checks
        let p = ProbDist::new(p)?.p;
        Ok(Self {
            rows,
            cols,
            p,
            counts: None,
        })
    }

    /// Outer product `a ⊗ b`: the joint of two independent variables.
    pub fn product(a: &ProbDist, b: &ProbDist) -> Result<Self> {
        let p = a
            .probs()
            .iter()
            .flat_map(|&u| b.probs().iter().map(move |&v| u * v))
            .collect();
        Self::new(a.len(), b.len(), p)
    }

    /// Joint of a variable with itself: `p` on the diagonal.
    pub fn diagonal(a: &ProbDist) -> Result<Self> {
        let n = a.len();
        let mut p = vec![0.0; n * n];
        for (i, &v) in a.probs().iter().enumerate() {
            p[i * n + i] = v;
        }
        Self::new(n, n, p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.p[row * self.cols + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    /// The joint matrix as one distribution over `rows * cols` outcomes.
    pub fn flatten(&self) -> ProbDist {
        ProbDist { p: self.p.clone() }
    }
}

pub fn joint_histogram(a: &ImageRgb8, b: &ImageRgb8) -> Result<JointDist> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::InvalidInput(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let mut counts = vec![0u64; TONES * TONES];
    for (pa, pb) in a.pixels().zip(b.pixels()) {
        counts[grey_tone(pa) as usize * TONES + grey_tone(pb) as usize] += 1;
    }
    let total = a.pixel_count() as f64;
    let p = counts.iter().map(|&c| c as f64 / total).collect();
    let mut joint = JointDist::new(TONES, TONES, p)?;
    joint.counts = Some(counts);
    Ok(joint)
}

/// Row sums (A) and column sums (B).
pub fn marginals(j: &JointDist) -> (ProbDist, ProbDist) {
    if let Some(counts) = &j.counts {
        let mut rows = vec![0u64; j.rows];
        let mut cols = vec![0u64; j.cols];
        for (i, &c) in counts.iter().enumerate() {
            rows[i / j.cols] += c;
            cols[i % j.cols] += c;
        }
        let total: u64 = rows.iter().sum();
        let norm = |v: Vec<u64>| ProbDist {
            p: v.into_iter().map(|c| c as f64 / total as f64).collect(),
        };
        return (norm(rows), norm(cols));
    }
    let mut rows = vec![0.0; j.rows];
    let mut cols = vec![0.0; j.cols];
    for (i, &v) in j.p.iter().enumerate() {
        rows[i / j.cols] += v;
        cols[i % j.cols] += v;
    }
    (ProbDist { p: rows }, ProbDist { p: cols })
}

fn compensated_sum(values: &[f64]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
