//! Shannon, Tsallis and Kaniadakis (κ) entropies of grey-tone distributions,
//! the ℨ-functional that makes κ-entropy additive, the joint, conditional and
//! mutual forms, and sampled entropy-vs-κ curves.
//!
//! All logarithms are natural, so entropies are in nats. Zero-probability
//! bins contribute nothing (`0 ln 0 = 0`, `0^(1±κ) = 0`).
//!
//! The κ-entropy and ℨ are evaluated through the identities
//! `p^(1+κ) − p^(1−κ) = 2p·sinh(κ ln p)` and
//! `p^(1+κ) + p^(1−κ) = 2p·cosh(κ ln p)`, and Tsallis through
//! `1 − Σ p^q = −Σ p·expm1((q−1) ln p)`. Both keep full precision close to the
//! Shannon limit where the textbook difference quotients cancel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::{marginals, JointDist, ProbDist};

/// Below this distance from the limit point Tsallis and Kaniadakis entropies
/// are reported as the Shannon entropy.
pub const LIMIT_THRESHOLD: f64 = 1e-9;

/// Upper end of the κ range in which the small-index conditional entropy is
/// used; also the default end of entropy curves.
pub const KAPPA_SMALL_MAX: f64 = 0.1;

pub const DEFAULT_CURVE_STEPS: usize = 11;

/// Tsallis entropic index, `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Q(f64);

impl Q {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidIndex(format!("q must be positive, got {q}")));
        }
        Ok(Self(q))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn is_shannon_limit(self) -> bool {
        (self.0 - 1.0).abs() < LIMIT_THRESHOLD
    }
}

/// Kaniadakis entropic index, `κ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Kappa(f64);

impl Kappa {
    pub const ZERO: Kappa = Kappa(0.0);

    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidIndex(format!(
                "kappa must be non-negative, got {kappa}"
            )));
        }
        Ok(Self(kappa))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn is_shannon_limit(self) -> bool {
        self.0 < LIMIT_THRESHOLD
    }
}

macro_rules! index_conversions {
    ($t:ty) => {
        impl TryFrom<f64> for $t {
            type Error = Error;

            fn try_from(v: f64) -> Result<Self> {
                Self::new(v)
            }
        }

        impl From<$t> for f64 {
            fn from(v: $t) -> f64 {
                v.0
            }
        }
    };
}

index_conversions!(Q);
index_conversions!(Kappa);

/// Which functional to apply, e.g. to a flattened joint distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    Shannon,
    Tsallis(Q),
    Kaniadakis(Kappa),
}

impl EntropyKind {
    pub fn of(self, p: &ProbDist) -> f64 {
        self.of_probs(p.probs())
    }

    fn of_probs(self, p: &[f64]) -> f64 {
        match self {
            EntropyKind::Shannon => shannon_probs(p),
            EntropyKind::Tsallis(q) => tsallis_probs(p, q),
            EntropyKind::Kaniadakis(k) => kaniadakis_probs(p, k),
        }
    }
}

// `0.0 - sum` rather than `-sum`, so certain outcomes give +0 not -0.
fn shannon_probs(p: &[f64]) -> f64 {
    0.0 - p
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
}

fn tsallis_probs(p: &[f64], q: Q) -> f64 {
    if q.is_shannon_limit() {
        return shannon_probs(p);
    }
    let qm1 = q.get() - 1.0;
    (0.0 - p
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * (qm1 * v.ln()).exp_m1())
        .sum::<f64>())
        / qm1
}

fn kaniadakis_probs(p: &[f64], kappa: Kappa) -> f64 {
    if kappa.is_shannon_limit() {
        return shannon_probs(p);
    }
    let k = kappa.get();
    (0.0 - p
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * (k * v.ln()).sinh())
        .sum::<f64>())
        / k
}

fn z_probs(p: &[f64], kappa: Kappa) -> f64 {
    if kappa.get() == 0.0 {
        return 1.0;
    }
    let k = kappa.get();
    p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * (k * v.ln()).cosh())
        .sum()
}

/// `S = −Σ p_i ln p_i`.
pub fn shannon(p: &ProbDist) -> f64 {
    shannon_probs(p.probs())
}

/// `T_q = (1 − Σ p_i^q) / (q − 1)`; the Shannon entropy when `q` is within
/// [`LIMIT_THRESHOLD`] of 1.
pub fn tsallis(p: &ProbDist, q: Q) -> f64 {
    tsallis_probs(p.probs(), q)
}

/// `K_κ = −Σ (p_i^(1+κ) − p_i^(1−κ)) / 2κ`; the Shannon entropy for
/// `κ <` [`LIMIT_THRESHOLD`].
pub fn kaniadakis(p: &ProbDist, kappa: Kappa) -> f64 {
    kaniadakis_probs(p.probs(), kappa)
}

/// `ℨ_κ = Σ (p_i^(1+κ) + p_i^(1−κ)) / 2`, exactly 1 at `κ = 0`.
pub fn z_functional(p: &ProbDist, kappa: Kappa) -> f64 {
    z_probs(p.probs(), kappa)
}

/// Entropy of the pair (A, B), treating the joint matrix as one distribution.
pub fn joint_entropy(j: &JointDist, kind: EntropyKind) -> f64 {
    kind.of_probs(j.entries())
}

/// `T_q(A|B) = (T_q(A,B) − T_q(B)) / (1 + (1 − q) T_q(B))`, B being the
/// column variable.
pub fn tsallis_conditional(j: &JointDist, q: Q) -> Result<f64> {
    let (_, b) = marginals(j);
    let t_b = tsallis(&b, q);
    let t_ab = joint_entropy(j, EntropyKind::Tsallis(q));
    let denom = 1.0 + (1.0 - q.get()) * t_b;
    if !denom.is_finite() || denom.abs() < f64::MIN_POSITIVE {
        return Err(Error::DegenerateConditional(format!(
            "1 + (1 - q) T_q(B) = {denom}"
        )));
    }
    Ok((t_ab - t_b) / denom)
}

/// Small-index conditional κ-entropy
/// `K_κ(A|B) = (K_κ(A,B) − K_κ(B) ℨ_κ(A)) / ℨ_κ(B)`, valid for
/// `κ ≤` [`KAPPA_SMALL_MAX`]. At `κ = 0` this is `S(A,B) − S(B)`.
pub fn kaniadakis_conditional(j: &JointDist, kappa: Kappa) -> Result<f64> {
    let (a, b) = marginals(j);
    conditional_from_marginals(j, &a, &b, kappa)
}

fn conditional_from_marginals(
    j: &JointDist,
    a: &ProbDist,
    b: &ProbDist,
    kappa: Kappa,
) -> Result<f64> {
    if kappa.get() > KAPPA_SMALL_MAX {
        return Err(Error::InvalidIndex(format!(
            "conditional kappa-entropy needs kappa <= {KAPPA_SMALL_MAX}, got {}",
            kappa.get()
        )));
    }
    let z_b = z_functional(b, kappa);
    // ℨ ≥ Σ p_i = 1 for any distribution, so this only trips on corrupt input
    if !(z_b > 0.0 && z_b.is_finite()) {
        return Err(Error::DegenerateConditional(format!("Z_kappa(B) = {z_b}")));
    }
    let k_ab = joint_entropy(j, EntropyKind::Kaniadakis(kappa));
    Ok((k_ab - kaniadakis(b, kappa) * z_functional(a, kappa)) / z_b)
}

/// Mutual κ-entropy without renormalization, `K_κ(A) − K_κ(A|B)`.
pub fn kaniadakis_mutual(j: &JointDist, kappa: Kappa) -> Result<f64> {
    let (a, b) = marginals(j);
    let cond = conditional_from_marginals(j, &a, &b, kappa)?;
    Ok(kaniadakis(&a, kappa) - cond)
}

/// κ-entropy sampled on a uniform grid over `[0, kappa_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    kappas: Vec<f64>,
    values: Vec<f64>,
}

impl EntropyCurve {
    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    /// Value at κ = 0, i.e. the Shannon entropy.
    pub fn shannon(&self) -> f64 {
        self.values[0]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// `steps` evenly spaced κ values from 0 to `kappa_max` inclusive.
pub fn kappa_grid(kappa_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(kappa_max.is_finite() && kappa_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "kappa_max must be positive, got {kappa_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "a curve needs at least 2 steps, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                kappa_max
            } else {
                kappa_max * i as f64 / last
            }
        })
        .collect())
}

pub fn entropy_curve(p: &ProbDist, kappa_max: f64, steps: usize) -> Result<EntropyCurve> {
    let kappas = kappa_grid(kappa_max, steps)?;
    let values = kappas
        .iter()
        .map(|&k| Kappa::new(k).map(|k| kaniadakis(p, k)))
        .collect::<Result<_>>()?;
    Ok(EntropyCurve { kappas, values })
}
