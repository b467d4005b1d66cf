//! Multi-scale retinex with colour restoration (MSRCR) as exposed by the GIMP
//! Retinex plug-in, plus the Shannon, Tsallis and Kaniadakis image entropies
//! used to pick the filter parameters that maximize the information content
//! of the output.
//!
//! The crate is organized bottom-up:
//!
//! - [`histogram`]: grey-tone histograms, probability distributions and joint
//!   distributions of image pairs.
//! - [`entropy`]: the entropy functionals, the ℨ-functional, joint,
//!   conditional and mutual forms, and entropy-vs-κ curves.
//! - [`retinex`]: scale distribution, Gaussian surround, single- and
//!   multi-scale retinex, colour restoration and the dynamic stretch.
//! - [`sweep`]: parameter grid enumeration, evaluation and ranking.
//! - [`fixture`]: a deterministic synthetic foggy test image.

pub mod entropy;
pub mod error;
pub mod fixture;
pub mod histogram;
pub mod image;
mod par;
pub mod retinex;
pub mod sweep;

pub use entropy::{EntropyCurve, EntropyKind};
pub use error::{Error, Result};
pub use histogram::{Histogram256, JointDist, ProbDist};
pub use image::{Channel, ImageRgb8, WorkingImage};
pub use retinex::{RetinexLevel, RetinexParams};
pub use sweep::{GridSpec, SweepRecord, SweepReport};
