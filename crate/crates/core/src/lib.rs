//! Numerical certification of frame and Riesz-basis properties for
//! integer-shift systems, together with the synthesis/analysis/reconstruction
//! operators of the generated shift-invariant spaces.
//!
//! The library builds two kinds of generator families — smooth compactly
//! supported frequency-side bumps, and convolution powers of a box (B-splines
//! of low regularity) — and examines, over a frequency grid, the rank profile
//! of the shifted transform matrix and the spectrum of the associated Gram
//! matrix. Constant rank across the grid certifies (numerically) that the
//! shift system is a frame for the space it spans; rank equal to the number of
//! generators upgrades that to a Riesz basis; a rank that changes with the
//! frequency witnesses a space that is not closed, for which no frame bounds
//! exist. Every certificate is grid-sampled and carries an explicit caveat to
//! that effect.

pub mod config;
pub mod error;
pub mod generators;
pub mod quad;
pub mod spaces;
pub mod spectral;
pub mod spline;
pub mod weights;

pub use config::{FamilyConfig, RunConfig};
pub use error::{Error, Result};
pub use generators::{
    BumpGenerator, BumpProfile, Generator, GeneratorFamily, GuardPoint, SampleGrid, ShiftUnit,
};
pub use spaces::{CoefficientArray, Reconstruction, SampledSignal, SpaceContext};
pub use spectral::{
    Classification, DualSample, FrameReport, FrequencyGrid, GramSample, GridSpec, RankProfile,
    ScanPoint, ScanResult, ShiftedMatrixSample,
};
pub use spline::SplineGenerator;
pub use weights::{NormExponent, Weight, WeightPair};
