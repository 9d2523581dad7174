//! JSON run configurations. Each file names one of the generator
//! constructions, its parameters, and (optionally) the classification the
//! construction is expected to produce, so a rank scan doubles as a
//! regression check: the scan exits nonzero when the verdict and the declared
//! expectation disagree.

use crate::error::{Error, Result};
use crate::generators::{
    family_claim_section3, family_lemma_4_1, family_theorem_3, family_theorem_3_general,
    family_theorem_4_3, family_theorem_4_6, min_index_gap, GeneratorFamily,
};
use crate::spectral::{Classification, GridSpec, REL_TOL_DEFAULT};
use crate::spline::spline_family;
use crate::weights::{NormExponent, Weight};
use serde::{Deserialize, Serialize};

/// Default number of reconstruction trials.
pub const DEFAULT_TRIALS: usize = 20;

/// The generator construction part of a run configuration, tagged by the
/// `config` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "config", deny_unknown_fields)]
pub enum FamilyConfig {
    /// hat(phi_i)(xi) = theta(xi + k_i * pi), theta a mollifier bump on
    /// [-pi-eps, pi+eps].
    #[serde(rename = "theorem3", alias = "theorem_3")]
    Theorem3 { k: Vec<i64>, epsilon: f64 },
    /// Same with theta supported on an arbitrary interval of length > 2*pi.
    #[serde(rename = "theorem3_general", alias = "theorem_3_general")]
    Theorem3General { support: (f64, f64), k: Vec<i64>, epsilon: f64 },
    /// The unshifted (theta, psi) pair spanning a rank-1 frame.
    #[serde(rename = "lemma_4_1", alias = "lemma41")]
    Lemma41 { epsilon: f64 },
    /// 2r members, rank r frame.
    #[serde(rename = "theorem_4_3", alias = "theorem43")]
    Theorem43 { r: usize, epsilon: f64 },
    /// 3r members, rank 2r frame.
    #[serde(rename = "theorem_4_6", alias = "theorem46")]
    Theorem46 { r: usize, epsilon: f64 },
    /// Single generator with hat support inside [-pi, pi]: non-closed span.
    #[serde(rename = "claim_section3_negative", alias = "claim_section3")]
    ClaimSection3 {
        #[serde(default)]
        margin: f64,
    },
    /// B-spline family (phi_k, ..., phi_{k+r-1}) of box width a.
    #[serde(rename = "spline")]
    Spline { k: i64, r: usize, a: f64 },
}

impl FamilyConfig {
    /// Instantiates the generator family (validating parameters).
    pub fn build(&self) -> Result<GeneratorFamily> {
        match self {
            FamilyConfig::Theorem3 { k, epsilon } => family_theorem_3(k, *epsilon),
            FamilyConfig::Theorem3General { support, k, epsilon } => {
                family_theorem_3_general(*support, k, *epsilon)
            }
            FamilyConfig::Lemma41 { epsilon } => family_lemma_4_1(*epsilon),
            FamilyConfig::Theorem43 { r, epsilon } => family_theorem_4_3(*r, *epsilon),
            FamilyConfig::Theorem46 { r, epsilon } => family_theorem_4_6(*r, *epsilon),
            FamilyConfig::ClaimSection3 { margin } => family_claim_section3(*margin),
            FamilyConfig::Spline { k, r, a } => spline_family(*k, *r, *a),
        }
    }

    /// The classification the construction itself predicts, when it predicts
    /// one: theorem3 families split on the index-gap condition, the section-3
    /// claim is the designed negative, the frame constructions and integer
    /// spline families have known verdicts. The general theorem3 variant
    /// makes no prediction (the support/shift interplay is the user's).
    pub fn predicted(&self) -> Option<Classification> {
        match self {
            FamilyConfig::Theorem3 { k, .. } => {
                Some(if k.len() < 2 || min_index_gap(k) >= 2 {
                    Classification::RieszBasis
                } else {
                    Classification::NotClosed
                })
            }
            FamilyConfig::Theorem3General { .. } => None,
            FamilyConfig::Lemma41 { .. }
            | FamilyConfig::Theorem43 { .. }
            | FamilyConfig::Theorem46 { .. } => Some(Classification::Frame),
            FamilyConfig::ClaimSection3 { .. } => Some(Classification::NotClosed),
            FamilyConfig::Spline { .. } => Some(Classification::RieszBasis),
        }
    }

    /// Replaces the bump profile margin parameter; errors for constructions
    /// that do not have one (spline widths are not margins).
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let mut out = self.clone();
        match &mut out {
            FamilyConfig::Theorem3 { epsilon: e, .. }
            | FamilyConfig::Theorem3General { epsilon: e, .. }
            | FamilyConfig::Lemma41 { epsilon: e }
            | FamilyConfig::Theorem43 { epsilon: e, .. }
            | FamilyConfig::Theorem46 { epsilon: e, .. } => *e = epsilon,
            FamilyConfig::ClaimSection3 { .. } | FamilyConfig::Spline { .. } => {
                return Err(Error::Config(
                    "this family configuration has no epsilon parameter".into(),
                ))
            }
        }
        Ok(out)
    }
}

/// A complete run configuration: family, expected verdict, grid and
/// tolerance settings, weight, seed, trial count and norm exponent. Optional
/// fields fall back to the artifact defaults, and command-line flags may
/// override any of the numeric settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyConfig,
    /// Declared expectation; when absent the construction's own prediction
    /// (if any) is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Classification>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_weight")]
    pub weight: Weight,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_p")]
    pub p: NormExponent,
}

fn default_rel_tol() -> f64 {
    REL_TOL_DEFAULT
}

fn default_weight() -> Weight {
    Weight::Constant
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_p() -> NormExponent {
    NormExponent::Two
}

impl RunConfig {
    pub fn new(family: FamilyConfig) -> Self {
        RunConfig {
            family,
            expect: None,
            grid: GridSpec::default(),
            rel_tol: default_rel_tol(),
            weight: default_weight(),
            seed: 0,
            trials: default_trials(),
            p: default_p(),
        }
    }

    /// Parses and validates a JSON configuration.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid run configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run configuration serialises")
    }

    /// Numeric sanity: base grid of at least 64 points, positive guard band,
    /// usable relative tolerance, at least one trial.
    pub fn validate(&self) -> Result<()> {
        if self.grid.n < 64 {
            return Err(Error::Config(format!(
                "grid n must be >= 64, got {}",
                self.grid.n
            )));
        }
        if !(self.grid.guard_delta > 0.0 && self.grid.guard_delta < 1.0) {
            return Err(Error::Config(format!(
                "guard band must lie in (0, 1), got {}",
                self.grid.guard_delta
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Config(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        Ok(())
    }

    /// The verdict this run is checked against: the declared `expect` when
    /// present, otherwise the construction's own prediction.
    pub fn expected(&self) -> Option<Classification> {
        self.expect.or_else(|| self.family.predicted())
    }
}
