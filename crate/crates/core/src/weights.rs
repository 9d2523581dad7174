//! Weight functions and the weighted sequence / function / amalgam norms they
//! induce. Two concrete weights are provided: polynomial growth (1+|x|)^s,
//! which is exactly submultiplicative for s >= 0, and the constant weight.
//! A weight mu is considered moderate with respect to a submultiplicative
//! omega when mu(x+y) <= C * omega(x) * mu(y); that inequality is what makes
//! the weighted norms translation-compatible, and `check_moderate` probes it
//! on a grid.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Norm exponent restricted to the endpoints and the Hilbert case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormExponent {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Inf,
}

impl NormExponent {
    /// Parses the CLI spelling: "1", "2" or "inf".
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(NormExponent::One),
            "2" => Ok(NormExponent::Two),
            "inf" => Ok(NormExponent::Inf),
            other => Err(Error::invalid(
                "p",
                format!("expected one of 1, 2, inf; got `{other}`"),
            )),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NormExponent::One => "1",
            NormExponent::Two => "2",
            NormExponent::Inf => "inf",
        }
    }
}

/// A pointwise weight on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Weight {
    /// (1+|x|)^s with s >= 0.
    #[serde(rename = "poly")]
    PolynomialGrowth { s: f64 },
    /// Identically 1.
    #[serde(rename = "const")]
    Constant,
}

impl Weight {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Weight::PolynomialGrowth { s } => (1.0 + x.abs()).powf(*s),
            Weight::Constant => 1.0,
        }
    }
}

/// A submultiplicative weight together with a weight moderate against it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    pub omega: Weight,
    pub mu: Weight,
    pub moderation_constant: f64,
}

/// Builds the polynomial-growth weight (1+|x|)^s.
pub fn make_polynomial_weight(s: f64) -> Result<Weight> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::invalid(
            "s",
            format!("polynomial weight exponent must be finite and >= 0, got {s}"),
        ));
    }
    Ok(Weight::PolynomialGrowth { s })
}

/// Verifies mu(x+y) <= C * omega(x) * mu(y) * (1+tolerance) over all grid pairs.
pub fn check_moderate(pair: &WeightPair, grid: &[f64], tolerance: f64) -> Result<bool> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "moderation check needs a non-empty grid"));
    }
    if pair.moderation_constant <= 0.0 {
        return Err(Error::invalid(
            "moderation_constant",
            format!("must be positive, got {}", pair.moderation_constant),
        ));
    }
    let slack = 1.0 + tolerance;
    for &x in grid {
        for &y in grid {
            let lhs = pair.mu.eval(x + y);
            let rhs = pair.moderation_constant * pair.omega.eval(x) * pair.mu.eval(y) * slack;
            if lhs > rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Weighted l^p norm of a finitely supported integer-indexed sequence.
pub fn seq_norm(c: &BTreeMap<i64, Complex64>, mu: &Weight, p: NormExponent) -> Result<f64> {
    for v in c.values() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteInput { context: "seq_norm" });
        }
    }
    let terms = c.iter().map(|(&j, v)| v.norm() * mu.eval(j as f64));
    Ok(reduce_norm(terms, p))
}

/// Weighted L^p norm of uniform samples starting at `x0` with step `h`,
/// by plain Riemann sum (sup of samples at p = infinity).
pub fn grid_function_norm(
    x0: f64,
    h: f64,
    samples: &[Complex64],
    mu: &Weight,
    p: NormExponent,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", format!("step must be positive, got {h}")));
    }
    for v in samples {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteInput {
                context: "grid_function_norm",
            });
        }
    }
    let weighted = samples
        .iter()
        .enumerate()
        .map(|(k, v)| v.norm() * mu.eval(x0 + k as f64 * h));
    Ok(match p {
        NormExponent::One => h * weighted.sum::<f64>(),
        NormExponent::Two => (h * weighted.map(|t| t * t).sum::<f64>()).sqrt(),
        NormExponent::Inf => weighted.fold(0.0, f64::max),
    })
}

/// Amalgam norm: l^p_mu over integer cells of per-cell sups of |f|.
///
/// The sup over [j, j+1) is approximated from below by the max over
/// `subgrid_points` equispaced points j + s/subgrid_points.
pub fn amalgam_norm(
    f: impl Fn(f64) -> Complex64,
    range: std::ops::RangeInclusive<i64>,
    mu: &Weight,
    p: NormExponent,
    subgrid_points: usize,
) -> Result<f64> {
    if range.is_empty() {
        return Err(Error::invalid("range", "amalgam norm needs a non-empty cell range"));
    }
    if subgrid_points < 2 {
        return Err(Error::invalid(
            "subgrid_points",
            format!("need at least 2 subgrid points, got {subgrid_points}"),
        ));
    }
    let cells = range.map(|j| {
        let sup = (0..subgrid_points)
            .map(|s| f(j as f64 + s as f64 / subgrid_points as f64).norm())
            .fold(0.0, f64::max);
        sup * mu.eval(j as f64)
    });
    Ok(reduce_norm(cells, p))
}

fn reduce_norm(terms: impl Iterator<Item = f64>, p: NormExponent) -> f64 {
    match p {
        NormExponent::One => terms.sum(),
        NormExponent::Two => terms.map(|t| t * t).sum::<f64>().sqrt(),
        NormExponent::Inf => terms.fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn polynomial_weight_evaluates_directly() {
        assert_abs_diff_eq!(make_polynomial_weight(0.0).unwrap().eval(7.3), 1.0);
        assert_abs_diff_eq!(make_polynomial_weight(1.0).unwrap().eval(1.0), 2.0);
        assert_abs_diff_eq!(make_polynomial_weight(2.0).unwrap().eval(3.0), 16.0);
    }

    #[test]
    fn polynomial_weight_rejects_bad_exponent() {
        assert!(make_polynomial_weight(-0.5).is_err());
        assert!(make_polynomial_weight(f64::NAN).is_err());
    }

    #[test]
    fn moderation_examples() {
        let poly = make_polynomial_weight(1.0).unwrap();
        let pair = WeightPair {
            omega: poly,
            mu: poly,
            moderation_constant: 1.0,
        };
        let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert!(check_moderate(&pair, &grid, 1e-12).unwrap());

        let bad = WeightPair {
            omega: Weight::Constant,
            mu: poly,
            moderation_constant: 1.0,
        };
        assert!(!check_moderate(&bad, &[0.0, 1.0, 2.0], 1e-12).unwrap());

        let trivial = WeightPair {
            omega: Weight::Constant,
            mu: Weight::Constant,
            moderation_constant: 1.0,
        };
        assert!(check_moderate(&trivial, &grid, 0.0).unwrap());
        assert!(check_moderate(&trivial, &[], 0.0).is_err());
    }

    #[test]
    fn seq_norm_examples() {
        let mu = Weight::Constant;
        let single: BTreeMap<i64, Complex64> = [(0, c(1.0))].into();
        assert_abs_diff_eq!(seq_norm(&single, &mu, NormExponent::Two).unwrap(), 1.0);

        let pyth: BTreeMap<i64, Complex64> = [(0, c(3.0)), (1, c(4.0))].into();
        assert_abs_diff_eq!(seq_norm(&pyth, &mu, NormExponent::Two).unwrap(), 5.0);

        let poly = make_polynomial_weight(1.0).unwrap();
        let shifted: BTreeMap<i64, Complex64> = [(1, c(1.0))].into();
        assert_abs_diff_eq!(seq_norm(&shifted, &poly, NormExponent::Inf).unwrap(), 2.0);
    }

    #[test]
    fn seq_norm_rejects_non_finite() {
        let bad: BTreeMap<i64, Complex64> = [(0, Complex64::new(f64::NAN, 0.0))].into();
        assert!(seq_norm(&bad, &Weight::Constant, NormExponent::One).is_err());
    }

    #[test]
    fn grid_norm_examples() {
        let mu = Weight::Constant;
        let h = 1e-3;
        let n = (1.0 / h) as usize;
        let zeros = vec![Complex64::default(); n + 1];
        assert_abs_diff_eq!(
            grid_function_norm(0.0, h, &zeros, &mu, NormExponent::Two).unwrap(),
            0.0
        );

        let ones = vec![c(1.0); n + 1];
        let l1 = grid_function_norm(0.0, h, &ones, &mu, NormExponent::One).unwrap();
        assert!((l1 - 1.0).abs() < 2e-3);

        let ramp: Vec<Complex64> = (0..=n).map(|k| c(k as f64 * h)).collect();
        let l2 = grid_function_norm(0.0, h, &ramp, &mu, NormExponent::Two).unwrap();
        assert!((l2 - 1.0 / 3f64.sqrt()).abs() < 2e-3);

        assert!(grid_function_norm(0.0, 0.0, &ones, &mu, NormExponent::One).is_err());
    }

    #[test]
    fn amalgam_norm_examples() {
        let mu = Weight::Constant;
        let zero = |_x: f64| Complex64::default();
        assert_abs_diff_eq!(
            amalgam_norm(zero, -2..=2, &mu, NormExponent::Two, 64).unwrap(),
            0.0
        );

        // indicator of [0,1): the half-open subgrid sees it only on cell 0
        let ind = |x: f64| c(if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 });
        assert_abs_diff_eq!(
            amalgam_norm(ind, -1..=1, &mu, NormExponent::One, 64).unwrap(),
            1.0
        );

        // tent of height 1 peaking at x=1 (two box factors of width 1)
        let tent = |x: f64| {
            c(if (0.0..=1.0).contains(&x) {
                x
            } else if (1.0..=2.0).contains(&x) {
                2.0 - x
            } else {
                0.0
            })
        };
        let got = amalgam_norm(tent, -1..=3, &mu, NormExponent::Inf, 64).unwrap();
        assert!((got - 1.0).abs() < 0.01);

        assert!(amalgam_norm(zero, 1..=0, &mu, NormExponent::One, 64).is_err());
        assert!(amalgam_norm(zero, -1..=1, &mu, NormExponent::One, 1).is_err());
    }

    #[test]
    fn submultiplicative_and_moderate_on_random_pairs() {
        // 1e4 random pairs per exponent; the inequality is exact up to
        // floating-point slack for polynomial weights.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &s in &[0.5, 1.0, 2.0] {
            let w = make_polynomial_weight(s).unwrap();
            let pair = WeightPair {
                omega: w,
                mu: w,
                moderation_constant: 1.0,
            };
            for _ in 0..10_000 {
                let x = rng.gen_range(-50.0..50.0);
                let y = rng.gen_range(-50.0..50.0);
                let lhs = w.eval(x + y);
                let rhs = w.eval(x) * w.eval(y) * (1.0 + 1e-12);
                assert!(lhs <= rhs, "s={s}, x={x}, y={y}: {lhs} > {rhs}");
                assert!(
                    pair.mu.eval(x + y) <= pair.moderation_constant * rhs,
                    "moderation failed at s={s}, x={x}, y={y}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn weights_are_symmetric_and_at_least_one(
            s in 0.0f64..4.0,
            x in -100.0f64..100.0,
        ) {
            let w = make_polynomial_weight(s).unwrap();
            prop_assert!((w.eval(x) - w.eval(-x)).abs() < 1e-12 * w.eval(x));
            prop_assert!(w.eval(x) >= 1.0);
        }

        #[test]
        fn seq_norm_is_absolutely_homogeneous(
            entries in proptest::collection::vec((-20i64..20, -5.0f64..5.0, -5.0f64..5.0), 1..12),
            lam_re in -3.0f64..3.0,
            lam_im in -3.0f64..3.0,
        ) {
            let mu = make_polynomial_weight(1.0).unwrap();
            let lam = Complex64::new(lam_re, lam_im);
            let c0: BTreeMap<i64, Complex64> =
                entries.iter().map(|&(j, re, im)| (j, Complex64::new(re, im))).collect();
            let scaled: BTreeMap<i64, Complex64> =
                c0.iter().map(|(&j, &v)| (j, v * lam)).collect();
            for p in [NormExponent::One, NormExponent::Two, NormExponent::Inf] {
                let base = seq_norm(&c0, &mu, p).unwrap();
                let got = seq_norm(&scaled, &mu, p).unwrap();
                prop_assert!((got - lam.norm() * base).abs() <= 1e-9 * (1.0 + base));
            }
        }

        #[test]
        fn seq_norms_are_ordered_in_p(
            entries in proptest::collection::vec((-20i64..20, -5.0f64..5.0, -5.0f64..5.0), 1..12),
        ) {
            let mu = Weight::Constant;
            let c0: BTreeMap<i64, Complex64> =
                entries.iter().map(|&(j, re, im)| (j, Complex64::new(re, im))).collect();
            let n_inf = seq_norm(&c0, &mu, NormExponent::Inf).unwrap();
            let n_two = seq_norm(&c0, &mu, NormExponent::Two).unwrap();
            let n_one = seq_norm(&c0, &mu, NormExponent::One).unwrap();
            prop_assert!(n_inf <= n_two * (1.0 + 1e-12));
            prop_assert!(n_two <= n_one * (1.0 + 1e-12));
        }
    }
}
