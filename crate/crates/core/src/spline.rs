//! Convolution powers of the normalized box: the generator of order n is the
//! n-fold convolution of (H(x) - H(x-a))/a with itself, a compactly supported
//! piecewise polynomial of degree n-1 on [0, n*a] (C^{n-2} for n >= 2).
//!
//! Three independent representations are kept deliberately: the Heaviside
//! closed form, a sampled convolution oracle, and the frequency-side product
//! formula. Cross-checking them against one another is a first-class feature,
//! not just a test detail.

use crate::error::{Error, Result};
use crate::generators::{Generator, GeneratorFamily};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest supported order; binomials and factorials stay in exact i128
/// arithmetic up to here. Accuracy of the alternating closed form degrades
/// with order (catastrophic cancellation); trust plateaus around n <= 12.
pub const MAX_ORDER: u32 = 20;

/// Guard half-width around the lattice frequencies 2*pi*q/a of an
/// integer-width family. At those points every column of the shifted matrix
/// degenerates at once and the smallest Gram eigenvalue vanishes like
/// xi^{2(r-1)}; this radius keeps it clear of the rank thresholds.
pub const LATTICE_GUARD: f64 = 0.05;

/// Spline generator of order `n` and box width `a`: support [0, n*a],
/// unit mass, degree n-1.
#[derive(Clone, Debug, PartialEq)]
pub struct SplineGenerator {
    n: u32,
    a: f64,
    /// (coefficient, knot) pairs of the closed form
    /// sum_m coeff_m * (x - knot_m)^(n-1) * H(x - knot_m).
    terms: Vec<(f64, f64)>,
}

impl SplineGenerator {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::invalid(
                "n",
                format!("spline order must lie in 1..={MAX_ORDER}, got {n}"),
            ));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid(
                "a",
                format!("box width must be positive and finite, got {a}"),
            ));
        }
        let fact: i128 = (1..=(n as i128 - 1).max(1)).product();
        let scale = 1.0 / (a.powi(n as i32) * fact as f64);
        let terms = (0..=n)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                (sign * binomial(n, m) as f64 * scale, m as f64 * a)
            })
            .collect();
        Ok(SplineGenerator { n, a, terms })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn width(&self) -> f64 {
        self.a
    }

    /// Support interval [0, n*a].
    pub fn support(&self) -> (f64, f64) {
        (0.0, self.n as f64 * self.a)
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }
}

fn binomial(n: u32, m: u32) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..m as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    acc
}

/// The normalized box itself: 1/a on [0, a), 0 elsewhere (H(x) = 1 iff x >= 0).
pub fn box_eval(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid(
            "a",
            format!("box width must be positive, got {a}"),
        ));
    }
    Ok(if (0.0..a).contains(&x) { 1.0 / a } else { 0.0 })
}

/// Heaviside closed form of the order-n spline.
///
/// Total function: outside [0, n*a) the value is exactly 0 (returned without
/// touching the alternating sum, so no cancellation residue leaks out).
pub fn closed_form_eval(s: &SplineGenerator, x: f64) -> f64 {
    let (lo, hi) = s.support();
    if x < lo || x >= hi {
        return 0.0;
    }
    let deg = s.n as i32 - 1;
    let mut acc = 0.0;
    for &(coeff, knot) in &s.terms {
        if x >= knot {
            acc += coeff * (x - knot).powi(deg);
        }
    }
    acc
}

/// Closed form with jumps replaced by their half-sums.
///
/// Identical to [`closed_form_eval`] for n >= 2 (those splines are
/// continuous); for the box it returns 1/(2a) at the two jump points. The
/// quadrature paths sample through this so that panel sums see the mean of
/// the one-sided limits and jump contributions cancel pairwise.
pub fn averaged_eval(s: &SplineGenerator, x: f64) -> f64 {
    if s.n > 1 {
        return closed_form_eval(s, x);
    }
    let tol = 1e-12 * (1.0 + x.abs().max(s.a));
    if x.abs() < tol || (x - s.a).abs() < tol {
        0.5 / s.a
    } else {
        closed_form_eval(s, x)
    }
}

/// Samples of the order-n spline on k*h, k = 0..=n*ceil(a/h), computed by
/// n-1 successive discrete convolutions of the jump-averaged box.
///
/// Mechanically independent of the closed form; serves as its oracle.
pub fn convolve_oracle(n: u32, a: f64, h: f64) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::invalid(
            "n",
            format!("spline order must lie in 1..={MAX_ORDER}, got {n}"),
        ));
    }
    if !(a > 0.0) {
        return Err(Error::invalid(
            "a",
            format!("box width must be positive, got {a}"),
        ));
    }
    if !(h > 0.0) || h > a / 64.0 {
        return Err(Error::ResolutionTooCoarse {
            h,
            support_radius: a / 64.0,
        });
    }
    let ka = (a / h - 1e-12).ceil() as usize;
    let box_gen = SplineGenerator::new(1, a)?;
    let b: Vec<f64> = (0..=ka).map(|k| averaged_eval(&box_gen, k as f64 * h)).collect();
    let mut acc = b.clone();
    for _ in 1..n {
        let mut next = vec![0.0; acc.len() + ka];
        for (k, slot) in next.iter_mut().enumerate() {
            let m_lo = k.saturating_sub(acc.len() - 1);
            let m_hi = ka.min(k);
            let mut s = 0.0;
            for m in m_lo..=m_hi {
                s += b[m] * acc[k - m];
            }
            *slot = s * h;
        }
        acc = next;
    }
    Ok(acc)
}

/// Frequency response: (e^{-i a xi / 2} * sin(a xi / 2) / (a xi / 2))^n,
/// with a series branch for the removable singularity at xi = 0.
///
/// The modulus is |2 sin(a xi / 2) / (a xi)|^n; zeros occur exactly at
/// a*xi in 2*pi*Z \ {0}.
pub fn hat_eval(s: &SplineGenerator, xi: f64) -> Complex64 {
    let t = 0.5 * s.a * xi;
    let sinc = if t.abs() < 1e-4 {
        // relative error ~ t^6/5040 < 1e-27 at the branch point
        1.0 - t * t / 6.0 + t.powi(4) / 120.0
    } else {
        t.sin() / t
    };
    let base = Complex64::new(t.cos(), -t.sin()) * sinc;
    base.powu(s.n)
}

/// The family (phi_k, ..., phi_{k+r-1}) of shared box width `a`.
pub fn spline_family(k: i64, r: usize, a: f64) -> Result<GeneratorFamily> {
    if k < 1 {
        return Err(Error::invalid(
            "k",
            format!("spline generators are defined for orders n >= 1 (n-fold box convolutions); got starting order k = {k}"),
        ));
    }
    if r == 0 {
        return Err(Error::invalid("r", "family needs at least one generator"));
    }
    let top = k as u32 + r as u32 - 1;
    if top > MAX_ORDER {
        return Err(Error::invalid(
            "k+r",
            format!("largest requested order {top} exceeds supported maximum {MAX_ORDER}"),
        ));
    }
    let members = (0..r)
        .map(|i| Ok(Generator::Spline(SplineGenerator::new(k as u32 + i as u32, a)?)))
        .collect::<Result<Vec<_>>>()?;
    GeneratorFamily::new(members, format!("spline k={k} r={r} a={a}"))
}

/// Shift correlations of two orders: rho(j) = <phi_n, phi_m(. - j)>.
///
/// By the convolution identity phi_n * phi_m = phi_{n+m} and the symmetry of
/// phi_{n+m} about its support midpoint, rho(j) = phi_{n+m}(j + m*a) — a
/// finite, exact expression. Returns the (j, rho(j)) pairs with j inside the
/// overlap window (-m*a, n*a).
pub fn shift_correlations(n: u32, m: u32, a: f64) -> Result<Vec<(i64, f64)>> {
    let sum = SplineGenerator::new(n + m, a)?;
    let j_lo = (-(m as f64) * a).floor() as i64;
    let j_hi = ((n as f64) * a).ceil() as i64;
    Ok((j_lo..=j_hi)
        .map(|j| (j, closed_form_eval(&sum, j as f64 + m as f64 * a)))
        .collect())
}

/// The shifted transform matrix of a spline family over an explicit column
/// window: entry (row i, column j) = hat of the i-th member at xi + 2*pi*j.
pub fn r_matrix_at(
    family: &GeneratorFamily,
    xi: f64,
    j_range: std::ops::RangeInclusive<i64>,
) -> Result<DMatrix<Complex64>> {
    if j_range.is_empty() {
        return Err(Error::invalid("j_range", "column window must be non-empty"));
    }
    let splines: Vec<&SplineGenerator> = family
        .members()
        .iter()
        .map(|g| match g {
            Generator::Spline(s) => Ok(s),
            Generator::Bump(_) => Err(Error::invalid(
                "family",
                "r_matrix_at applies to spline families only",
            )),
        })
        .collect::<Result<_>>()?;
    let cols: Vec<i64> = j_range.collect();
    Ok(DMatrix::from_fn(splines.len(), cols.len(), |i, c| {
        hat_eval(splines[i], xi + std::f64::consts::TAU * cols[c] as f64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn box_examples() {
        assert_abs_diff_eq!(box_eval(1.0, 0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(box_eval(1.0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(box_eval(2.0, 1.0).unwrap(), 0.5);
        assert_abs_diff_eq!(box_eval(1.0, 1.0).unwrap(), 0.0);
        assert!(box_eval(0.0, 0.5).is_err());
    }

    #[test]
    fn closed_form_matches_hand_values() {
        let tent = SplineGenerator::new(2, 1.0).unwrap();
        assert_abs_diff_eq!(closed_form_eval(&tent, 1.0), 1.0);
        assert_abs_diff_eq!(closed_form_eval(&tent, 0.5), 0.5);
        let quad3 = SplineGenerator::new(3, 1.0).unwrap();
        assert_abs_diff_eq!(closed_form_eval(&quad3, 1.5), 0.75);
    }

    #[test]
    fn integer_knot_table() {
        // frozen oracle: values of phi_n at interior integer knots for a=1
        let cases: [(u32, &[f64]); 5] = [
            (2, &[1.0]),
            (3, &[0.5, 0.5]),
            (4, &[1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0]),
            (5, &[1.0 / 24.0, 11.0 / 24.0, 11.0 / 24.0, 1.0 / 24.0]),
            (
                6,
                &[1.0 / 120.0, 26.0 / 120.0, 66.0 / 120.0, 26.0 / 120.0, 1.0 / 120.0],
            ),
        ];
        for (n, values) in cases {
            let s = SplineGenerator::new(n, 1.0).unwrap();
            for (idx, &want) in values.iter().enumerate() {
                let x = (idx + 1) as f64;
                assert_abs_diff_eq!(closed_form_eval(&s, x), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn support_is_exact() {
        for n in 1..=6 {
            for &a in &[0.5, 1.0, 2.0] {
                let s = SplineGenerator::new(n, a).unwrap();
                assert_eq!(closed_form_eval(&s, -1e-12), 0.0);
                assert_eq!(closed_form_eval(&s, n as f64 * a), 0.0);
                assert_eq!(closed_form_eval(&s, n as f64 * a + 7.0), 0.0);
                assert!(closed_form_eval(&s, 0.5 * n as f64 * a) > 0.0);
            }
        }
    }

    #[test]
    fn convolution_oracle_agrees_with_closed_form() {
        for n in 2..=6u32 {
            for &a in &[0.5, 1.0, 2.0] {
                let h = a / 256.0;
                let oracle = convolve_oracle(n, a, h).unwrap();
                let s = SplineGenerator::new(n, a).unwrap();
                let max_dev = oracle
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| (v - averaged_eval(&s, k as f64 * h)).abs())
                    .fold(0.0, f64::max);
                assert!(max_dev < 5.0 * h, "n={n}, a={a}: deviation {max_dev} vs 5h={}", 5.0 * h);
            }
        }
    }

    #[test]
    fn convolution_oracle_preserves_mass() {
        let h = 1.0 / 256.0;
        let oracle = convolve_oracle(4, 1.0, h).unwrap();
        // trapezoid: endpoint samples are exactly zero for n >= 2
        let mass: f64 = oracle.iter().sum::<f64>() * h;
        assert!((mass - 1.0).abs() < 1e-6, "mass {mass}");
    }

    #[test]
    fn convolution_oracle_n1_is_the_box() {
        let h = 1.0 / 128.0;
        let oracle = convolve_oracle(1, 1.0, h).unwrap();
        let s = SplineGenerator::new(1, 1.0).unwrap();
        for (k, &v) in oracle.iter().enumerate() {
            assert_abs_diff_eq!(v, averaged_eval(&s, k as f64 * h));
        }
        assert!(convolve_oracle(2, 1.0, 1.0 / 32.0).is_err());
    }

    #[test]
    fn hat_examples() {
        for n in 1..=4 {
            for &a in &[0.5, 1.0, 2.0] {
                let s = SplineGenerator::new(n, a).unwrap();
                assert!((hat_eval(&s, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            }
        }
        let b = SplineGenerator::new(1, 1.0).unwrap();
        assert!(hat_eval(&b, std::f64::consts::TAU).norm() < 1e-14);
        let tent = SplineGenerator::new(2, 1.0).unwrap();
        let want = (2.0 / std::f64::consts::PI).powi(2);
        assert_abs_diff_eq!(hat_eval(&tent, std::f64::consts::PI).norm(), want, epsilon = 1e-12);
    }

    #[test]
    fn hat_matches_quadrature_transform() {
        // window extends one box width past the support so the n=1 jumps are
        // interior panel boundaries, where the half-sum sampling cancels
        for n in 1..=4u32 {
            let a = 1.0;
            let s = SplineGenerator::new(n, a).unwrap();
            let f = |x: f64| averaged_eval(&s, x);
            let panels = 64 * (n as usize + 2);
            for step in 0..=32 {
                let xi = -8.0 * std::f64::consts::PI
                    + step as f64 * (16.0 * std::f64::consts::PI / 32.0) + 0.013;
                let got =
                    quad::fourier_transform_quadrature(f, -a, (n as f64 + 1.0) * a, panels, xi)
                        .unwrap();
                let want = hat_eval(&s, xi);
                assert!(
                    (got - want).norm() < 1e-6,
                    "n={n}, xi={xi}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn family_construction_rules() {
        let fam = spline_family(1, 3, 1.0).unwrap();
        assert_eq!(fam.r(), 3);
        let orders: Vec<u32> = fam
            .members()
            .iter()
            .map(|g| match g {
                Generator::Spline(s) => s.order(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(orders, vec![1, 2, 3]);

        let single = spline_family(2, 1, 0.5).unwrap();
        assert_eq!(single.r(), 1);

        assert!(spline_family(0, 2, 1.0).is_err());
        assert!(spline_family(-3, 2, 1.0).is_err());
        assert!(spline_family(1, 0, 1.0).is_err());
        assert!(spline_family(1, 25, 1.0).is_err());
    }

    #[test]
    fn r_matrix_examples() {
        let fam = spline_family(1, 3, 1.0).unwrap();
        let m0 = r_matrix_at(&fam, 0.0, -2..=2).unwrap();
        for i in 0..3 {
            assert!((m0[(i, 2)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for c in [0usize, 1, 3, 4] {
                assert!(m0[(i, c)].norm() < 1e-12, "column {c} should vanish at a=1");
            }
        }

        let fam2 = spline_family(1, 2, 1.0).unwrap();
        let m = r_matrix_at(&fam2, std::f64::consts::PI, -1..=0).unwrap();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!(det.norm() > 1e-3, "2x2 window at xi=pi should be invertible, det={det}");

        assert!(r_matrix_at(&fam, 0.0, 1..=0).is_err());
    }

    #[test]
    fn correlations_match_hand_values() {
        // <phi_1, phi_1(.-j)> at a=1: the box is orthogonal to its shifts
        let rho11: std::collections::BTreeMap<i64, f64> =
            shift_correlations(1, 1, 1.0).unwrap().into_iter().collect();
        assert_abs_diff_eq!(rho11[&0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho11[&1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho11[&-1], 0.0, epsilon = 1e-12);
        // <phi_1, phi_2(.-j)>: 1/2 at j in {0,-1}, zero at j=1
        let rho12: std::collections::BTreeMap<i64, f64> =
            shift_correlations(1, 2, 1.0).unwrap().into_iter().collect();
        assert_abs_diff_eq!(rho12[&0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho12[&-1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho12[&1], 0.0, epsilon = 1e-12);
        // <phi_2, phi_2(.-j)>: 2/3 center, 1/6 at the neighbors
        let rho22: std::collections::BTreeMap<i64, f64> =
            shift_correlations(2, 2, 1.0).unwrap().into_iter().collect();
        assert_abs_diff_eq!(rho22[&0], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho22[&1], 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho22[&-1], 1.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn correlations_match_direct_quadrature() {
        // rho(j) against Boole integration of the product. (1,1) is excluded:
        // both factors jump at shared knots and the half-sum samples see the
        // product of averages, not the average of products; its values are
        // covered exactly by correlations_match_hand_values.
        for &(n, m, a) in &[(1u32, 2u32, 1.0), (2, 3, 1.0), (2, 2, 0.5), (3, 3, 1.0), (1, 3, 2.0)] {
            let rho = shift_correlations(n, m, a).unwrap();
            let sn = SplineGenerator::new(n, a).unwrap();
            let sm = SplineGenerator::new(m, a).unwrap();
            let h = a / 256.0;
            // window [-4a, (n+4)a]: all knots of both factors interior
            let count = (n as usize + 8) * 256;
            for &(j, want) in &rho {
                let values: Vec<f64> = (0..=count)
                    .map(|k| {
                        let x = -4.0 * a + k as f64 * h;
                        averaged_eval(&sn, x) * averaged_eval(&sm, x - j as f64)
                    })
                    .collect();
                let got = quad::boole(h, &values).unwrap();
                assert!(
                    (got - want).abs() < 1e-10,
                    "rho_{{{n},{m}}}({j}) quadrature {got} vs closed {want}"
                );
            }
        }
    }

    #[test]
    fn partition_of_unity_at_unit_width() {
        for n in 1..=5u32 {
            let s = SplineGenerator::new(n, 1.0).unwrap();
            for step in 0..=40 {
                let x = step as f64 / 40.0;
                let total: f64 = (-(n as i64)..=1)
                    .map(|j| averaged_eval(&s, x - j as f64))
                    .sum();
                assert!((total - 1.0).abs() < 1e-10, "n={n}, x={x}: {total}");
            }
        }
    }

    #[test]
    fn derivative_recursion_holds_between_knots() {
        for n in 2..=6u32 {
            let a = 1.0;
            let s = SplineGenerator::new(n, a).unwrap();
            let prev = SplineGenerator::new(n - 1, a).unwrap();
            let eps = 1e-5;
            for step in 0..40 {
                let x = 0.31 + step as f64 * (n as f64 - 0.6) / 40.0;
                if (x - x.round()).abs() < 0.05 {
                    continue;
                }
                let fd = (closed_form_eval(&s, x + eps) - closed_form_eval(&s, x - eps)) / (2.0 * eps);
                let want = (closed_form_eval(&prev, x) - closed_form_eval(&prev, x - a)) / a;
                assert!((fd - want).abs() < 1e-4, "n={n}, x={x}: {fd} vs {want}");
            }
        }
    }

    proptest! {
        #[test]
        fn hat_modulus_is_sinc_power(n in 1u32..8, xi in -30.0f64..30.0, a in 0.3f64..2.5) {
            let s = SplineGenerator::new(n, a).unwrap();
            let t = 0.5 * a * xi;
            let want = if t.abs() < 1e-4 { 1.0 } else { (t.sin() / t).abs() }.powi(n as i32);
            prop_assert!((hat_eval(&s, xi).norm() - want).abs() < 1e-12);
        }

        #[test]
        fn correlations_are_symmetric(n in 1u32..6, m in 1u32..6, a in 0.4f64..2.0) {
            // tolerance allows the alternating-sum noise of orders up to n+m=10
            let fwd = shift_correlations(n, m, a).unwrap();
            let rev = shift_correlations(m, n, a).unwrap();
            for &(j, v) in &fwd {
                let back = rev.iter().find(|&&(jr, _)| jr == -j).map(|&(_, vr)| vr).unwrap_or(0.0);
                prop_assert!((v - back).abs() < 1e-9, "rho_nm({j})={v} vs rho_mn({})={back}", -j);
            }
        }

        #[test]
        fn closed_form_is_nonnegative_with_unit_mass(n in 1u32..8, a in 0.4f64..2.0) {
            let s = SplineGenerator::new(n, a).unwrap();
            // integrate over [-a, (n+1)a] so the n=1 jumps sit on interior
            // panel boundaries; knots align with panels (256 = 4*64 per cell)
            let h = a / 256.0;
            let count = (n as usize + 2) * 256;
            let values: Vec<f64> = (0..=count)
                .map(|k| averaged_eval(&s, -a + k as f64 * h))
                .collect();
            for &v in &values {
                prop_assert!(v >= -1e-9);
            }
            let mass = quad::boole(h, &values).unwrap();
            prop_assert!((mass - 1.0).abs() < 1e-9, "mass {mass}");
        }
    }
}
