//! Function-level operators on the shift-invariant space: synthesis from
//! coefficient arrays, analysis inner products against the generator shifts,
//! least-squares dual reconstruction, and the empirical frame/Riesz ratio
//! checks.
//!
//! Signals live on a uniform grid whose step divides 1, so an integer time
//! shift is an exact index shift of a cached render. Analysis inner products
//! use composite Boole quadrature. For spline families the grid is knot
//! aligned (knots fall on panel boundaries), which makes the rule exact for
//! the piecewise-polynomial integrands up to one subtlety: where both the
//! signal and an order-1 box member jump at the same knot, the jump-averaged
//! samples integrate the product of averages rather than the average of
//! products, and an explicit (7h/45) * jump_f * jump_g correction restores
//! exactness. The signal's jump is recovered by one-sided polynomial
//! extrapolation from neighbouring samples.

use crate::error::{Error, Result};
use crate::generators::{time_domain_render, FamilyKind, Generator, GeneratorFamily, SampleGrid};
use crate::quad::boole_complex;
use crate::spectral::{Classification, FrameReport};
use crate::spline::shift_correlations;
use crate::weights::{grid_function_norm, seq_norm, NormExponent, Weight};
use nalgebra::linalg::LU;
use nalgebra::{DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rand::Rng;
use std::cell::OnceCell;
use std::collections::BTreeMap;

/// Default coefficient index window [-J, J].
pub const DEFAULT_WINDOW: i64 = 16;

/// Default render/quadrature step.
pub const DEFAULT_STEP: f64 = 1.0 / 256.0;

/// Render half-width for bump families: their time-domain tails decay like
/// exp(-c sqrt(x)) and need room to fall below the quadrature noise floor.
pub const BUMP_T: f64 = 192.0;

/// Render half-width for spline families (compact supports; the window only
/// has to contain every shifted support plus quadrature margin).
pub const SPLINE_T: f64 = 40.0;

/// Ridge added to the windowed Gram section in [`reconstruct`], relative to
/// its largest diagonal entry. The section's spectrum is a cascade from O(1)
/// eigenvalues down through boundary-layer values (1e-9..1e-12 of the top on
/// the tested families) into exact-null roundoff fuzz at ~1e-15, with no
/// clean gap, so a hard spectral cutoff either discards signal-carrying
/// directions or inverts noise. The ridge instead damps direction lambda by
/// lambda/(lambda+alpha); two iterative-refinement passes sharpen that to a
/// cubic filter, making the bias (alpha/lambda)^3 — negligible for every
/// genuine eigenvalue — while components on exact-null directions stay
/// bounded by (consistency noise)/alpha.
pub const RECON_RIDGE_REL: f64 = 1e-11;

/// The standard signal grid for a family kind.
pub fn default_grid(kind: FamilyKind) -> SampleGrid {
    let t = match kind {
        FamilyKind::Bump => BUMP_T,
        FamilyKind::Spline => SPLINE_T,
    };
    SampleGrid::new(t, DEFAULT_STEP).expect("built-in grid parameters are valid")
}

/// A complex signal sampled on a [`SampleGrid`].
#[derive(Clone, Debug)]
pub struct SampledSignal {
    grid: SampleGrid,
    samples: Vec<Complex64>,
    label: String,
}

impl SampledSignal {
    pub fn new(grid: SampleGrid, samples: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch {
                detail: format!(
                    "{} samples for a grid of {} points",
                    samples.len(),
                    grid.len()
                ),
            });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteInput { context: "signal samples" });
        }
        Ok(SampledSignal { grid, samples, label: label.into() })
    }

    pub fn zero(grid: SampleGrid, label: impl Into<String>) -> Self {
        let samples = vec![Complex64::default(); grid.len()];
        SampledSignal { grid, samples, label: label.into() }
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// sqrt(sum |self - other|^2) / sqrt(sum |other|^2), with 0/0 = 0.
    pub fn relative_l2_distance(&self, other: &SampledSignal) -> Result<f64> {
        if !grids_match(&self.grid, &other.grid) {
            return Err(Error::GridMismatch {
                detail: "signals live on different grids".into(),
            });
        }
        let num: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.samples.iter().map(|z| z.norm_sqr()).sum();
        if den == 0.0 {
            return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((num / den).sqrt())
    }
}

fn grids_match(a: &SampleGrid, b: &SampleGrid) -> bool {
    a.len() == b.len()
        && (a.t_max() - b.t_max()).abs() < 1e-12
        && (a.step() - b.step()).abs() < 1e-15
}

/// Per-generator complex coefficient sequences supported in [-J, J].
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientArray {
    window: i64,
    rows: Vec<Vec<Complex64>>,
}

impl CoefficientArray {
    pub fn zeros(r: usize, window: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("r", "need at least one generator row"));
        }
        if window < 1 {
            return Err(Error::invalid(
                "window",
                format!("coefficient window must be >= 1, got {window}"),
            ));
        }
        let len = (2 * window + 1) as usize;
        Ok(CoefficientArray { window, rows: vec![vec![Complex64::default(); len]; r] })
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Zero outside the window — the sequences are finitely supported.
    pub fn get(&self, i: usize, j: i64) -> Complex64 {
        if j.abs() > self.window {
            return Complex64::default();
        }
        self.rows[i][(j + self.window) as usize]
    }

    pub fn set(&mut self, i: usize, j: i64, value: Complex64) -> Result<()> {
        if j.abs() > self.window {
            return Err(Error::invalid(
                "j",
                format!("coefficient index {j} outside window [-{0}, {0}]", self.window),
            ));
        }
        self.rows[i][(j + self.window) as usize] = value;
        Ok(())
    }

    /// Nonzero entries of one row as a map, for the sequence-norm helpers.
    pub fn row_map(&self, i: usize) -> BTreeMap<i64, Complex64> {
        (-self.window..=self.window)
            .filter_map(|j| {
                let v = self.get(i, j);
                (v != Complex64::default()).then_some((j, v))
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CoefficientArray) -> f64 {
        let w = self.window.max(other.window);
        let mut worst = 0.0f64;
        for i in 0..self.r().max(other.r()) {
            for j in -w..=w {
                let a = if i < self.r() { self.get(i, j) } else { Complex64::default() };
                let b = if i < other.r() { other.get(i, j) } else { Complex64::default() };
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }
}

/// Uniform complex coefficients on |j| <= support_radius, components in
/// [-1, 1].
pub fn random_coefficients(
    r: usize,
    window: i64,
    support_radius: i64,
    rng: &mut impl Rng,
) -> Result<CoefficientArray> {
    if support_radius < 0 || support_radius > window {
        return Err(Error::invalid(
            "support_radius",
            format!("support radius {support_radius} outside [0, {window}]"),
        ));
    }
    let mut c = CoefficientArray::zeros(r, window)?;
    for i in 0..r {
        for j in -support_radius..=support_radius {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c.set(i, j, v)?;
        }
    }
    Ok(c)
}

fn binom_f64(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Rendered family on a fixed grid; the workhorse behind the free functions.
///
/// Each member is rendered once on an extended grid so every shift in the
/// coefficient window reads off as an index offset.
pub struct SpaceContext<'a> {
    family: &'a GeneratorFamily,
    grid: SampleGrid,
    window: i64,
    /// grid steps per unit shift
    spu: i64,
    base_offset: i64,
    renders: Vec<Vec<Complex64>>,
    /// lazily built ridge-shifted Gram section and its LU factors (reconstruction)
    section_solver: OnceCell<(DMatrix<Complex64>, LU<Complex64, Dyn, Dyn>)>,
}

impl<'a> SpaceContext<'a> {
    pub fn new(family: &'a GeneratorFamily, grid: SampleGrid, window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::invalid("window", format!("window must be >= 1, got {window}")));
        }
        let h = grid.step();
        let spu = (1.0 / h).round();
        if (spu * h - 1.0).abs() > 1e-9 || spu < 1.0 {
            return Err(Error::GridMismatch {
                detail: format!("step {h} does not divide the unit shift"),
            });
        }
        let spu = spu as i64;
        if (grid.len() - 1) % 4 != 0 {
            return Err(Error::GridMismatch {
                detail: "grid point count must be 4m+1 for the quadrature rule".into(),
            });
        }
        if family.kind() == FamilyKind::Spline {
            let a = family.spline_width().expect("spline family has a width");
            let steps_per_a = (a * spu as f64).round();
            if (steps_per_a - a * spu as f64).abs() > 1e-9 || steps_per_a as i64 % 4 != 0 {
                return Err(Error::GridMismatch {
                    detail: format!(
                        "spline width {a} is not a multiple of 4 grid steps at step {h}"
                    ),
                });
            }
            if (grid.t_max() * spu as f64).round() as i64 % 4 != 0 {
                return Err(Error::GridMismatch {
                    detail: "grid origin must sit on a quadrature panel boundary".into(),
                });
            }
            let reach = members_max_support(family);
            if window as f64 + reach + 1.0 > grid.t_max() {
                return Err(Error::invalid(
                    "window",
                    format!(
                        "window {window} plus spline support {reach} does not fit in [-{t}, {t}]",
                        t = grid.t_max()
                    ),
                ));
            }
        } else if (window as f64) >= grid.t_max() {
            return Err(Error::invalid(
                "window",
                format!("window {window} exceeds the grid half-width {}", grid.t_max()),
            ));
        }
        // 2x window: the reconstruction normal matrix reads correlations at
        // lag differences up to 2 * window
        let base_grid = SampleGrid::new(grid.t_max() + 2.0 * window as f64, h)?;
        let renders = family
            .members()
            .iter()
            .map(|g| time_domain_render(g, &base_grid))
            .collect::<Result<Vec<_>>>()?;
        let base_offset = base_grid.half_count() as i64 - grid.half_count() as i64;
        Ok(SpaceContext {
            family,
            grid,
            window,
            spu,
            base_offset,
            renders,
            section_solver: OnceCell::new(),
        })
    }

    pub fn family(&self) -> &GeneratorFamily {
        self.family
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// phi_i(x_m - j) from the cached render.
    fn shifted(&self, i: usize, m: usize, j: i64) -> Complex64 {
        let idx = m as i64 + self.base_offset - j * self.spu;
        self.renders[i][idx as usize]
    }

    /// f = sum_i sum_j c^i_j phi_i(. - j).
    pub fn synthesize(&self, c: &CoefficientArray) -> Result<SampledSignal> {
        if c.r() != self.family.r() {
            return Err(Error::invalid(
                "c",
                format!("{} coefficient rows for {} generators", c.r(), self.family.r()),
            ));
        }
        if c.window() > self.window {
            return Err(Error::invalid(
                "c",
                format!(
                    "coefficient index window {} outside the context window {}",
                    c.window(),
                    self.window
                ),
            ));
        }
        let mut samples = vec![Complex64::default(); self.grid.len()];
        for i in 0..c.r() {
            for j in -c.window()..=c.window() {
                let coeff = c.get(i, j);
                if coeff == Complex64::default() {
                    continue;
                }
                for (m, out) in samples.iter_mut().enumerate() {
                    *out += coeff * self.shifted(i, m, j);
                }
            }
        }
        SampledSignal::new(self.grid.clone(), samples, format!("synthesized from {}", self.family.label()))
    }

    /// Inner products a^i_j = <f, phi_i(. - j)> for every row and window
    /// index. The weight does not enter the integrals (it belongs to the
    /// sequence norms downstream); it is accepted so call sites name the
    /// space they work in, and is checked for finiteness on the window.
    pub fn analyze(&self, f: &SampledSignal, mu: &Weight) -> Result<CoefficientArray> {
        if !grids_match(f.grid(), &self.grid) {
            return Err(Error::GridMismatch {
                detail: "signal grid differs from the context grid".into(),
            });
        }
        for j in [-self.window, 0, self.window] {
            if !mu.eval(j as f64).is_finite() {
                return Err(Error::NonFiniteInput { context: "weight on coefficient window" });
            }
        }
        let mut out = CoefficientArray::zeros(self.family.r(), self.window)?;
        match self.family.kind() {
            FamilyKind::Bump => self.analyze_bump(f, &mut out)?,
            FamilyKind::Spline => self.analyze_spline(f, &mut out)?,
        }
        Ok(out)
    }

    fn analyze_bump(&self, f: &SampledSignal, out: &mut CoefficientArray) -> Result<()> {
        let h = self.grid.step();
        let mut products = vec![Complex64::default(); self.grid.len()];
        for i in 0..self.family.r() {
            for j in -self.window..=self.window {
                for (m, p) in products.iter_mut().enumerate() {
                    *p = f.samples()[m] * self.shifted(i, m, j).conj();
                }
                out.set(i, j, boole_complex(h, &products)?)?;
            }
        }
        Ok(())
    }

    fn analyze_spline(&self, f: &SampledSignal, out: &mut CoefficientArray) -> Result<()> {
        let h = self.grid.step();
        let t = self.grid.t_max();
        let len = self.grid.len() as i64;
        let a = self.family.spline_width().expect("spline family");
        // extrapolation order: signal pieces synthesized from the family have
        // degree at most n_max - 1
        let n_max = self
            .family
            .members()
            .iter()
            .map(|g| match g {
                Generator::Spline(s) => s.order() as usize,
                Generator::Bump(_) => unreachable!("kind-checked"),
            })
            .max()
            .unwrap();
        for (i, member) in self.family.members().iter().enumerate() {
            let s = match member {
                Generator::Spline(s) => s,
                Generator::Bump(_) => unreachable!("kind-checked"),
            };
            let reach = s.support().1;
            for j in -self.window..=self.window {
                // panel-aligned window with one panel of margin each side
                let lo = (((j as f64 + t) / h).round() as i64 - 4).max(0);
                let hi = (((j as f64 + reach + t) / h).round() as i64 + 4).min(len - 1);
                let products: Vec<Complex64> = (lo..=hi)
                    .map(|m| f.samples()[m as usize] * self.shifted(i, m as usize, j).conj())
                    .collect();
                let mut val = boole_complex(h, &products)?;
                if s.order() == 1 {
                    // both factors jump at the box edges; correct the
                    // product-of-averages error there
                    for (knot, dg) in [(j as f64, 1.0 / a), (j as f64 + a, -1.0 / a)] {
                        let kidx = ((knot + t) / h).round() as i64;
                        if kidx > lo && kidx < hi
                            && kidx >= n_max as i64
                            && kidx + (n_max as i64) < len
                        {
                            let df = one_sided_jump(f.samples(), kidx as usize, n_max);
                            val += df * Complex64::from(7.0 * h / 45.0 * dg);
                        }
                    }
                }
                out.set(i, j, val)?;
            }
        }
        Ok(())
    }

    /// <phi_m(. - l), phi_i(. - j)> for all window lags: the Hermitian normal
    /// matrix of the windowed least-squares problem min ||synthesize(d) - f||,
    /// row index (i, j), column index (m, l), both in row-major coefficient
    /// order. Spline entries come from the exact correlation series; bump
    /// entries are the same grid inner products `analyze` uses, so the system
    /// is consistent with the analysis coefficients to machine precision.
    fn gram_section(&self) -> Result<DMatrix<Complex64>> {
        let r = self.family.r();
        let w = self.window;
        let width = (2 * w + 1) as usize;
        let lags = (4 * w + 1) as usize;
        // kappa[i][m][k + 2w] = <phi_m, phi_i(. - k)>
        let mut kappa = vec![vec![vec![Complex64::default(); lags]; r]; r];
        match self.family.kind() {
            FamilyKind::Spline => {
                let a = self.family.spline_width().expect("spline family");
                let orders: Vec<u32> = self
                    .family
                    .members()
                    .iter()
                    .map(|g| match g {
                        Generator::Spline(s) => s.order(),
                        Generator::Bump(_) => unreachable!("kind-checked"),
                    })
                    .collect();
                for i in 0..r {
                    for m in 0..r {
                        for (lag, v) in shift_correlations(orders[m], orders[i], a)? {
                            if lag.abs() <= 2 * w {
                                kappa[i][m][(lag + 2 * w) as usize] = Complex64::from(v);
                            }
                        }
                    }
                }
            }
            FamilyKind::Bump => {
                let h = self.grid.step();
                let mut products = vec![Complex64::default(); self.grid.len()];
                for i in 0..r {
                    for m in i..r {
                        for k in -2 * w..=2 * w {
                            for (q, p) in products.iter_mut().enumerate() {
                                *p = self.shifted(m, q, 0) * self.shifted(i, q, k).conj();
                            }
                            let v = boole_complex(h, &products)?;
                            kappa[i][m][(k + 2 * w) as usize] = v;
                            kappa[m][i][(2 * w - k) as usize] = v.conj();
                        }
                    }
                }
            }
        }
        let n = r * width;
        let mut t = DMatrix::zeros(n, n);
        for i in 0..r {
            for j in -w..=w {
                let row = i * width + (j + w) as usize;
                for m in 0..r {
                    for l in -w..=w {
                        t[(row, m * width + (l + w) as usize)] =
                            kappa[i][m][(j - l + 2 * w) as usize];
                    }
                }
            }
        }
        let sym = (&t + t.adjoint()) * Complex64::from(0.5);
        Ok(sym)
    }

    /// Least-squares dual reconstruction: solves the windowed normal equations
    /// T d = a with T the Gram section and a the analysis coefficients, via a
    /// ridge-regularised direct solve with iterative refinement, then
    /// re-synthesizes. Needs a report witnessing frame or Riesz-basis
    /// classification.
    ///
    /// Working on the section instead of inverting the Gram symbol per
    /// frequency keeps the problem consistent: for signals synthesized inside
    /// the window the right-hand side equals T c exactly (same renders, same
    /// quadrature), so no spectral leakage through the finite coefficient
    /// window occurs and the residual is at roundoff level.
    pub fn reconstruct(&self, f: &SampledSignal, report: &FrameReport) -> Result<Reconstruction> {
        if report.classification == Classification::NotClosed {
            return Err(Error::NotAFrame {
                label: report.label.clone(),
                operation: "reconstruct",
            });
        }
        let r = self.family.r();
        let w = self.window;
        let width = (2 * w + 1) as usize;
        let analysis = self.analyze(f, &Weight::Constant)?;
        if self.section_solver.get().is_none() {
            let t = self.gram_section()?;
            let alpha = RECON_RIDGE_REL
                * (0..t.nrows()).map(|k| t[(k, k)].re).fold(0.0f64, f64::max);
            let mut shifted = t.clone();
            for k in 0..t.nrows() {
                shifted[(k, k)] += Complex64::from(alpha);
            }
            let _ = self.section_solver.set((t, shifted.lu()));
        }
        let (t, lu) = self.section_solver.get().expect("just initialised");
        let a = DVector::from_fn(r * width, |row, _| {
            let i = row / width;
            let j = (row % width) as i64 - w;
            analysis.get(i, j)
        });
        let mut d = lu
            .solve(&a)
            .ok_or_else(|| Error::invalid("family", "singular reconstruction system"))?;
        for _ in 0..2 {
            let residual = &a - t * &d;
            let correction = lu
                .solve(&residual)
                .ok_or_else(|| Error::invalid("family", "singular reconstruction system"))?;
            d += correction;
        }
        let mut dual = CoefficientArray::zeros(r, w)?;
        for i in 0..r {
            for l in -w..=w {
                dual.set(i, l, d[i * width + (l + w) as usize])?;
            }
        }
        let signal = self.synthesize(&dual)?;
        let relative_l2_error = signal.relative_l2_distance(f)?;
        Ok(Reconstruction { signal, coefficients: dual, relative_l2_error })
    }

    /// sum_i ||<f, phi_i(. - j)>_j||_{l^p_mu} / ||f||_{L^p_mu}.
    pub fn frame_ratio(&self, f: &SampledSignal, mu: &Weight, p: NormExponent) -> Result<f64> {
        let den = grid_function_norm(self.grid.x(0), self.grid.step(), f.samples(), mu, p)?;
        if den == 0.0 {
            return Err(Error::invalid("f", "frame ratio of the zero signal is undefined"));
        }
        let analysis = self.analyze(f, mu)?;
        let mut num = 0.0;
        for i in 0..analysis.r() {
            num += seq_norm(&analysis.row_map(i), mu, p)?;
        }
        Ok(num / den)
    }

    /// ||synthesize(c)||_{L^p_mu} / sum_i ||c^i||_{l^p_mu} — a witness for
    /// the lower Riesz inequality (not the infimum over representations).
    pub fn riesz_lower_ratio(
        &self,
        c: &CoefficientArray,
        mu: &Weight,
        p: NormExponent,
    ) -> Result<f64> {
        let mut den = 0.0;
        for i in 0..c.r() {
            den += seq_norm(&c.row_map(i), mu, p)?;
        }
        if den == 0.0 {
            return Err(Error::invalid("c", "ratio of the zero coefficient array is undefined"));
        }
        let f = self.synthesize(c)?;
        let num = grid_function_norm(self.grid.x(0), self.grid.step(), f.samples(), mu, p)?;
        Ok(num / den)
    }
}

fn members_max_support(family: &GeneratorFamily) -> f64 {
    family
        .members()
        .iter()
        .map(|g| match g {
            Generator::Spline(s) => s.support().1,
            Generator::Bump(_) => 0.0,
        })
        .fold(0.0, f64::max)
}

/// Jump (right limit minus left limit) at sample `kidx`, extrapolating each
/// side with a degree-(pts-1) fit through the nearest `pts` samples.
fn one_sided_jump(samples: &[Complex64], kidx: usize, pts: usize) -> Complex64 {
    let mut left = Complex64::default();
    let mut right = Complex64::default();
    let mut sign = 1.0;
    for k in 1..=pts {
        let w = Complex64::from(sign * binom_f64(pts, k));
        left += samples[kidx - k] * w;
        right += samples[kidx + k] * w;
        sign = -sign;
    }
    right - left
}

/// The output of [`reconstruct`]: the rebuilt signal, the dual coefficients
/// that produced it, and its relative L^2 distance from the input.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub signal: SampledSignal,
    pub coefficients: CoefficientArray,
    pub relative_l2_error: f64,
}

pub fn synthesize(family: &GeneratorFamily, c: &CoefficientArray) -> Result<SampledSignal> {
    let window = DEFAULT_WINDOW.max(c.window());
    SpaceContext::new(family, default_grid(family.kind()), window)?.synthesize(c)
}

pub fn analyze(f: &SampledSignal, family: &GeneratorFamily, mu: &Weight) -> Result<CoefficientArray> {
    SpaceContext::new(family, f.grid().clone(), DEFAULT_WINDOW)?.analyze(f, mu)
}

pub fn reconstruct(
    f: &SampledSignal,
    family: &GeneratorFamily,
    report: &FrameReport,
) -> Result<Reconstruction> {
    SpaceContext::new(family, f.grid().clone(), DEFAULT_WINDOW)?.reconstruct(f, report)
}

pub fn frame_ratio(
    f: &SampledSignal,
    family: &GeneratorFamily,
    mu: &Weight,
    p: NormExponent,
) -> Result<f64> {
    SpaceContext::new(family, f.grid().clone(), DEFAULT_WINDOW)?.frame_ratio(f, mu, p)
}

pub fn riesz_lower_ratio(
    c: &CoefficientArray,
    family: &GeneratorFamily,
    mu: &Weight,
    p: NormExponent,
) -> Result<f64> {
    let window = DEFAULT_WINDOW.max(c.window());
    SpaceContext::new(family, default_grid(family.kind()), window)?.riesz_lower_ratio(c, mu, p)
}
