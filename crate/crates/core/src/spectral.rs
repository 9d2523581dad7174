//! Verification core: the shifted transform matrix [hat(Phi)(xi + 2*pi*j)]_j,
//! the Gram matrix, rank profiles over a frequency grid, and the resulting
//! frame / Riesz-basis / not-closed classification.
//!
//! Three mechanically distinct rank routes are kept side by side — singular
//! values of the shifted matrix, eigenvalues of the Gram matrix, and maximum
//! bipartite matching on support patterns — because their agreement is the
//! numerical content of the certification. Everything here is grid-sampled;
//! every report repeats that caveat.

use crate::error::{Error, Result};
use crate::generators::{fold_to_principal, FamilyKind, Generator, GeneratorFamily, GuardPoint};
use crate::spline::{self, SplineGenerator};
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

/// Default relative tolerance for numeric rank (fraction of the largest
/// singular value).
pub const REL_TOL_DEFAULT: f64 = 1e-9;

/// Default guard half-width around regime boundaries.
pub const GUARD_DELTA_DEFAULT: f64 = 1e-3;

/// Absolute floor under which a singular value (or matrix entry, for support
/// thresholding) never counts as nonzero, regardless of the relative rule.
/// Mollifier tails pass through the subnormal range near support endpoints;
/// without a floor the relative rule would count them.
pub const NUMERIC_RANK_ABS_FLOOR: f64 = 1e-13;

/// Relative floor for Gram eigenvalues, squaring the singular-value picture.
pub const GRAM_REL_FLOOR: f64 = 1e-12;

/// Absolute floor for Gram eigenvalues (the square of the entry floor).
pub const GRAM_ABS_FLOOR: f64 = 1e-26;

/// A grid condition constant at or above this is reported as unbounded for
/// the purposes of the spectral-equivalence check.
pub const CONDITION_CAP: f64 = 1e16;

/// Relative eigenvalue truncation for the pseudo-inverse behind the canonical
/// dual. Deliberately far below `REL_TOL_DEFAULT`: the dual only needs to
/// avoid dividing by genuine zeros, and truncating at 1e-9 would discard
/// small but meaningful eigenvalues near guarded frequencies.
pub const DUAL_TRUNC_REL: f64 = 1e-12;

/// Spline column cutoff: a column is kept while the slowest-decaying member
/// still exceeds this fraction of the best column.
pub const SPLINE_COLUMN_REL: f64 = 1e-4;

/// Attached to every report: the honest limit of grid certification.
pub const CAVEAT: &str = "rank constancy, frame bounds and the condition constant are certified \
     on the sampled frequency grid only; between grid points a measure-zero \
     gap remains that smoothness arguments close but this computation cannot";

/// One evaluation of the shifted matrix S(xi), column j holding
/// hat(phi_i)(xi + 2*pi*j) down the rows.
#[derive(Clone, Debug)]
pub struct ShiftedMatrixSample {
    pub xi: f64,
    pub columns: Vec<i64>,
    pub entries: DMatrix<Complex64>,
}

/// One evaluation of the Gram matrix G(xi). `truncation` is the symmetric
/// column window used by the defining frequency sum where that sum is finite
/// (bump families); `None` marks the exact correlation-series route used for
/// splines, which involves no truncation at all.
#[derive(Clone, Debug)]
pub struct GramSample {
    pub xi: f64,
    pub matrix: DMatrix<Complex64>,
    pub truncation: Option<i64>,
}

/// Grid construction parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of equispaced base points in [-pi, pi).
    pub n: usize,
    /// Guard half-width delta added around every regime boundary.
    pub guard_delta: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: 2048, guard_delta: GUARD_DELTA_DEFAULT }
    }
}

/// Evaluation grid: sorted frequencies with guard flags.
#[derive(Clone, Debug)]
pub struct FrequencyGrid {
    pub points: Vec<f64>,
    pub guarded: Vec<bool>,
    pub guard_points: Vec<GuardPoint>,
    pub base_n: usize,
    pub guard_delta: f64,
}

fn circular_distance(x: f64, y: f64) -> f64 {
    fold_to_principal(x - y).abs()
}

impl GridSpec {
    /// Base grid plus, for each regime boundary b of the family, the points
    /// b, b - delta, b + delta and the midpoints between consecutive
    /// boundaries. Guarding is strict: |xi - b| < half-width circularly, so
    /// the inserted b +/- delta points themselves classify.
    pub fn build(&self, family: &GeneratorFamily) -> Result<FrequencyGrid> {
        if self.n < 2 {
            return Err(Error::invalid("n", format!("grid needs >= 2 base points, got {}", self.n)));
        }
        if !(self.guard_delta > 0.0 && self.guard_delta < 1.0) {
            return Err(Error::invalid(
                "guard_delta",
                format!("guard half-width must lie in (0, 1), got {}", self.guard_delta),
            ));
        }
        let guards = family.guard_points(self.guard_delta);
        let mut points: Vec<f64> =
            (0..self.n).map(|i| -PI + TAU * i as f64 / self.n as f64).collect();
        for g in &guards {
            points.push(g.xi);
            points.push(fold_to_principal(g.xi - g.half_width));
            points.push(fold_to_principal(g.xi + g.half_width));
        }
        match guards.len() {
            0 => {}
            1 => points.push(fold_to_principal(guards[0].xi + PI)),
            _ => {
                for w in guards.windows(2) {
                    points.push(0.5 * (w[0].xi + w[1].xi));
                }
                let wrap = 0.5 * (guards[guards.len() - 1].xi + guards[0].xi + TAU);
                points.push(fold_to_principal(wrap));
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        // the 1e-12 slack keeps the inserted b +/- delta points outside the
        // guard even when b + delta rounds a hair inward
        let guarded = points
            .iter()
            .map(|&xi| {
                guards.iter().any(|g| circular_distance(xi, g.xi) < g.half_width - 1e-12)
            })
            .collect();
        Ok(FrequencyGrid {
            points,
            guarded,
            guard_points: guards,
            base_n: self.n,
            guard_delta: self.guard_delta,
        })
    }
}

fn bump_columns(family: &GeneratorFamily, xi: f64) -> Vec<i64> {
    let mut cols = BTreeSet::new();
    for g in family.members() {
        if let Generator::Bump(b) = g {
            for (lo, hi) in b.hat_intervals() {
                let j_lo = ((lo - xi) / TAU - 1e-12).ceil() as i64;
                let j_hi = ((hi - xi) / TAU + 1e-12).floor() as i64;
                for j in j_lo..=j_hi {
                    let arg = xi + TAU * j as f64;
                    if arg >= lo - 1e-12 && arg <= hi + 1e-12 {
                        cols.insert(j);
                    }
                }
            }
        }
    }
    cols.into_iter().collect()
}

fn spline_members(family: &GeneratorFamily) -> Vec<&SplineGenerator> {
    family
        .members()
        .iter()
        .map(|g| match g {
            Generator::Spline(s) => s,
            Generator::Bump(_) => unreachable!("kind-checked by caller"),
        })
        .collect()
}

fn spline_columns(family: &GeneratorFamily, xi: f64) -> Vec<i64> {
    let members = spline_members(family);
    let a = members[0].width();
    let n0 = members.iter().map(|s| s.order()).min().unwrap();
    let score = |j: i64| -> f64 {
        let t = 0.5 * a * (xi + TAU * j as f64);
        let s = if t.abs() < 1e-8 { 1.0 } else { (t.sin() / t).abs() };
        s.powi(n0 as i32)
    };
    // the best column sits within a couple of steps of -xi/2pi
    let j_star = (-xi / TAU).round() as i64;
    let max_score = (j_star - 2..=j_star + 2).map(score).fold(0.0, f64::max);
    if max_score < 1e-300 {
        // exact lattice degeneracy: keep a token window (always guarded)
        return (j_star - 2..=j_star + 2).collect();
    }
    let thr = SPLINE_COLUMN_REL * max_score;
    // |sinc t| <= 1/|t| gives the certified cutoff |t| <= thr^{-1/n0}
    let t_max = thr.powf(-1.0 / n0 as f64);
    let radius = 2.0 * t_max / a;
    let j_lo = ((-xi - radius) / TAU).floor() as i64;
    let j_hi = ((-xi + radius) / TAU).ceil() as i64;
    (j_lo..=j_hi).filter(|&j| score(j) > thr).collect()
}

/// The truncated shifted matrix at one frequency. Columns are every j that
/// can carry a nonzero entry: exact support membership for bumps, the
/// relative decay cutoff [`SPLINE_COLUMN_REL`] for splines.
pub fn shifted_matrix_at(family: &GeneratorFamily, xi: f64) -> ShiftedMatrixSample {
    let columns = match family.kind() {
        FamilyKind::Bump => bump_columns(family, xi),
        FamilyKind::Spline => spline_columns(family, xi),
    };
    let entries = DMatrix::from_fn(family.r(), columns.len(), |i, c| {
        family.members()[i].hat(xi + TAU * columns[c] as f64)
    });
    ShiftedMatrixSample { xi, columns, entries }
}

/// Gram matrix G(xi)_{ij} = sum_k hat(phi_i) conj(hat(phi_j)) at xi + 2*pi*k,
/// Hermitian-symmetrized.
///
/// Bump families evaluate the finite sum exactly over the support window.
/// Spline families use the correlation series sum_l <phi_n, phi_m(.-l)>
/// e^{-i l xi}: by the convolution identity each coefficient is a closed-form
/// spline value, so the infinite frequency sum is replaced by an exact finite
/// one instead of a truncation.
pub fn gram_at(family: &GeneratorFamily, xi: f64) -> GramSample {
    let r = family.r();
    let (mut g, truncation) = match family.kind() {
        FamilyKind::Bump => {
            let cols = bump_columns(family, xi);
            let mut m = DMatrix::<Complex64>::zeros(r, r);
            for &j in &cols {
                let arg = xi + TAU * j as f64;
                let hats: Vec<Complex64> = family.members().iter().map(|g| g.hat(arg)).collect();
                for i in 0..r {
                    for l in 0..r {
                        m[(i, l)] += hats[i] * hats[l].conj();
                    }
                }
            }
            let k = cols.iter().map(|j| j.abs()).max().unwrap_or(0);
            (m, Some(k))
        }
        FamilyKind::Spline => {
            let members = spline_members(family);
            let a = members[0].width();
            let mut m = DMatrix::<Complex64>::zeros(r, r);
            for i in 0..r {
                for l in 0..r {
                    let rho = spline::shift_correlations(members[i].order(), members[l].order(), a)
                        .expect("orders validated at construction");
                    let mut acc = Complex64::default();
                    for (j, v) in rho {
                        let phase = -(j as f64) * xi;
                        acc += Complex64::from_polar(v.abs(), phase + if v < 0.0 { PI } else { 0.0 });
                    }
                    m[(i, l)] = acc;
                }
            }
            (m, None)
        }
    };
    let sym = (&g + g.adjoint()) * Complex64::from(0.5);
    g = sym;
    GramSample { xi, matrix: g, truncation }
}

/// Gram matrix by brute truncation of the defining frequency sum at |k| <= K.
/// Mechanically independent of [`gram_at`]'s spline route; used as its oracle
/// together with [`spline_gram_tail_bound`].
pub fn gram_truncated(family: &GeneratorFamily, xi: f64, k: i64) -> Result<GramSample> {
    if k < 0 {
        return Err(Error::invalid("k", "truncation window must be nonnegative"));
    }
    let r = family.r();
    let mut m = DMatrix::<Complex64>::zeros(r, r);
    for j in -k..=k {
        let arg = xi + TAU * j as f64;
        let hats: Vec<Complex64> = family.members().iter().map(|g| g.hat(arg)).collect();
        for i in 0..r {
            for l in 0..r {
                m[(i, l)] += hats[i] * hats[l].conj();
            }
        }
    }
    let sym = (&m + m.adjoint()) * Complex64::from(0.5);
    Ok(GramSample { xi, matrix: sym, truncation: Some(k) })
}

/// Upper bound on the entrywise sum |G - G_K| for a spline family, valid for
/// every xi: each omitted term is bounded by (2/(a|xi+2pik|))^{n+m} and the
/// tail sum by the monotone integral comparison.
pub fn spline_gram_tail_bound(family: &GeneratorFamily, k: i64) -> Result<f64> {
    if family.kind() != FamilyKind::Spline {
        return Err(Error::invalid("family", "tail bound applies to spline families"));
    }
    if k < 1 {
        return Err(Error::invalid("k", "need a window of at least 1"));
    }
    let members = spline_members(family);
    let a = members[0].width();
    let mut total = 0.0;
    for si in &members {
        for sl in &members {
            let nu = (si.order() + sl.order()) as f64;
            // 2 * sum_{j>K} (2/a)^nu (2pi(j-1/2))^{-nu}
            //   <= 2 (2/a)^nu (2pi)^{-nu} (K-1/2)^{1-nu} / (nu-1)
            total += 2.0 * (2.0 / a).powf(nu) * TAU.powf(-nu) * (k as f64 - 0.5).powf(1.0 - nu)
                / (nu - 1.0);
        }
    }
    Ok(total)
}

fn check_finite(m: &DMatrix<Complex64>) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFiniteInput { context: "matrix entries".into() });
    }
    Ok(())
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::invalid(
            "rel_tol",
            format!("relative tolerance must lie in (0, 1), got {rel_tol}"),
        ));
    }
    Ok(())
}

/// Singular values exceeding max(rel_tol * sigma_max, the absolute floor).
pub fn numeric_rank(m: &DMatrix<Complex64>, rel_tol: f64) -> Result<usize> {
    check_rel_tol(rel_tol)?;
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sv = m.clone().singular_values();
    let s_max = sv.iter().cloned().fold(0.0, f64::max);
    if s_max <= 0.0 {
        return Ok(0);
    }
    let thr = (rel_tol * s_max).max(NUMERIC_RANK_ABS_FLOOR);
    Ok(sv.iter().filter(|&&s| s > thr).count())
}

/// Maximum bipartite matching size of a boolean pattern (rows to columns,
/// augmenting paths). Equals the generic rank of matrices with that support.
fn matching_rank(pattern: &[Vec<bool>]) -> usize {
    let rows = pattern.len();
    if rows == 0 {
        return 0;
    }
    let cols = pattern[0].len();
    let mut owner: Vec<Option<usize>> = vec![None; cols];

    fn augment(
        row: usize,
        pattern: &[Vec<bool>],
        visited: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for c in 0..visited.len() {
            if pattern[row][c] && !visited[c] {
                visited[c] = true;
                if owner[c].is_none() || augment(owner[c].unwrap(), pattern, visited, owner) {
                    owner[c] = Some(row);
                    return true;
                }
            }
        }
        false
    }

    let mut size = 0;
    for row in 0..rows {
        let mut visited = vec![false; cols];
        if augment(row, pattern, &mut visited, &mut owner) {
            size += 1;
        }
    }
    size
}

/// Matching rank of an explicit support pattern (dimension-checked against M).
pub fn structural_rank(m: &DMatrix<Complex64>, support_pattern: &[Vec<bool>]) -> Result<usize> {
    if support_pattern.len() != m.nrows()
        || support_pattern.iter().any(|row| row.len() != m.ncols())
    {
        return Err(Error::invalid(
            "support_pattern",
            format!(
                "pattern dimensions do not match the {}x{} matrix",
                m.nrows(),
                m.ncols()
            ),
        ));
    }
    Ok(matching_rank(support_pattern))
}

/// Support pattern by thresholding magnitudes with the same relative rule and
/// absolute floor as [`numeric_rank`], so the two columns of a rank profile
/// agree wherever the matrix is numerically honest.
pub fn threshold_pattern(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<Vec<bool>> {
    let max_abs = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let thr = (rel_tol * max_abs).max(NUMERIC_RANK_ABS_FLOOR);
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm() > thr).collect())
        .collect()
}

/// Mathematically exact support pattern of the shifted matrix: open-interval
/// membership for bumps; for splines everything except the exact transform
/// zeros a*(xi+2pi j) in 2pi Z \ {0} (tested to 1e-9, which only fires inside
/// lattice guard bands).
fn exact_pattern(family: &GeneratorFamily, xi: f64, columns: &[i64]) -> Vec<Vec<bool>> {
    family
        .members()
        .iter()
        .map(|g| {
            columns
                .iter()
                .map(|&j| {
                    let arg = xi + TAU * j as f64;
                    match g {
                        Generator::Bump(b) => {
                            b.hat_intervals().iter().any(|&(lo, hi)| arg > lo && arg < hi)
                        }
                        Generator::Spline(s) => {
                            let cycles = s.width() * arg / TAU;
                            let near_int = (cycles - cycles.round()).abs() < 1e-9;
                            !(near_int && cycles.round() != 0.0)
                        }
                    }
                })
                .collect()
        })
        .collect()
}

fn gram_eigenvalues(g: &GramSample) -> Vec<f64> {
    g.matrix.clone().symmetric_eigen().eigenvalues.iter().cloned().collect()
}

/// (rank, smallest counted eigenvalue, largest eigenvalue) under the Gram
/// floors.
fn gram_spectrum_stats(eigs: &[f64], rel_tol: f64) -> (usize, Option<f64>, f64) {
    let max_e = eigs.iter().cloned().fold(0.0, f64::max);
    if max_e <= 0.0 {
        return (0, None, 0.0);
    }
    let floor = (rel_tol * rel_tol * max_e)
        .max(GRAM_REL_FLOOR * max_e)
        .max(GRAM_ABS_FLOOR);
    let counted: Vec<f64> = eigs.iter().cloned().filter(|&l| l > floor).collect();
    let min_nz = counted.iter().cloned().reduce(f64::min);
    (counted.len(), min_nz, max_e)
}

/// Everything measured at one grid frequency.
#[derive(Clone, Copy, Debug)]
pub struct ScanPoint {
    pub xi: f64,
    pub guarded: bool,
    pub numeric_rank: usize,
    pub structural_rank: usize,
    /// Matching rank of the mathematically exact support pattern.
    pub exact_pattern_rank: usize,
    /// Rank by Gram eigenvalue count — the independent second route.
    pub gram_rank: usize,
    /// Smallest Gram eigenvalue above the floors, if any.
    pub eig_min_nz: Option<f64>,
    pub eig_max: f64,
}

/// A full grid scan of one family.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub label: String,
    pub r: usize,
    pub points: Vec<ScanPoint>,
    pub guard_points: Vec<GuardPoint>,
    pub base_n: usize,
    pub guard_delta: f64,
    pub rel_tol: f64,
}

impl ScanResult {
    pub fn non_guard(&self) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(|p| !p.guarded)
    }

    fn distinct_numeric(&self) -> BTreeSet<usize> {
        self.non_guard().map(|p| p.numeric_rank).collect()
    }

    /// (lower, upper) extremes of counted Gram eigenvalues over non-guard
    /// points; lower is 0 when no point shows a counted eigenvalue.
    fn eig_extremes(&self) -> (f64, f64) {
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        for p in self.non_guard() {
            if let Some(l) = p.eig_min_nz {
                lower = lower.min(l);
            }
            upper = upper.max(p.eig_max);
        }
        if lower.is_infinite() {
            lower = 0.0;
        }
        (lower, upper)
    }

    fn condition_constant(&self) -> f64 {
        let (lower, upper) = self.eig_extremes();
        if lower > 0.0 {
            (1.0 / lower).max(upper).max(1.0)
        } else {
            f64::MAX
        }
    }
}

/// Scan every grid point: shifted matrix, three rank routes, Gram spectrum.
pub fn scan(family: &GeneratorFamily, spec: &GridSpec, rel_tol: f64) -> Result<ScanResult> {
    check_rel_tol(rel_tol)?;
    let grid = spec.build(family)?;
    let mut points = Vec::with_capacity(grid.points.len());
    for (&xi, &guarded) in grid.points.iter().zip(&grid.guarded) {
        let s = shifted_matrix_at(family, xi);
        let nrank = numeric_rank(&s.entries, rel_tol)?;
        let srank = matching_rank(&threshold_pattern(&s.entries, rel_tol));
        let erank = matching_rank(&exact_pattern(family, xi, &s.columns));
        let g = gram_at(family, xi);
        let (grank, eig_min_nz, eig_max) = gram_spectrum_stats(&gram_eigenvalues(&g), rel_tol);
        points.push(ScanPoint {
            xi,
            guarded,
            numeric_rank: nrank,
            structural_rank: srank,
            exact_pattern_rank: erank,
            gram_rank: grank,
            eig_min_nz,
            eig_max,
        });
    }
    Ok(ScanResult {
        label: family.label().to_string(),
        r: family.r(),
        points,
        guard_points: grid.guard_points,
        base_n: grid.base_n,
        guard_delta: grid.guard_delta,
        rel_tol,
    })
}

/// Numeric and structural rank at every grid point.
#[derive(Clone, Debug)]
pub struct RankProfile {
    pub grid: Vec<f64>,
    pub numeric_rank: Vec<usize>,
    pub structural_rank: Vec<usize>,
    pub guarded: Vec<bool>,
    pub guard_band: f64,
    /// Distinct numeric ranks outside guard bands.
    pub distinct_values: BTreeSet<usize>,
}

pub fn rank_profile_with(
    family: &GeneratorFamily,
    spec: &GridSpec,
    rel_tol: f64,
) -> Result<RankProfile> {
    let scan = scan(family, spec, rel_tol)?;
    Ok(profile_from_scan(&scan))
}

pub fn rank_profile(family: &GeneratorFamily, spec: &GridSpec) -> Result<RankProfile> {
    rank_profile_with(family, spec, REL_TOL_DEFAULT)
}

pub fn profile_from_scan(scan: &ScanResult) -> RankProfile {
    RankProfile {
        grid: scan.points.iter().map(|p| p.xi).collect(),
        numeric_rank: scan.points.iter().map(|p| p.numeric_rank).collect(),
        structural_rank: scan.points.iter().map(|p| p.structural_rank).collect(),
        guarded: scan.points.iter().map(|p| p.guarded).collect(),
        guard_band: scan.guard_delta,
        distinct_values: scan.distinct_numeric(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    RieszBasis,
    Frame,
    NotClosed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridMeta {
    pub base_points: usize,
    pub total_points: usize,
    pub guarded_points: usize,
    pub guard_band: f64,
    pub rel_tol: f64,
}

/// Certification verdict for one family over one grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrameReport {
    pub label: String,
    pub r: usize,
    pub classification: Classification,
    /// The single non-guard rank when it is constant.
    pub rank_constant: Option<usize>,
    pub distinct_nonguard_ranks: Vec<usize>,
    /// max(1/lambda_min_nonzero, lambda_max) over non-guard points, >= 1.
    pub gram_condition_constant: f64,
    /// Extremes of counted Gram eigenvalues over non-guard points; these are
    /// the p=2 frame bounds (squared) when the classification grants them.
    pub frame_bounds: (f64, f64),
    pub grid: GridMeta,
    pub caveat: String,
}

pub fn report_from_scan(scan: &ScanResult) -> FrameReport {
    let distinct = scan.distinct_numeric();
    let (lower, upper) = scan.eig_extremes();
    let (classification, rank_constant) = if distinct.len() >= 2 {
        (Classification::NotClosed, None)
    } else {
        let rho = distinct.iter().next().copied().unwrap_or(0);
        if rho == scan.r {
            (Classification::RieszBasis, Some(rho))
        } else {
            (Classification::Frame, Some(rho))
        }
    };
    FrameReport {
        label: scan.label.clone(),
        r: scan.r,
        classification,
        rank_constant,
        distinct_nonguard_ranks: distinct.into_iter().collect(),
        gram_condition_constant: scan.condition_constant(),
        frame_bounds: (lower, upper),
        grid: GridMeta {
            base_points: scan.base_n,
            total_points: scan.points.len(),
            guarded_points: scan.points.iter().filter(|p| p.guarded).count(),
            guard_band: scan.guard_delta,
            rel_tol: scan.rel_tol,
        },
        caveat: CAVEAT.to_string(),
    }
}

/// Classify the family over the grid: not-closed on any non-guard rank
/// change, else Riesz basis at full rank, else frame.
pub fn classify(family: &GeneratorFamily, spec: &GridSpec, rel_tol: f64) -> Result<FrameReport> {
    Ok(report_from_scan(&scan(family, spec, rel_tol)?))
}

/// The canonical dual symbols at one frequency.
#[derive(Clone, Debug)]
pub struct DualSample {
    pub xi: f64,
    pub columns: Vec<i64>,
    /// Column j holds hat(psi_i)(xi + 2*pi*j) = (G(xi)^+ S(xi))_{i,j}.
    pub entries: DMatrix<Complex64>,
}

/// Eigenvalue-truncated pseudo-inverse of a Hermitian PSD matrix.
pub fn gram_pinv(m: &DMatrix<Complex64>, rel_trunc: f64) -> DMatrix<Complex64> {
    let n = m.nrows();
    let se = m.clone().symmetric_eigen();
    let max_e = se.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    if max_e <= 0.0 {
        return out;
    }
    let thr = rel_trunc * max_e;
    for (idx, &lambda) in se.eigenvalues.iter().enumerate() {
        if lambda > thr {
            let v = se.eigenvectors.column(idx);
            let scale = Complex::from(1.0 / lambda);
            out += (&v * v.adjoint()) * scale;
        }
    }
    out
}

/// Canonical dual table psi-hat(xi + 2*pi*j) = G(xi)^+ phi-hat(xi + 2*pi*j).
/// Requires a report proving the family is a frame or Riesz basis; a
/// not-closed family has no dual system.
pub fn canonical_dual_at(
    family: &GeneratorFamily,
    report: &FrameReport,
    xi: f64,
) -> Result<DualSample> {
    if report.classification == Classification::NotClosed {
        return Err(Error::NotAFrame {
            label: report.label.clone(),
            operation: "canonical_dual_at",
        });
    }
    let s = shifted_matrix_at(family, xi);
    let g = gram_at(family, xi);
    let pinv = gram_pinv(&g.matrix, DUAL_TRUNC_REL);
    let entries = &pinv * &s.entries;
    Ok(DualSample { xi, columns: s.columns, entries })
}

/// The spectral-equivalence consistency check: rank constancy via singular
/// values, via Gram eigenvalues, and via exact support patterns together
/// with a bounded condition constant must all reach the same verdict.
pub fn lemma2_equivalence_check(family: &GeneratorFamily, spec: &GridSpec) -> Result<bool> {
    let scan = scan(family, spec, REL_TOL_DEFAULT)?;
    let numeric: BTreeSet<usize> = scan.non_guard().map(|p| p.numeric_rank).collect();
    let gram: BTreeSet<usize> = scan.non_guard().map(|p| p.gram_rank).collect();
    let pattern: BTreeSet<usize> = scan.non_guard().map(|p| p.exact_pattern_rank).collect();
    let route_a = numeric.len() == 1;
    let route_b = gram.len() == 1;
    let route_c = pattern.len() == 1 && scan.condition_constant() < CONDITION_CAP;
    Ok(route_a == route_b && route_b == route_c)
}
