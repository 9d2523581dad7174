//! Frequency-side bump generators and the named family constructions.
//!
//! A bump generator is specified entirely in the frequency domain: its
//! transform is a smooth compactly supported mollifier profile translated by
//! an integer multiple of a fixed unit (pi or 2*pi). Time-domain samples are
//! produced on demand by inverting the transform with a padded FFT whose
//! aliasing images are pushed far enough out to be negligible.
//!
//! The convention throughout is hat(f)(xi) = integral f(x) e^{-i x xi} dx,
//! inverted with e^{+i x xi} and a 1/(2*pi) factor.

use crate::error::{Error, Result};
use crate::quad;
use crate::spline::{self, SplineGenerator};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Smooth compactly supported profile: one or two disjoint mollifier bumps,
/// each normalized to peak value 1 at its interval midpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpProfile {
    intervals: Vec<(f64, f64)>,
    epsilon_tag: Option<f64>,
}

fn check_interval(name: &'static str, lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(name, format!("interval [{lo}, {hi}] must be finite")));
    }
    if lo >= hi {
        return Err(Error::invalid(
            name,
            format!("interval [{lo}, {hi}] is degenerate (need l < u)"),
        ));
    }
    Ok(())
}

/// exp(1 - 1/(1-t^2)) on |t| < 1, zero outside, with t the affine map of
/// [lo, hi] onto [-1, 1]. The |t| >= 1 branch must come first: evaluating
/// the rational exponent just outside the support would blow up instead of
/// vanishing.
fn mollifier_piece(lo: f64, hi: f64, x: f64) -> f64 {
    let t = (2.0 * x - lo - hi) / (hi - lo);
    let t2 = t * t;
    if t2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t2)).exp()
    }
}

impl BumpProfile {
    fn single(lo: f64, hi: f64, epsilon_tag: Option<f64>) -> Result<Self> {
        check_interval("support", lo, hi)?;
        Ok(BumpProfile { intervals: vec![(lo, hi)], epsilon_tag })
    }

    fn two(i1: (f64, f64), i2: (f64, f64), epsilon_tag: Option<f64>) -> Result<Self> {
        check_interval("i1", i1.0, i1.1)?;
        check_interval("i2", i2.0, i2.1)?;
        let (first, second) = if i1.0 <= i2.0 { (i1, i2) } else { (i2, i1) };
        if first.1 >= second.0 {
            return Err(Error::invalid(
                "intervals",
                format!("[{}, {}] and [{}, {}] are not disjoint", first.0, first.1, second.0, second.1),
            ));
        }
        Ok(BumpProfile { intervals: vec![first, second], epsilon_tag })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| mollifier_piece(lo, hi, x)).sum()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Convex hull of the support.
    pub fn hull(&self) -> (f64, f64) {
        (self.intervals[0].0, self.intervals[self.intervals.len() - 1].1)
    }

    pub fn epsilon_tag(&self) -> Option<f64> {
        self.epsilon_tag
    }
}

/// Single-interval mollifier profile on [l, u], peak 1 at the midpoint.
pub fn make_bump(support: (f64, f64), epsilon_tag: Option<f64>) -> Result<BumpProfile> {
    BumpProfile::single(support.0, support.1, epsilon_tag)
}

/// Sum of two disjoint mollifier bumps (argument order does not matter).
pub fn make_two_interval_bump(i1: (f64, f64), i2: (f64, f64)) -> Result<BumpProfile> {
    BumpProfile::two(i1, i2, None)
}

/// Translation step for shifted generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftUnit {
    Pi,
    TwoPi,
}

impl ShiftUnit {
    pub fn value(self) -> f64 {
        match self {
            ShiftUnit::Pi => PI,
            ShiftUnit::TwoPi => TAU,
        }
    }
}

/// Generator with hat(phi)(xi) = profile(xi + k*u): the profile translated
/// left-to-right by -k*u in frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpGenerator {
    profile: BumpProfile,
    shift_index: i64,
    unit: ShiftUnit,
}

impl BumpGenerator {
    pub fn new(profile: BumpProfile, shift_index: i64, unit: ShiftUnit) -> Self {
        BumpGenerator { profile, shift_index, unit }
    }

    /// hat(phi)(xi); real and nonnegative by construction.
    pub fn hat(&self, xi: f64) -> f64 {
        self.profile.eval(xi + self.shift_index as f64 * self.unit.value())
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    pub fn shift_index(&self) -> i64 {
        self.shift_index
    }

    pub fn unit(&self) -> ShiftUnit {
        self.unit
    }

    /// Support intervals of hat(phi): the profile intervals translated by -k*u.
    pub fn hat_intervals(&self) -> Vec<(f64, f64)> {
        let s = self.shift_index as f64 * self.unit.value();
        self.profile.intervals().iter().map(|&(lo, hi)| (lo - s, hi - s)).collect()
    }

    /// Convex hull of the hat support.
    pub fn hat_support(&self) -> (f64, f64) {
        let s = self.shift_index as f64 * self.unit.value();
        let (lo, hi) = self.profile.hull();
        (lo - s, hi - s)
    }
}

/// A single member of a family: frequency bump or box-convolution spline.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Bump(BumpGenerator),
    Spline(SplineGenerator),
}

impl Generator {
    pub fn hat(&self, xi: f64) -> Complex64 {
        match self {
            Generator::Bump(b) => Complex64::new(b.hat(xi), 0.0),
            Generator::Spline(s) => spline::hat_eval(s, xi),
        }
    }
}

/// hat evaluation of any generator at a single frequency.
pub fn hat_eval(g: &Generator, xi: f64) -> Complex64 {
    g.hat(xi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Bump,
    Spline,
}

/// Ordered generator family (phi_1, ..., phi_r), homogeneous in kind.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorFamily {
    members: Vec<Generator>,
    label: String,
}

impl GeneratorFamily {
    pub fn new(members: Vec<Generator>, label: String) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("members", "family needs at least one generator"));
        }
        let kind = |g: &Generator| matches!(g, Generator::Bump(_));
        if members.iter().any(|g| kind(g) != kind(&members[0])) {
            return Err(Error::invalid(
                "members",
                "family must be homogeneous: all bump or all spline generators",
            ));
        }
        if let Generator::Spline(first) = &members[0] {
            let a = first.width();
            for g in &members[1..] {
                if let Generator::Spline(s) = g {
                    if s.width() != a {
                        return Err(Error::invalid(
                            "members",
                            "spline family members must share one box width",
                        ));
                    }
                }
            }
        }
        Ok(GeneratorFamily { members, label })
    }

    pub fn members(&self) -> &[Generator] {
        &self.members
    }

    pub fn r(&self) -> usize {
        self.members.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> FamilyKind {
        match self.members[0] {
            Generator::Bump(_) => FamilyKind::Bump,
            Generator::Spline(_) => FamilyKind::Spline,
        }
    }

    /// Shared box width for spline families.
    pub fn spline_width(&self) -> Option<f64> {
        match &self.members[0] {
            Generator::Spline(s) => Some(s.width()),
            Generator::Bump(_) => None,
        }
    }

    /// Frequencies in [-pi, pi) where the column visibility pattern of the
    /// shifted matrix can change, with per-point guard half-widths.
    ///
    /// Bump families contribute their translated support endpoints folded into
    /// the fundamental cell at width `delta`. Spline families with integer box
    /// width contribute the lattice points 2*pi*q/a, where every column of the
    /// shifted matrix degenerates simultaneously; these carry a wider guard
    /// because the smallest Gram eigenvalue vanishes to high order there.
    /// Non-integer widths stagger the transform zeros across columns and need
    /// no guard.
    pub fn guard_points(&self, delta: f64) -> Vec<GuardPoint> {
        let mut pts: Vec<GuardPoint> = Vec::new();
        match self.kind() {
            FamilyKind::Bump => {
                for g in &self.members {
                    if let Generator::Bump(b) = g {
                        for (lo, hi) in b.hat_intervals() {
                            pts.push(GuardPoint { xi: fold_to_principal(lo), half_width: delta });
                            pts.push(GuardPoint { xi: fold_to_principal(hi), half_width: delta });
                        }
                    }
                }
            }
            FamilyKind::Spline => {
                let a = self.spline_width().unwrap();
                if (a - a.round()).abs() < 1e-12 && a.round() >= 1.0 {
                    let m = a.round() as i64;
                    let w = delta.max(spline::LATTICE_GUARD);
                    for q in 0..m {
                        pts.push(GuardPoint {
                            xi: fold_to_principal(TAU * q as f64 / a),
                            half_width: w,
                        });
                    }
                }
            }
        }
        pts.sort_by(|p, q| p.xi.total_cmp(&q.xi));
        pts.dedup_by(|b, a| {
            if (b.xi - a.xi).abs() < 1e-9 {
                a.half_width = a.half_width.max(b.half_width);
                true
            } else {
                false
            }
        });
        // the cell is a circle: merge a near-pi point into its -pi twin
        if pts.len() > 1 {
            let (first, last) = (pts[0].xi, pts[pts.len() - 1].xi);
            if (first + TAU - last).abs() < 1e-9 {
                let w = pts[pts.len() - 1].half_width;
                pts[0].half_width = pts[0].half_width.max(w);
                pts.pop();
            }
        }
        pts
    }
}

/// A frequency at which classification is suppressed, with the half-width of
/// the suppressed neighborhood (circular distance).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GuardPoint {
    pub xi: f64,
    pub half_width: f64,
}

/// Fold into the fundamental cell [-pi, pi).
pub fn fold_to_principal(x: f64) -> f64 {
    let mut y = x - TAU * (x / TAU).round();
    if y >= PI {
        y -= TAU;
    }
    if y < -PI {
        y += TAU;
    }
    y
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::invalid(
            "epsilon",
            format!("epsilon must lie strictly in (0, 1/4), got {epsilon}"),
        ));
    }
    Ok(())
}

fn check_k_list(k_list: &[i64]) -> Result<()> {
    if k_list.is_empty() {
        return Err(Error::invalid("k_list", "need at least one shift index"));
    }
    let mut seen = k_list.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(
            "k_list",
            format!("shift indices must be distinct, got {k_list:?}"),
        ));
    }
    Ok(())
}

pub(crate) fn min_index_gap(k_list: &[i64]) -> i64 {
    let mut sorted = k_list.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(i64::MAX)
}

fn gap_note(k_list: &[i64]) -> &'static str {
    if k_list.len() < 2 {
        "single member"
    } else if min_index_gap(k_list) >= 2 {
        "gap condition satisfied: all index gaps >= 2"
    } else {
        "gap condition violated: adjacent indices present"
    }
}

/// Family with hat(phi_i)(xi) = theta(xi + k_i*pi), theta the mollifier bump
/// on [-pi-eps, pi+eps].
pub fn family_theorem_3(k_list: &[i64], epsilon: f64) -> Result<GeneratorFamily> {
    check_epsilon(epsilon)?;
    check_k_list(k_list)?;
    let profile = BumpProfile::single(-PI - epsilon, PI + epsilon, Some(epsilon))?;
    let members = k_list
        .iter()
        .map(|&k| Generator::Bump(BumpGenerator::new(profile.clone(), k, ShiftUnit::Pi)))
        .collect();
    GeneratorFamily::new(
        members,
        format!("theorem3 k={k_list:?} eps={epsilon} [{}]", gap_note(k_list)),
    )
}

/// Same construction as [`family_theorem_3`] but with the bump supported on an
/// arbitrary interval [a, b] of length > 2*pi (the support is used as given;
/// `epsilon` is recorded as the profile tag only).
pub fn family_theorem_3_general(
    support: (f64, f64),
    k_list: &[i64],
    epsilon: f64,
) -> Result<GeneratorFamily> {
    check_interval("support", support.0, support.1)?;
    if support.1 - support.0 <= TAU {
        return Err(Error::invalid(
            "support",
            format!(
                "support length {} must exceed 2*pi = {TAU}",
                support.1 - support.0
            ),
        ));
    }
    check_k_list(k_list)?;
    let profile = BumpProfile::single(support.0, support.1, Some(epsilon))?;
    let members = k_list
        .iter()
        .map(|&k| Generator::Bump(BumpGenerator::new(profile.clone(), k, ShiftUnit::Pi)))
        .collect();
    GeneratorFamily::new(
        members,
        format!(
            "theorem3_general support=[{}, {}] k={k_list:?} eps={epsilon} [{}]",
            support.0, support.1, gap_note(k_list)
        ),
    )
}

fn lemma_4_1_profiles(epsilon: f64) -> Result<(BumpProfile, BumpProfile)> {
    let theta = BumpProfile::single(-epsilon, TAU + epsilon, Some(epsilon))?;
    let psi = BumpProfile::single(epsilon, TAU - epsilon, Some(epsilon))?;
    Ok((theta, psi))
}

/// Unshifted pair (theta, psi) with supp theta = [-eps, 2pi+eps] and
/// supp psi = [eps, 2pi-eps].
pub fn family_lemma_4_1(epsilon: f64) -> Result<GeneratorFamily> {
    check_epsilon(epsilon)?;
    let (theta, psi) = lemma_4_1_profiles(epsilon)?;
    GeneratorFamily::new(
        vec![
            Generator::Bump(BumpGenerator::new(theta, 0, ShiftUnit::TwoPi)),
            Generator::Bump(BumpGenerator::new(psi, 0, ShiftUnit::TwoPi)),
        ],
        format!("lemma_4_1 eps={epsilon}"),
    )
}

/// 2r members: theta shifted by 2k*pi for k = 0..r-1, then psi likewise.
pub fn family_theorem_4_3(r: usize, epsilon: f64) -> Result<GeneratorFamily> {
    check_epsilon(epsilon)?;
    if r == 0 {
        return Err(Error::invalid("r", "need r >= 1 shifts"));
    }
    let (theta, psi) = lemma_4_1_profiles(epsilon)?;
    let mut members = Vec::with_capacity(2 * r);
    for profile in [theta, psi] {
        for k in 0..r {
            members.push(Generator::Bump(BumpGenerator::new(
                profile.clone(),
                k as i64,
                ShiftUnit::TwoPi,
            )));
        }
    }
    GeneratorFamily::new(members, format!("theorem_4_3 r={r} eps={epsilon}"))
}

/// 3r members from theta, the two-interval tau, and the left bump omega; the
/// k-th copy of each is shifted by 6k*pi.
///
/// The triples must move in steps of 6pi (three lattice columns), not 2pi:
/// the combined supports of one triple span three columns of the shifted
/// matrix, so a 2pi step would park copy k's theta/tau column on top of copy
/// k-1's omega column and pull the rank below 2r on a band of xi. With the
/// 6pi step the triples occupy disjoint column ranges and each contributes
/// rank 2 everywhere, for a constant total of 2r.
pub fn family_theorem_4_6(r: usize, epsilon: f64) -> Result<GeneratorFamily> {
    check_epsilon(epsilon)?;
    if r == 0 {
        return Err(Error::invalid("r", "need r >= 1 shifts"));
    }
    let theta = BumpProfile::single(-epsilon, TAU + epsilon, Some(epsilon))?;
    let tau = BumpProfile::two(
        (epsilon, PI - epsilon),
        (PI + epsilon, TAU - epsilon),
        Some(epsilon),
    )?;
    let omega = BumpProfile::single(-3.0 * PI - epsilon, -PI + epsilon, Some(epsilon))?;
    let mut members = Vec::with_capacity(3 * r);
    for profile in [theta, tau, omega] {
        for k in 0..r {
            members.push(Generator::Bump(BumpGenerator::new(
                profile.clone(),
                3 * k as i64,
                ShiftUnit::TwoPi,
            )));
        }
    }
    GeneratorFamily::new(members, format!("theorem_4_6 r={r} eps={epsilon}"))
}

/// Single generator whose hat is supported inside [-pi, pi]: the configuration
/// whose shift system spans a non-closed space. `margin` shrinks the support
/// to [-pi+margin, pi-margin]; zero keeps the full cell.
pub fn family_claim_section3(margin: f64) -> Result<GeneratorFamily> {
    if !(margin >= 0.0 && margin < PI) || !margin.is_finite() {
        return Err(Error::invalid(
            "margin",
            format!("margin must lie in [0, pi), got {margin}"),
        ));
    }
    let profile = BumpProfile::single(-PI + margin, PI - margin, None)?;
    GeneratorFamily::new(
        vec![Generator::Bump(BumpGenerator::new(profile, 0, ShiftUnit::TwoPi))],
        format!("claim_section3_negative margin={margin}"),
    )
}

/// Uniform symmetric sample grid x_j = j*h for j = -N..=N with N*h = t_max.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    t_max: f64,
    step: f64,
    half: i64,
}

impl SampleGrid {
    pub fn new(t_max: f64, step: f64) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::invalid("t_max", format!("need positive finite half-width, got {t_max}")));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::invalid("step", format!("need positive finite step, got {step}")));
        }
        let half = (t_max / step).round();
        if half < 1.0 || (half * step - t_max).abs() > 1e-9 * t_max.max(1.0) {
            return Err(Error::GridMismatch {
                detail: format!("step {step} does not divide half-width {t_max}"),
            });
        }
        Ok(SampleGrid { t_max, step, half: half as i64 })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn half_count(&self) -> i64 {
        self.half
    }

    pub fn len(&self) -> usize {
        (2 * self.half + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, idx: usize) -> f64 {
        (idx as i64 - self.half) as f64 * self.step
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.x(i))
    }
}

/// Time-domain padding (in x units) appended beyond the requested window when
/// inverting a bump transform, so that periodization images land where the
/// Schwartz tails have decayed below roundoff relevance.
const RENDER_PAD: f64 = 512.0;

const MAX_RENDER_FFT: usize = 1 << 24;

/// Samples of phi(x) = (1/2pi) integral hat(phi)(xi) e^{+i x xi} d(xi) on the
/// grid. Splines evaluate their closed form (with jump half-sums); bumps
/// invert the transform with one padded FFT.
pub fn time_domain_render(g: &Generator, grid: &SampleGrid) -> Result<Vec<Complex64>> {
    match g {
        Generator::Spline(s) => Ok(grid
            .xs()
            .map(|x| Complex64::new(spline::averaged_eval(s, x), 0.0))
            .collect()),
        Generator::Bump(b) => render_bump(b, grid),
    }
}

fn render_bump(b: &BumpGenerator, grid: &SampleGrid) -> Result<Vec<Complex64>> {
    let (lo, hi) = b.hat_support();
    let u_max = lo.abs().max(hi.abs());
    let h = grid.step();
    if h > PI / u_max {
        return Err(Error::ResolutionTooCoarse { h, support_radius: u_max });
    }
    let m = (((grid.t_max() + RENDER_PAD) / h).ceil() as usize)
        .max(grid.len() + 1)
        .next_power_of_two();
    if m > MAX_RENDER_FFT {
        return Err(Error::invalid(
            "grid",
            format!("render would need an FFT of {m} > {MAX_RENDER_FFT} points"),
        ));
    }
    // Sample the hat over one full frequency period [-Z, Z), Z = pi/h. The
    // rectangle sum of a smooth function over its full (trivially extended)
    // period is spectrally accurate; the only error is time periodization,
    // controlled by RENDER_PAD.
    let z = PI / h;
    let delta = 2.0 * z / m as f64;
    let mut buf: Vec<Complex64> = (0..m)
        .map(|i| Complex64::new(b.hat(-z + i as f64 * delta), 0.0))
        .collect();
    quad::ifft_in_place(&mut buf);
    // phi(j*h) = (1/h) * (-1)^j * m^{-1} sum_m hat_m e^{+2 pi i j m / M},
    // the (-1)^j undoing the -Z origin of the frequency samples.
    let n = grid.half_count();
    Ok((-n..=n)
        .map(|j| {
            let idx = j.rem_euclid(m as i64) as usize;
            let sign = if j & 1 == 0 { 1.0 } else { -1.0 };
            buf[idx] * (sign / h)
        })
        .collect())
}
