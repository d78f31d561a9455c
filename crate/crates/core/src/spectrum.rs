//! Real parts of the eigenvalues of `A + uB` over the control set, and the
//! final controllability verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{projective_controllable, ProjectiveVerdict};
use crate::delta::{delta_extremum, delta_quadratic, DeltaQuadratic};
use crate::larc::{decide_larc_with, LarcOptions, LarcVerdict};
use crate::mat2::{det_pencil, quadratic_eigenvalues, Mat2};
use crate::system::ControlSet;
use crate::tolerance::Tolerance;

pub const DEFAULT_U_MAX: f64 = 1e3;
pub const DEFAULT_GRID_N: usize = 2001;

/// `½ (tr(A) + u tr(B) ± √Δ(u))`, ordered as [`crate::mat2::eigenvalues`].
pub fn eigenvalues_of_pencil(a: &Mat2, b: &Mat2, u: f64) -> (Complex64, Complex64) {
    quadratic_eigenvalues(a.trace() + u * b.trace(), det_pencil(a, b, u))
}

/// `tr²(AB) - 4 det(AB)`.
pub fn product_discriminant(a: &Mat2, b: &Mat2) -> f64 {
    let ab = *a * *b;
    ab.trace() * ab.trace() - 4.0 * ab.det()
}

/// Which test decided whether `0` is interior to the real-part spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteriorTest {
    /// Projective controllability fails, so neither test applies.
    None,
    /// `tr(B) ≠ 0`.
    NonzeroTrace,
    /// `tr(B) = 0`, decided by the sign of `tr²(AB) - 4 det(AB)`.
    TracelessProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroInterior {
    pub holds: bool,
    pub test: InteriorTest,
    /// `tr²(AB) - 4 det(AB)`, reported when `tr(B) = 0`.
    pub product_discriminant: Option<f64>,
}

/// Whether `0` lies in the interior of `{Re λ(u)}` over the whole line,
/// given whether the projected system is controllable.
pub fn zero_in_interior_sigma_re(a: &Mat2, b: &Mat2, pcontrollable: bool, tol: &Tolerance) -> ZeroInterior {
    if !pcontrollable {
        return ZeroInterior { holds: false, test: InteriorTest::None, product_discriminant: None };
    }
    let scale = Tolerance::scale_of(a, b);
    if !tol.is_zero(b.trace(), scale, 1) {
        return ZeroInterior { holds: true, test: InteriorTest::NonzeroTrace, product_discriminant: None };
    }
    let pd = product_discriminant(a, b);
    ZeroInterior {
        holds: tol.sign(pd, scale, 4).is_positive(),
        test: InteriorTest::TracelessProduct,
        product_discriminant: Some(pd),
    }
}

/// Closed interval of real parts with controls attaining its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReInterval {
    pub lo: f64,
    pub hi: f64,
    pub u_lo: f64,
    pub u_hi: f64,
}

impl ReInterval {
    fn point(re: f64, u: f64) -> Self {
        Self { lo: re, hi: re, u_lo: u, u_hi: u }
    }

    fn include(&mut self, re: f64, u: f64) {
        if re < self.lo {
            self.lo = re;
            self.u_lo = u;
        }
        if re > self.hi {
            self.hi = re;
            self.u_hi = u;
        }
    }

    pub fn contains_in_interior(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

fn solve_quadratic(c2: f64, c1: f64, c0: f64, thr: f64) -> Vec<f64> {
    if c2.abs() <= thr {
        return if c1.abs() > thr { vec![-c0 / c1] } else { Vec::new() };
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (c1 + if c1 >= 0.0 { sq } else { -sq });
    let mut roots = vec![q / c2];
    if q != 0.0 {
        roots.push(c0 / q);
    }
    roots
}

/// Controls where a real-part branch can reach an extreme value: roots and
/// vertex of Δ, and stationary points of `(S ± √Δ)/2`.
fn candidate_controls(d: &DeltaQuadratic, trace_b: f64, tol: &Tolerance) -> Vec<f64> {
    let thr = tol.threshold(d.scale, 4);
    let mut out = solve_quadratic(d.alpha, d.beta, d.gamma, tol.threshold(d.scale, 2));
    if let Some((u, _)) = delta_extremum(d) {
        out.push(u);
    }
    // (Δ')² = 4 tr²(B) Δ
    let t2 = trace_b * trace_b;
    out.extend(solve_quadratic(
        4.0 * d.alpha * d.alpha - 4.0 * t2 * d.alpha,
        4.0 * d.alpha * d.beta - 4.0 * t2 * d.beta,
        d.beta * d.beta - 4.0 * t2 * d.gamma,
        thr,
    ));
    out
}

/// `{Re λ₁,₂(u) : u ∈ U}` over `U` clipped to `[-u_max, u_max]`, sampled on
/// a uniform grid of `grid_n` points plus the analytic candidates, as
/// disjoint closed intervals in increasing order.
pub fn sigma_re_range(
    a: &Mat2,
    b: &Mat2,
    control_set: &ControlSet,
    grid_n: usize,
    u_max: f64,
    tol: &Tolerance,
) -> Vec<ReInterval> {
    assert!(grid_n >= 2, "grid needs at least two points");
    let (lo, hi) = control_set.truncated(u_max);
    let d = delta_quadratic(a, b);
    let mut us: Vec<f64> = (0..grid_n).map(|i| lo + (hi - lo) * i as f64 / (grid_n - 1) as f64).collect();
    us.extend(candidate_controls(&d, b.trace(), tol).into_iter().filter(|u| u.is_finite() && *u >= lo && *u <= hi));

    let mut lower: Option<ReInterval> = None;
    let mut upper: Option<ReInterval> = None;
    for u in us {
        let (l1, l2) = eigenvalues_of_pencil(a, b, u);
        match lower.as_mut() {
            Some(iv) => iv.include(l1.re, u),
            None => lower = Some(ReInterval::point(l1.re, u)),
        }
        match upper.as_mut() {
            Some(iv) => iv.include(l2.re, u),
            None => upper = Some(ReInterval::point(l2.re, u)),
        }
    }
    let (l, u) = (lower.expect("nonempty grid"), upper.expect("nonempty grid"));
    let gap_thr = tol.threshold(d.scale, 1);
    if l.hi + gap_thr >= u.lo {
        let mut merged = l;
        merged.include(u.lo, u.u_lo);
        merged.include(u.hi, u.u_hi);
        vec![merged]
    } else {
        vec![l, u]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub trace_b: f64,
    pub re_range: Vec<ReInterval>,
    /// Window `[lo, hi]` of controls the range was sampled over.
    pub u_window: (f64, f64),
    pub zero_in_interior: ZeroInterior,
    /// Whether the sampled range contains `0` strictly inside one interval.
    pub range_brackets_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub grid_n: usize,
    pub u_max: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { grid_n: DEFAULT_GRID_N, u_max: DEFAULT_U_MAX }
    }
}

pub fn spectrum_summary(
    a: &Mat2,
    b: &Mat2,
    control_set: &ControlSet,
    pcontrollable: bool,
    opts: &SpectrumOptions,
    tol: &Tolerance,
) -> SpectrumSummary {
    let re_range = sigma_re_range(a, b, control_set, opts.grid_n, opts.u_max, tol);
    SpectrumSummary {
        trace_b: b.trace(),
        range_brackets_zero: re_range.iter().any(|iv| iv.contains_in_interior(0.0)),
        u_window: control_set.truncated(opts.u_max),
        re_range,
        zero_in_interior: zero_in_interior_sigma_re(a, b, pcontrollable, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Controllable,
    NotControllable,
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Controllable => "controllable",
            VerdictStatus::NotControllable => "not_controllable",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Rank condition on the punctured plane (necessary).
    Larc,
    /// Some admissible `u` with `Δ(u) < 0` (necessary).
    ProjectiveControllable,
    /// `tr(B) ≠ 0`.
    NonzeroTrace,
    /// `tr(B) = 0` and `tr²(AB) - 4 det(AB) > 0`.
    TracelessProduct,
    /// Sampled real-part range over a bounded control set contains 0 inside.
    SampledRangeBracketsZero,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::Larc => "larc",
            Condition::ProjectiveControllable => "projective_controllable",
            Condition::NonzeroTrace => "nonzero_trace",
            Condition::TracelessProduct => "traceless_product",
            Condition::SampledRangeBracketsZero => "sampled_range_brackets_zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reason {
    pub condition: Condition,
    pub holds: bool,
    pub evidence: String,
}

/// Set of sufficient hypotheses that established controllability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Rank condition, projective controllability and `tr(B) ≠ 0`.
    NonzeroTrace,
    /// Rank condition, projective controllability, `tr(B) = 0` and a
    /// positive product discriminant.
    TracelessProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllabilityVerdict {
    pub status: VerdictStatus,
    pub reasons: Vec<Reason>,
    pub criterion: Option<Criterion>,
}

fn fmt_intervals(range: &[ReInterval]) -> String {
    range.iter().map(|iv| format!("[{:.6}, {:.6}]", iv.lo, iv.hi)).collect::<Vec<_>>().join(" ∪ ")
}

/// Combine precomputed pieces; stops at the first necessary condition that fails.
pub fn verdict_from_parts(
    larc: &LarcVerdict,
    projective: &ProjectiveVerdict,
    spectrum: &SpectrumSummary,
    control_set: &ControlSet,
) -> ControllabilityVerdict {
    let mut reasons = Vec::new();
    let larc_evidence = match (&larc.certificate, &larc.failure_point) {
        (Some(c), _) => format!("pair with indicator {:.6} in a {}-dimensional algebra", c.indicator, larc.basis_dim),
        (None, Some(x)) => format!("rank ≤ 1 at x = ({:.6}, {:.6})", x.x1, x.x2),
        (None, None) => format!("rank 2 everywhere, algebra dimension {}", larc.basis_dim),
    };
    reasons.push(Reason { condition: Condition::Larc, holds: larc.holds, evidence: larc_evidence });
    if !larc.holds {
        return ControllabilityVerdict { status: VerdictStatus::NotControllable, reasons, criterion: None };
    }

    let proj_evidence = match projective.witness {
        Some(u) => format!("Δ(u) < 0 at u = {u:.6}"),
        None => "Δ(u) ≥ 0 for every admissible u".to_string(),
    };
    reasons.push(Reason {
        condition: Condition::ProjectiveControllable,
        holds: projective.controllable,
        evidence: proj_evidence,
    });
    if !projective.controllable {
        return ControllabilityVerdict { status: VerdictStatus::NotControllable, reasons, criterion: None };
    }

    let zi = &spectrum.zero_in_interior;
    let (condition, criterion, evidence) = match zi.test {
        InteriorTest::NonzeroTrace => {
            (Condition::NonzeroTrace, Criterion::NonzeroTrace, format!("tr(B) = {:.6}", spectrum.trace_b))
        }
        _ => (
            Condition::TracelessProduct,
            Criterion::TracelessProduct,
            format!("tr(B) = 0, tr²(AB) - 4det(AB) = {:.6}", zi.product_discriminant.unwrap_or(f64::NAN)),
        ),
    };
    reasons.push(Reason { condition, holds: zi.holds, evidence });

    let mut holds = zi.holds;
    if control_set.is_bounded() {
        // the interior tests describe the whole line; over a bounded set
        // the sampled range must agree
        reasons.push(Reason {
            condition: Condition::SampledRangeBracketsZero,
            holds: spectrum.range_brackets_zero,
            evidence: format!("Re λ over U ⊂ {}", fmt_intervals(&spectrum.re_range)),
        });
        holds &= spectrum.range_brackets_zero;
    }
    if holds {
        return ControllabilityVerdict { status: VerdictStatus::Controllable, reasons, criterion: Some(criterion) };
    }
    if !control_set.is_bounded() {
        reasons.push(Reason {
            condition: Condition::SampledRangeBracketsZero,
            holds: spectrum.range_brackets_zero,
            evidence: format!(
                "0 is not interior to Re λ ⊂ {} (u sampled in [{}, {}])",
                fmt_intervals(&spectrum.re_range),
                spectrum.u_window.0,
                spectrum.u_window.1
            ),
        });
    }
    ControllabilityVerdict { status: VerdictStatus::Inconclusive, reasons, criterion: None }
}

pub fn controllability_verdict(a: &Mat2, b: &Mat2, control_set: &ControlSet) -> ControllabilityVerdict {
    controllability_verdict_with(a, b, control_set, &LarcOptions::default(), &SpectrumOptions::default())
}

pub fn controllability_verdict_with(
    a: &Mat2,
    b: &Mat2,
    control_set: &ControlSet,
    larc_opts: &LarcOptions,
    spectrum_opts: &SpectrumOptions,
) -> ControllabilityVerdict {
    let tol = &larc_opts.tolerance;
    let larc = decide_larc_with(a, b, larc_opts);
    let projective = projective_controllable(a, b, control_set, tol);
    let spectrum = spectrum_summary(a, b, control_set, projective.controllable, spectrum_opts, tol);
    verdict_from_parts(&larc, &projective, &spectrum, control_set)
}
