//! The induced flow on the projective line.
//!
//! In the angle `θ` of a representative `(cos θ, sin θ)` the projected
//! system reads `θ' = ½ [P cos 2θ + Q sin 2θ + R]`, with `P, Q, R` affine
//! in the control. In the chart `v = tan θ` this is the Riccati equation
//! `v' = ½ [(R-P) v² + 2Q v + (R+P)]`, solvable in closed form; the
//! solutions below are evaluated in homogeneous coordinates `v = N / D`
//! so that `θ = atan2(N, D)` stays finite when `v` blows up.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delta::{classify_exists_negative, delta_quadratic, OpenInterval, PencilSigns};
use crate::mat2::{Mat2, Vec2};
use crate::system::ControlSet;
use crate::tolerance::{Sign, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngularError {
    #[error("projection point must be a unit vector (|s| = {0})")]
    NotUnit(f64),
    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error("closed form overflowed at t = {0}")]
    UnsupportedTime(f64),
}

/// Reduce an angle modulo π into (-π/2, π/2].
pub fn reduce_angle(theta: f64) -> f64 {
    let mut r = theta - PI * (theta / PI).round();
    if r <= -FRAC_PI_2 {
        r += PI;
    } else if r > FRAC_PI_2 {
        r -= PI;
    }
    r
}

/// Distance between two angles seen as points of the projective line.
pub fn projective_distance(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs().min(PI - reduce_angle(a - b).abs())
}

/// A point of the projective line by its angle in (-π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub theta: f64,
}

impl ProjectivePoint {
    pub fn new(theta: f64) -> Self {
        Self { theta: reduce_angle(theta) }
    }

    pub fn from_vector(x: Vec2) -> Self {
        Self::new(x.angle())
    }

    /// `tan θ`, `+∞` at θ = π/2.
    pub fn slope(&self) -> f64 {
        if self.theta == FRAC_PI_2 {
            f64::INFINITY
        } else {
            self.theta.tan()
        }
    }
}

/// `(A - (sᵀAs) I) s` for a unit vector `s`.
pub fn project_field(a: &Mat2, s: Vec2) -> Result<Vec2, AngularError> {
    let n = s.norm();
    if n.is_nan() || (n - 1.0).abs() > 1e-9 {
        return Err(AngularError::NotUnit(n));
    }
    let as_ = a.apply(s);
    Ok(as_ - s.scale(s.dot(as_)))
}

/// `P, Q, R, S` of the polar form of `A + uB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PqrCoefficients {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// `tr(A + uB)`.
    pub s: f64,
    pub u: f64,
}

impl PqrCoefficients {
    pub fn new(p: f64, q: f64, r: f64) -> Self {
        Self { p, q, r, s: 0.0, u: 0.0 }
    }

    fn scale(&self) -> f64 {
        1.0 + self.p.abs().max(self.q.abs()).max(self.r.abs())
    }
}

pub fn pqr(a: &Mat2, b: &Mat2, u: f64) -> PqrCoefficients {
    PqrCoefficients {
        p: (a.a12() + a.a21()) + u * (b.a12() + b.a21()),
        q: (a.a22() - a.a11()) + u * (b.a22() - b.a11()),
        r: (a.a21() - a.a12()) + u * (b.a21() - b.a12()),
        s: (a.a22() + a.a11()) + u * (b.a22() + b.a11()),
        u,
    }
}

/// `½ [P cos 2θ + Q sin 2θ + R]`.
pub fn angular_rhs(c: &PqrCoefficients, theta: f64) -> f64 {
    let (s2, c2) = (2.0 * theta).sin_cos();
    0.5 * (c.p * c2 + c.q * s2 + c.r)
}

/// `P² + Q² - R²`.
pub fn delta_of_pqr(c: &PqrCoefficients) -> f64 {
    c.p * c.p + c.q * c.q - c.r * c.r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularTag {
    LinearInV,
    AffineDrift,
    Frozen,
    DoubleRoot,
    TwoRealRoots,
    Rotational,
}

impl AngularTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            AngularTag::LinearInV => "linear_in_v",
            AngularTag::AffineDrift => "affine_drift",
            AngularTag::Frozen => "frozen",
            AngularTag::DoubleRoot => "double_root",
            AngularTag::TwoRealRoots => "two_real_roots",
            AngularTag::Rotational => "rotational",
        }
    }

    pub const ALL: [AngularTag; 6] = [
        AngularTag::LinearInV,
        AngularTag::AffineDrift,
        AngularTag::Frozen,
        AngularTag::DoubleRoot,
        AngularTag::TwoRealRoots,
        AngularTag::Rotational,
    ];
}

/// Solution regime of the angular equation at a fixed control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularCase {
    /// `R = P`, `Q ≠ 0`: `v' = Qv + P`.
    LinearInV { rate: f64, equilibrium: f64 },
    /// `R = P`, `Q = 0`, `P ≠ 0`: `v' = P`.
    AffineDrift { slope: f64 },
    /// `P = Q = R = 0`.
    Frozen,
    /// `R ≠ P`, `Δ = 0`: one equilibrium slope.
    DoubleRoot { curvature: f64, equilibrium: f64 },
    /// `R ≠ P`, `Δ > 0`: two equilibrium slopes.
    TwoRealRoots { curvature: f64, sqrt_delta: f64, equilibria: (f64, f64) },
    /// `Δ < 0`: θ turns monotonically with period `2π/√(-Δ)`.
    Rotational { curvature: f64, sqrt_neg_delta: f64, period: f64 },
}

impl AngularCase {
    pub fn tag(&self) -> AngularTag {
        match self {
            AngularCase::LinearInV { .. } => AngularTag::LinearInV,
            AngularCase::AffineDrift { .. } => AngularTag::AffineDrift,
            AngularCase::Frozen => AngularTag::Frozen,
            AngularCase::DoubleRoot { .. } => AngularTag::DoubleRoot,
            AngularCase::TwoRealRoots { .. } => AngularTag::TwoRealRoots,
            AngularCase::Rotational { .. } => AngularTag::Rotational,
        }
    }
}

pub fn classify_case(c: &PqrCoefficients, tol: &Tolerance) -> AngularCase {
    let scale = c.scale();
    let curvature = c.r - c.p;
    if tol.is_zero(curvature, scale, 1) {
        return if !tol.is_zero(c.q, scale, 1) {
            AngularCase::LinearInV { rate: c.q, equilibrium: -c.p / c.q }
        } else if !tol.is_zero(c.p, scale, 1) {
            AngularCase::AffineDrift { slope: c.p }
        } else {
            AngularCase::Frozen
        };
    }
    let delta = delta_of_pqr(c);
    match tol.sign(delta, scale, 2) {
        Sign::Zero => AngularCase::DoubleRoot { curvature, equilibrium: -c.q / curvature },
        Sign::Positive => {
            let sd = delta.sqrt();
            let e1 = (-c.q - sd) / curvature;
            let e2 = (-c.q + sd) / curvature;
            AngularCase::TwoRealRoots { curvature, sqrt_delta: sd, equilibria: (e1.min(e2), e1.max(e2)) }
        }
        Sign::Negative => {
            let sd = (-delta).sqrt();
            AngularCase::Rotational { curvature, sqrt_neg_delta: sd, period: 2.0 * PI / sd }
        }
    }
}

/// Distance of `(P, Q, R)` to the nearest case boundary, relative to the
/// zero thresholds used by [`classify_case`].
pub fn classification_margin(c: &PqrCoefficients, tol: &Tolerance) -> f64 {
    let scale = c.scale();
    let t1 = tol.threshold(scale, 1);
    let t2 = tol.threshold(scale, 2);
    let curvature = (c.r - c.p).abs() / t1;
    if curvature <= 1.0 {
        let q = c.q.abs() / t1;
        return if q > 1.0 { curvature.min(q) } else { curvature.min(q).min(c.p.abs() / t1) };
    }
    curvature.min(delta_of_pqr(c).abs() / t2)
}

/// Exact solution of the angular equation from `θ(0) = theta0`, reduced to
/// (-π/2, π/2].
pub fn solve_angular_closed_form(
    c: &PqrCoefficients,
    theta0: f64,
    t: f64,
    tol: &Tolerance,
) -> Result<ProjectivePoint, AngularError> {
    if !(t.is_finite() && t >= 0.0) || !theta0.is_finite() {
        return Err(AngularError::InvalidTime(t));
    }
    let case = classify_case(c, tol);
    let (n0, d0) = theta0.sin_cos();
    // (num, den) with v(t) = num / den
    let (num, den) = match case {
        AngularCase::Frozen => (n0, d0),
        AngularCase::AffineDrift { slope } => (n0 + slope * t * d0, d0),
        AngularCase::LinearInV { rate, equilibrium } => {
            // v = (v0 - v*) e^{Qt} + v*
            let k = -equilibrium;
            if rate > 0.0 {
                let f = (-rate * t).exp();
                ((n0 + k * d0) - k * d0 * f, d0 * f)
            } else {
                let e = (rate * t).exp();
                ((n0 + k * d0) * e - k * d0, d0)
            }
        }
        AngularCase::DoubleRoot { curvature, .. } => {
            // z = (R-P) v + Q obeys z' = z²/2
            let zn0 = curvature * n0 + c.q * d0;
            let (zn, zd) = (zn0, d0 - 0.5 * zn0 * t);
            (zn - c.q * zd, curvature * zd)
        }
        AngularCase::TwoRealRoots { curvature, sqrt_delta: s, .. } => {
            // z' = (z² - Δ)/2, (z - s)/(z + s) = K e^{st}
            let zn0 = curvature * n0 + c.q * d0;
            let kn = zn0 - s * d0;
            let kd = zn0 + s * d0;
            let f = (-s * t).exp();
            let (zn, zd) = (s * (kd * f + kn), kd * f - kn);
            (zn - c.q * zd, curvature * zd)
        }
        AngularCase::Rotational { curvature, sqrt_neg_delta: s, .. } => {
            // z' = (z² - Δ)/2, z = s tan(st/2 + φ0)
            let zn0 = curvature * n0 + c.q * d0;
            let phi = zn0.atan2(s * d0) + 0.5 * s * t;
            let (sp, cp) = phi.sin_cos();
            let (zn, zd) = (s * sp, cp);
            (zn - c.q * zd, curvature * zd)
        }
    };
    if !(num.is_finite() && den.is_finite()) || (num == 0.0 && den == 0.0) {
        return Err(AngularError::UnsupportedTime(t));
    }
    Ok(ProjectivePoint::new(num.atan2(den)))
}

/// Controllability of the projective flow: some admissible `u` with `Δ(u) < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveVerdict {
    pub controllable: bool,
    pub witness: Option<f64>,
    /// `{u ∈ U : Δ(u) < 0}`.
    pub feasible_set: Vec<OpenInterval>,
}

pub fn projective_controllable(a: &Mat2, b: &Mat2, control_set: &ControlSet, tol: &Tolerance) -> ProjectiveVerdict {
    let d = delta_quadratic(a, b);
    let class = classify_exists_negative(&d, &PencilSigns::of(a, b, tol), tol);
    let (lo, hi) = control_set.bounds();
    let feasible_set: Vec<OpenInterval> = class
        .negative_set
        .iter()
        .filter_map(|iv| {
            let l = iv.lo_or_neg_inf().max(lo);
            let h = iv.hi_or_inf().min(hi);
            (l < h).then(|| OpenInterval::new(l.is_finite().then_some(l), h.is_finite().then_some(h)))
        })
        .collect();
    let witness = feasible_set.first().map(|iv| match (iv.lo, iv.hi) {
        (Some(l), Some(h)) => 0.5 * (l + h),
        (None, Some(h)) => h - 1.0,
        (Some(l), None) => l + 1.0,
        (None, None) => 0.0,
    });
    ProjectiveVerdict { controllable: !feasible_set.is_empty(), witness, feasible_set }
}
