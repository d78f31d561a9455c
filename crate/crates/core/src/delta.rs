//! The pencil discriminant `Δ(u) = tr²(A+uB) - 4 det(A+uB) = αu² + βu + γ`
//! and the classification of when it takes negative values.

use serde::{Deserialize, Serialize};

use crate::mat2::{adjugate, bracket, char_discriminant, Mat2};
use crate::tolerance::{Sign, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaQuadratic {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `det[A,B]`; the discriminant of Δ is `-16` times this.
    pub det_bracket: f64,
    /// `1 + |A|_max + |B|_max`, kept for zero tests on the coefficients.
    pub scale: f64,
}

pub fn delta_quadratic(a: &Mat2, b: &Mat2) -> DeltaQuadratic {
    let (ta, tb) = (a.trace(), b.trace());
    DeltaQuadratic {
        alpha: char_discriminant(b),
        beta: 2.0 * (2.0 * (*a * *b).trace() - ta * tb),
        gamma: char_discriminant(a),
        det_bracket: bracket(a, b).det(),
        scale: Tolerance::scale_of(a, b),
    }
}

impl DeltaQuadratic {
    pub fn eval(&self, u: f64) -> f64 {
        (self.alpha * u + self.beta) * u + self.gamma
    }

    pub fn discriminant(&self) -> f64 {
        self.beta * self.beta - 4.0 * self.alpha * self.gamma
    }
}

/// Vertex `(u*, Δ(u*))` of the parabola; `None` when `α = 0`.
pub fn delta_extremum(d: &DeltaQuadratic) -> Option<(f64, f64)> {
    if d.alpha == 0.0 {
        return None;
    }
    Some((-d.beta / (2.0 * d.alpha), 4.0 * d.det_bracket / d.alpha))
}

/// Open interval with optional (infinite) endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl OpenInterval {
    pub const REALS: OpenInterval = OpenInterval { lo: None, hi: None };

    pub fn new(lo: Option<f64>, hi: Option<f64>) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lo.is_none_or(|l| u > l) && self.hi.is_none_or(|h| u < h)
    }

    pub fn lo_or_neg_inf(&self) -> f64 {
        self.lo.unwrap_or(f64::NEG_INFINITY)
    }

    pub fn hi_or_inf(&self) -> f64 {
        self.hi.unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaCase {
    /// `det[A,B] < 0`, `α = 0`: Δ linear with nonzero slope.
    A1,
    /// `det[A,B] < 0`, `α ≠ 0`: two distinct real roots.
    A2,
    /// `det[A,B] > 0`, `α < 0`: negative everywhere.
    B1,
    /// `det[A,B] > 0`, `α > 0`: positive everywhere.
    B2,
    /// `det[A,B] = 0`, `α = β = 0`, `γ < 0`.
    C1Neg,
    /// `det[A,B] = 0`, `α = 0`, Δ constant and not negative.
    C1Nonneg,
    /// `det[A,B] = 0`, `α < 0`: negative except at the double root.
    C2Neg,
    /// `det[A,B] = 0`, `α > 0`: never negative.
    C2Pos,
}

impl DeltaCase {
    pub fn label(&self) -> &'static str {
        match self {
            DeltaCase::A1 => "A1",
            DeltaCase::A2 => "A2",
            DeltaCase::B1 => "B1",
            DeltaCase::B2 => "B2",
            DeltaCase::C1Neg => "C1_neg",
            DeltaCase::C1Nonneg => "C1_nonneg",
            DeltaCase::C2Neg => "C2_neg",
            DeltaCase::C2Pos => "C2_pos",
        }
    }
}

/// Signs of the eigenvalue discriminants of `A` and `B` and the trace
/// condition `tr(adj(A)B) = tr(AB)` (equivalently `β = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PencilSigns {
    pub a_discriminant: Sign,
    pub b_discriminant: Sign,
    pub trace_condition: bool,
}

impl PencilSigns {
    pub fn of(a: &Mat2, b: &Mat2, tol: &Tolerance) -> Self {
        let scale = Tolerance::scale_of(a, b);
        let adj_trace = (adjugate(a) * *b).trace();
        let ab_trace = (*a * *b).trace();
        Self {
            a_discriminant: tol.sign(char_discriminant(a), scale, 2),
            b_discriminant: tol.sign(char_discriminant(b), scale, 2),
            trace_condition: tol.is_zero(adj_trace - ab_trace, scale, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaClassification {
    pub case: DeltaCase,
    pub exists_negative: bool,
    /// `{u : Δ(u) < 0}` as disjoint open intervals in increasing order.
    pub negative_set: Vec<OpenInterval>,
    /// Smallest distance of a routing quantity to its zero threshold,
    /// relative to that threshold; values near 1 mark a fragile label.
    pub margin: f64,
}

pub fn classify_exists_negative(d: &DeltaQuadratic, signs: &PencilSigns, tol: &Tolerance) -> DeltaClassification {
    let det_sign = tol.sign(d.det_bracket, d.scale, 4);
    let alpha = signs.b_discriminant;
    let det_thr = tol.threshold(d.scale, 4);
    let alpha_thr = tol.threshold(d.scale, 2);
    let mut margin = d.det_bracket.abs() / det_thr;

    let (case, negative_set) = match det_sign {
        Sign::Negative => {
            if alpha.is_zero() {
                // Δ(u) = βu + γ, β ≠ 0
                let root = -d.gamma / d.beta;
                let ray = if d.beta > 0.0 {
                    OpenInterval::new(None, Some(root))
                } else {
                    OpenInterval::new(Some(root), None)
                };
                (DeltaCase::A1, vec![ray])
            } else {
                margin = margin.min(d.alpha.abs() / alpha_thr);
                let (r1, r2) = real_roots(d);
                let set = if d.alpha > 0.0 {
                    vec![OpenInterval::new(Some(r1), Some(r2))]
                } else {
                    vec![OpenInterval::new(None, Some(r1)), OpenInterval::new(Some(r2), None)]
                };
                (DeltaCase::A2, set)
            }
        }
        Sign::Positive => {
            margin = margin.min(d.alpha.abs() / alpha_thr);
            if d.alpha < 0.0 {
                (DeltaCase::B1, vec![OpenInterval::REALS])
            } else {
                (DeltaCase::B2, Vec::new())
            }
        }
        Sign::Zero => match alpha {
            Sign::Zero => {
                if signs.trace_condition && signs.a_discriminant.is_negative() {
                    (DeltaCase::C1Neg, vec![OpenInterval::REALS])
                } else {
                    (DeltaCase::C1Nonneg, Vec::new())
                }
            }
            Sign::Negative => {
                let u0 = -d.beta / (2.0 * d.alpha);
                (DeltaCase::C2Neg, vec![OpenInterval::new(None, Some(u0)), OpenInterval::new(Some(u0), None)])
            }
            Sign::Positive => (DeltaCase::C2Pos, Vec::new()),
        },
    };

    DeltaClassification { case, exists_negative: !negative_set.is_empty(), negative_set, margin }
}

/// Ordered real roots of Δ; only meaningful when the discriminant is positive.
fn real_roots(d: &DeltaQuadratic) -> (f64, f64) {
    let sq = d.discriminant().max(0.0).sqrt();
    let q = -0.5 * (d.beta + if d.beta >= 0.0 { sq } else { -sq });
    let r1 = q / d.alpha;
    let r2 = if q != 0.0 { d.gamma / q } else { r1 };
    if r1 <= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Convenience wrapper computing the sign inputs from the pair itself.
pub fn classify_pair(a: &Mat2, b: &Mat2, tol: &Tolerance) -> (DeltaQuadratic, DeltaClassification) {
    let d = delta_quadratic(a, b);
    let signs = PencilSigns::of(a, b, tol);
    let c = classify_exists_negative(&d, &signs, tol);
    (d, c)
}
