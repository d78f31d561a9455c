//! Dense 2×2 real matrices and plane vectors.
//!
//! Every object in the analysis is a 2×2 matrix, so everything here is a
//! plain `Copy` value with closed-form formulas (no decompositions).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("matrix entry ({row},{col}) is not finite: {value}")]
pub struct NonFiniteEntry {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Row-major 2×2 real matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 2]; 2]", try_from = "[[f64; 2]; 2]")]
pub struct Mat2 {
    a11: f64,
    a12: f64,
    a21: f64,
    a22: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { a11: 0.0, a12: 0.0, a21: 0.0, a22: 0.0 };
    pub const IDENTITY: Mat2 = Mat2 { a11: 1.0, a12: 0.0, a21: 0.0, a22: 1.0 };
    /// Generator of counter-clockwise rotations, `[[0,-1],[1,0]]`.
    pub const ROTATION: Mat2 = Mat2 { a11: 0.0, a12: -1.0, a21: 1.0, a22: 0.0 };

    /// Panics if an entry is NaN or infinite; use [`Mat2::try_new`] on untrusted input.
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        match Self::try_new(a11, a12, a21, a22) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_new(a11: f64, a12: f64, a21: f64, a22: f64) -> Result<Self, NonFiniteEntry> {
        for (idx, &value) in [a11, a12, a21, a22].iter().enumerate() {
            if !value.is_finite() {
                return Err(NonFiniteEntry { row: idx / 2 + 1, col: idx % 2 + 1, value });
            }
        }
        Ok(Self { a11, a12, a21, a22 })
    }

    // Arithmetic results skip the finiteness check; overflow surfaces as
    // non-finite values that callers (the integrators) detect themselves.
    const fn raw(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn from_columns(c1: Vec2, c2: Vec2) -> Self {
        Self::new(c1.x1, c2.x1, c1.x2, c2.x2)
    }

    pub fn scalar(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, c)
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }
    pub fn a12(&self) -> f64 {
        self.a12
    }
    pub fn a21(&self) -> f64 {
        self.a21
    }
    pub fn a22(&self) -> f64 {
        self.a22
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.a11, self.a21)
    }

    pub fn col2(&self) -> Vec2 {
        Vec2::new(self.a12, self.a22)
    }

    /// Coefficients in the basis `E11, E12, E21, E22` of gl(2).
    pub fn to_coords(&self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(&self) -> Self {
        Self::raw(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn is_finite(&self) -> bool {
        self.to_coords().iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.to_coords().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.to_coords().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        Vec2::new(self.a11 * x.x1 + self.a12 * x.x2, self.a21 * x.x1 + self.a22 * x.x2)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::raw(c * self.a11, c * self.a12, c * self.a21, c * self.a22)
    }

    /// `self + r * other`.
    pub fn pencil(&self, other: &Mat2, r: f64) -> Self {
        *self + other.scale(r)
    }
}

impl From<Mat2> for [[f64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        m.rows()
    }
}

impl TryFrom<[[f64; 2]; 2]> for Mat2 {
    type Error = NonFiniteEntry;

    fn try_from(r: [[f64; 2]; 2]) -> Result<Self, Self::Error> {
        Mat2::try_new(r[0][0], r[0][1], r[1][0], r[1][1])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::raw(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::raw(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::raw(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, x: Vec2) -> Vec2 {
        self.apply(x)
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m.scale(self)
    }
}

/// A vector of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", from = "[f64; 2]")]
pub struct Vec2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vec2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(&self, o: Vec2) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(c * self.x1, c * self.x2)
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.x1 == 0.0 && self.x2 == 0.0
    }

    /// Angle in (-π, π].
    pub fn angle(&self) -> f64 {
        self.x2.atan2(self.x1)
    }

    /// Unit representative whose first nonzero coordinate is positive.
    pub fn projective_normalize(&self) -> Self {
        let n = self.norm();
        let mut v = self.scale(1.0 / n);
        if v.x1 < 0.0 || (v.x1 == 0.0 && v.x2 < 0.0) {
            v = v.scale(-1.0);
        }
        v
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x1, v.x2]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

/// Determinant of the matrix with columns `u | v`.
pub fn det_columns(u: Vec2, v: Vec2) -> f64 {
    u.x1 * v.x2 - u.x2 * v.x1
}

/// Lie bracket `AB - BA`.
pub fn bracket(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b - *b * *a
}

/// Classical adjoint `tr(A) I - A`.
pub fn adjugate(a: &Mat2) -> Mat2 {
    Mat2::raw(a.a22, -a.a12, -a.a21, a.a11)
}

/// `tr(M)^2 - 4 det(M)`; negative iff `M` has a non-real eigenvalue pair.
pub fn char_discriminant(m: &Mat2) -> f64 {
    let t = m.trace();
    t * t - 4.0 * m.det()
}

/// `det(A + rB)` expanded as `det A + tr(adj(A) B) r + det(B) r^2`.
pub fn det_pencil(a: &Mat2, b: &Mat2, r: f64) -> f64 {
    a.det() + (adjugate(a) * *b).trace() * r + b.det() * r * r
}

/// Roots of `λ² - tr(M) λ + det(M)`, ordered by real part then imaginary part.
pub fn eigenvalues(m: &Mat2) -> (Complex64, Complex64) {
    quadratic_eigenvalues(m.trace(), m.det())
}

/// Roots of `λ² - t λ + d` with the same ordering as [`eigenvalues`].
pub(crate) fn quadratic_eigenvalues(t: f64, d: f64) -> (Complex64, Complex64) {
    let disc = t * t - 4.0 * d;
    if disc < 0.0 {
        let w = 0.5 * (-disc).sqrt();
        let re = 0.5 * t;
        return (Complex64::new(re, -w), Complex64::new(re, w));
    }
    let sq = disc.sqrt();
    // avoid cancellation in the smaller-magnitude root
    let big = 0.5 * (t + if t >= 0.0 { sq } else { -sq });
    let small = if big != 0.0 { d / big } else { 0.0 };
    let (lo, hi) = if big <= small { (big, small) } else { (small, big) };
    (Complex64::new(lo, 0.0), Complex64::new(hi, 0.0))
}
