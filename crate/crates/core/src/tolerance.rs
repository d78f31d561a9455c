//! Zero-test policy shared by every module.
//!
//! Quantities are compared against `eps * scale^degree`, where `scale` is
//! `1 + |A|_max + |B|_max` for the system at hand and `degree` is the
//! homogeneity degree of the quantity in the matrix entries (2 for a
//! determinant or a discriminant, 4 for `det[A,B]`, ...).

use serde::{Deserialize, Serialize};

use crate::mat2::Mat2;

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(eps.is_finite() && eps >= 0.0, "tolerance must be finite and non-negative");
        Self { eps }
    }

    /// `1 + |A|_max + |B|_max`.
    pub fn scale_of(a: &Mat2, b: &Mat2) -> f64 {
        1.0 + a.max_abs() + b.max_abs()
    }

    /// Absolute threshold for a quantity of the given degree at `scale`.
    pub fn threshold(&self, scale: f64, degree: i32) -> f64 {
        self.eps * scale.powi(degree)
    }

    pub fn is_zero(&self, value: f64, scale: f64, degree: i32) -> bool {
        value.abs() <= self.threshold(scale, degree)
    }

    /// Thresholded sign: -1, 0 or +1.
    pub fn sign(&self, value: f64, scale: f64, degree: i32) -> Sign {
        if self.is_zero(value, scale, degree) {
            Sign::Zero
        } else if value < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }
}
