//! System description: drift `A`, control matrix `B`, admissible control values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat2::Mat2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("control interval needs finite bounds with lo < hi, got [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("control set must be \"reals\" or a two-element array [lo, hi], got {0:?}")]
    UnknownControlSet(String),
}

/// Values the piecewise-constant control may take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlSet {
    Reals,
    /// Closed interval `[lo, hi]`, `lo < hi`.
    Interval {
        lo: f64,
        hi: f64,
    },
}

impl ControlSet {
    pub fn interval(lo: f64, hi: f64) -> Result<Self, SystemError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(ControlSet::Interval { lo, hi })
        } else {
            Err(SystemError::EmptyInterval { lo, hi })
        }
    }

    pub fn contains(&self, u: f64) -> bool {
        match *self {
            ControlSet::Reals => u.is_finite(),
            ControlSet::Interval { lo, hi } => lo <= u && u <= hi,
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            ControlSet::Reals => (f64::NEG_INFINITY, f64::INFINITY),
            ControlSet::Interval { lo, hi } => (lo, hi),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ControlSet::Interval { .. })
    }

    /// Finite window used by numeric diagnostics: the interval itself, or
    /// `[-u_max, u_max]` for the whole line.
    pub fn truncated(&self, u_max: f64) -> (f64, f64) {
        match *self {
            ControlSet::Reals => (-u_max, u_max),
            ControlSet::Interval { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawControlSet {
    Name(String),
    Bounds([f64; 2]),
}

impl Serialize for ControlSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            ControlSet::Reals => RawControlSet::Name("reals".into()),
            ControlSet::Interval { lo, hi } => RawControlSet::Bounds([lo, hi]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ControlSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match RawControlSet::deserialize(d) {
            Ok(RawControlSet::Name(n)) if n == "reals" => Ok(ControlSet::Reals),
            Ok(RawControlSet::Name(n)) => Err(D::Error::custom(SystemError::UnknownControlSet(n))),
            Ok(RawControlSet::Bounds([lo, hi])) => ControlSet::interval(lo, hi).map_err(D::Error::custom),
            Err(_) => Err(D::Error::custom(SystemError::UnknownControlSet("<other>".into()))),
        }
    }
}

fn default_control_set() -> ControlSet {
    ControlSet::Reals
}

/// On-disk description of `ẋ = (A + uB)x`.
///
/// ```json
/// { "A": [[2, -1], [0, 1]], "B": [[0, 1], [-1, 0]], "control_set": "reals", "label": "demo" }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
    #[serde(default = "default_control_set")]
    pub control_set: ControlSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SystemDescription {
    pub fn new(a: Mat2, b: Mat2, control_set: ControlSet) -> Self {
        Self { a, b, control_set, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `A + uB`.
    pub fn at(&self, u: f64) -> Mat2 {
        self.a.pencil(&self.b, u)
    }
}
