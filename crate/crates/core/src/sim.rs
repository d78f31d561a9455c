//! Fixed-step RK4 integration of the planar and angular flows under
//! piecewise-constant controls.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angular::{angular_rhs, classify_case, pqr, projective_distance, AngularCase};
use crate::mat2::{Mat2, Vec2};
use crate::tolerance::Tolerance;

pub const DEFAULT_DT: f64 = 1e-3;
/// Step-doubling error estimate above which a step is rejected.
pub const MAX_LOCAL_ERROR: f64 = 1e-3;
const MIN_NORM: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("step must be finite and positive, got {0}")]
    InvalidStep(f64),
    #[error("initial state must be nonzero and finite")]
    ZeroState,
    #[error("initial angle must be finite")]
    NonFiniteAngle,
    #[error("segment {index}: duration must be finite and positive, got {duration}")]
    InvalidDuration { index: usize, duration: f64 },
    #[error("segment {index}: control must be finite, got {u}")]
    InvalidControl { index: usize, u: f64 },
    #[error("schedule has no segments")]
    EmptySchedule,
    #[error("local error estimate {estimate:.3e} at t = {t} exceeds {MAX_LOCAL_ERROR:e}; reduce dt")]
    StepTooLarge { t: f64, estimate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub u: f64,
}

/// Ordered `(duration, u)` segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSchedule {
    segments: Vec<Segment>,
}

impl ControlSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self, SimError> {
        if segments.is_empty() {
            return Err(SimError::EmptySchedule);
        }
        for (index, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(SimError::InvalidDuration { index, duration: s.duration });
            }
            if !s.u.is_finite() {
                return Err(SimError::InvalidControl { index, u: s.u });
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(u: f64, duration: f64) -> Result<Self, SimError> {
        Self::new(vec![Segment { duration, u }])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// The schedule cut at `horizon`, or extended by holding the last
    /// control until `horizon`.
    pub fn with_horizon(&self, horizon: f64) -> Result<Self, SimError> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(SimError::InvalidDuration { index: 0, duration: horizon });
        }
        let mut out = Vec::new();
        let mut elapsed = 0.0;
        for s in &self.segments {
            let left = horizon - elapsed;
            if left <= 0.0 {
                break;
            }
            out.push(Segment { duration: s.duration.min(left), u: s.u });
            elapsed += s.duration;
        }
        if horizon > elapsed {
            let last = self.segments.last().expect("validated nonempty");
            match out.last_mut() {
                Some(seg) if seg.u == last.u => seg.duration += horizon - elapsed,
                _ => out.push(Segment { duration: horizon - elapsed, u: last.u }),
            }
        }
        Self::new(out)
    }
}

/// Sampled solution; `controls[i]` is the control in force on the step
/// ending at `times[i]` (the first segment's control at `t = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub controls: Vec<f64>,
    /// Integration stopped early because the state left the representable range.
    pub truncated: bool,
}

impl<S: Copy> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, S)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

trait State: Copy {
    fn axpy(self, h: f64, k: Self) -> Self;
    fn error_measure(self, other: Self) -> f64;
    fn healthy(self) -> bool;
}

impl State for Vec2 {
    fn axpy(self, h: f64, k: Self) -> Self {
        self + k.scale(h)
    }
    fn error_measure(self, other: Self) -> f64 {
        (self - other).norm() / self.norm().max(MIN_NORM)
    }
    fn healthy(self) -> bool {
        self.is_finite() && self.norm() >= MIN_NORM
    }
}

impl State for f64 {
    fn axpy(self, h: f64, k: Self) -> Self {
        self + h * k
    }
    fn error_measure(self, other: Self) -> f64 {
        (self - other).abs()
    }
    fn healthy(self) -> bool {
        self.is_finite()
    }
}

fn rk4<S: State>(f: &impl Fn(S) -> S, y: S, h: f64) -> S {
    let k1 = f(y);
    let k2 = f(y.axpy(0.5 * h, k1));
    let k3 = f(y.axpy(0.5 * h, k2));
    let k4 = f(y.axpy(h, k3));
    y.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4)
}

fn integrate<S: State>(
    schedule: &ControlSchedule,
    y0: S,
    dt: f64,
    field: impl Fn(f64) -> Box<dyn Fn(S) -> S>,
) -> Result<Trajectory<S>, SimError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SimError::InvalidStep(dt));
    }
    let mut traj =
        Trajectory { times: vec![0.0], states: vec![y0], controls: vec![schedule.segments[0].u], truncated: false };
    let mut t0 = 0.0;
    let mut y = y0;
    for seg in &schedule.segments {
        let f = field(seg.u);
        // ratios like 0.4 / 0.05 land just above an integer
        let n = (seg.duration / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let h = seg.duration / n as f64;
        for i in 1..=n {
            let full = rk4(&f, y, h);
            let half = rk4(&f, rk4(&f, y, 0.5 * h), 0.5 * h);
            if !(full.healthy() && half.healthy()) {
                traj.truncated = true;
                return Ok(traj);
            }
            let estimate = full.error_measure(half) / 15.0;
            let t = t0 + h * i as f64;
            if estimate > MAX_LOCAL_ERROR {
                return Err(SimError::StepTooLarge { t, estimate });
            }
            y = full;
            traj.times.push(t);
            traj.states.push(y);
            traj.controls.push(seg.u);
        }
        t0 += seg.duration;
    }
    Ok(traj)
}

/// RK4 for `ẋ = (A + u(t)B) x`.
pub fn integrate_planar(
    a: &Mat2,
    b: &Mat2,
    schedule: &ControlSchedule,
    x0: Vec2,
    dt: f64,
) -> Result<Trajectory<Vec2>, SimError> {
    if !x0.healthy() {
        return Err(SimError::ZeroState);
    }
    let (a, b) = (*a, *b);
    integrate(schedule, x0, dt, move |u| {
        let m = a.pencil(&b, u);
        Box::new(move |x| m.apply(x))
    })
}

/// RK4 for the angle of the projected flow, without reduction mod π.
pub fn integrate_angular(
    a: &Mat2,
    b: &Mat2,
    schedule: &ControlSchedule,
    theta0: f64,
    dt: f64,
) -> Result<Trajectory<f64>, SimError> {
    if !theta0.is_finite() {
        return Err(SimError::NonFiniteAngle);
    }
    let (a, b) = (*a, *b);
    integrate(schedule, theta0, dt, move |u| {
        let c = pqr(&a, &b, u);
        Box::new(move |th| angular_rhs(&c, th))
    })
}

/// Largest projective distance between the direction of `x(t)` and `θ(t)`
/// started from the angle of `x0`.
pub fn consistency_planar_vs_angular(
    a: &Mat2,
    b: &Mat2,
    schedule: &ControlSchedule,
    x0: Vec2,
    dt: f64,
) -> Result<f64, SimError> {
    let planar = integrate_planar(a, b, schedule, x0, dt)?;
    let angular = integrate_angular(a, b, schedule, x0.angle(), dt)?;
    Ok(planar.states.iter().zip(&angular.states).map(|(x, th)| projective_distance(x.angle(), *th)).fold(0.0, f64::max))
}

/// First time the constant-control flow carries `theta0` to `theta1`
/// (mod π); `None` unless `Δ(u) < 0`.
pub fn reach_angle(a: &Mat2, b: &Mat2, u: f64, theta0: f64, theta1: f64, tol: &Tolerance) -> Option<f64> {
    let c = pqr(a, b, u);
    let AngularCase::Rotational { curvature, sqrt_neg_delta: s, .. } = classify_case(&c, tol) else {
        return None;
    };
    // z = (R-P) tan θ + Q = s tan φ with φ' = s/2
    let phase = |th: f64| {
        let (sn, cs) = th.sin_cos();
        (curvature * sn + c.q * cs).atan2(s * cs)
    };
    let dphi = (phase(theta1) - phase(theta0)).rem_euclid(PI);
    Some(2.0 * dphi / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn skew_control() -> (Mat2, Mat2) {
        (Mat2::new(2.0, -1.0, 0.0, 1.0), Mat2::new(0.0, 1.0, -1.0, 0.0))
    }

    #[test]
    fn schedule_validation() {
        assert!(ControlSchedule::new(vec![]).is_err());
        assert!(ControlSchedule::constant(1.0, 0.0).is_err());
        assert!(ControlSchedule::constant(f64::NAN, 1.0).is_err());
        let s =
            ControlSchedule::new(vec![Segment { duration: 1.0, u: 0.0 }, Segment { duration: 2.0, u: 1.0 }]).unwrap();
        assert_eq!(s.total_duration(), 3.0);
        assert_eq!(
            s.with_horizon(1.5).unwrap().segments(),
            &[Segment { duration: 1.0, u: 0.0 }, Segment { duration: 0.5, u: 1.0 }]
        );
        assert_eq!(s.with_horizon(5.0).unwrap().segments()[1], Segment { duration: 4.0, u: 1.0 });
    }

    #[test]
    fn step_count_ignores_rounding() {
        let s = ControlSchedule::constant(0.0, 0.4).unwrap();
        let tr = integrate_angular(&Mat2::ROTATION, &Mat2::ZERO, &s, 0.0, 0.05).unwrap();
        assert_eq!(tr.len(), 9);
        assert_eq!(*tr.times.last().unwrap(), 0.4);
    }

    #[test]
    fn constant_trajectory_for_zero_system() {
        let s = ControlSchedule::constant(3.0, 1.0).unwrap();
        let tr = integrate_planar(&Mat2::ZERO, &Mat2::ZERO, &s, Vec2::new(0.3, -2.0), 0.1).unwrap();
        assert_eq!(tr.len(), 11);
        assert!(tr.states.iter().all(|x| *x == Vec2::new(0.3, -2.0)));
    }

    #[test]
    fn rotation_returns_home() {
        let s = ControlSchedule::constant(0.0, 2.0 * PI).unwrap();
        let tr = integrate_planar(&Mat2::new(0.0, 1.0, -1.0, 0.0), &Mat2::ZERO, &s, Vec2::new(1.0, 0.0), 1e-3).unwrap();
        let (_, x) = tr.last().unwrap();
        assert!((x - Vec2::new(1.0, 0.0)).norm() < 1e-6);
        assert!(tr.states.iter().all(|x| (x.norm() - 1.0).abs() < 1e-9));
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn angular_unit_speed() {
        // P = Q = 0, R = 2 is A = rotation generator, B = 0
        let s = ControlSchedule::constant(0.0, PI).unwrap();
        let tr = integrate_angular(&Mat2::ROTATION, &Mat2::ZERO, &s, 0.25, 1e-3).unwrap();
        assert!((tr.last().unwrap().1 - (0.25 + PI)).abs() < 1e-8);
    }

    #[test]
    fn angular_period_under_complex_eigenvalues() {
        let (a, b) = skew_control();
        let period = 2.0 * PI / 7f64.sqrt();
        let s = ControlSchedule::constant(2.0, period).unwrap();
        let tr = integrate_angular(&a, &b, &s, 0.3, 1e-3).unwrap();
        // R < 0 here, so the angle turns clockwise
        assert!((tr.last().unwrap().1 - 0.3 + PI).abs() < 1e-5);
    }

    #[test]
    fn planar_and_angular_agree() {
        let (a, b) = skew_control();
        let s = ControlSchedule::constant(2.0, 3.0).unwrap();
        let err = consistency_planar_vs_angular(&a, &b, &s, Vec2::new(1.0, 1.0), 1e-3).unwrap();
        assert!(err <= 1e-5, "{err}");
        let d = Mat2::new(1.5, 0.0, 0.0, -0.5);
        let err = consistency_planar_vs_angular(&d, &Mat2::ZERO, &s, Vec2::new(0.0, 2.0), 1e-3).unwrap();
        assert!(err <= 1e-9);
    }

    #[test]
    fn large_steps_are_rejected() {
        let s = ControlSchedule::constant(0.0, 1.0).unwrap();
        let big = Mat2::new(0.0, -50.0, 50.0, 0.0);
        assert!(matches!(
            integrate_planar(&big, &Mat2::ZERO, &s, Vec2::new(1.0, 0.0), 0.5),
            Err(SimError::StepTooLarge { .. })
        ));
        assert!(matches!(
            integrate_planar(&big, &Mat2::ZERO, &s, Vec2::new(1.0, 0.0), 0.0),
            Err(SimError::InvalidStep(_))
        ));
        assert!(matches!(integrate_planar(&big, &Mat2::ZERO, &s, Vec2::new(0.0, 0.0), 0.1), Err(SimError::ZeroState)));
    }

    #[test]
    fn blow_up_truncates() {
        let s = ControlSchedule::constant(0.0, 1e4).unwrap();
        let tr = integrate_planar(&Mat2::scalar(1.0), &Mat2::ZERO, &s, Vec2::new(1.0, 0.0), 1e-2).unwrap();
        assert!(tr.truncated);
        assert!(tr.states.iter().all(|x| x.is_finite()));
        assert!(*tr.times.last().unwrap() < 1e4);
    }

    #[test]
    fn reach_angle_examples() {
        let tol = Tolerance::default();
        let t = reach_angle(&Mat2::ROTATION, &Mat2::ZERO, 0.0, 0.0, FRAC_PI_2, &tol).unwrap();
        assert!((t - FRAC_PI_2).abs() < 1e-14);
        assert!(reach_angle(&Mat2::IDENTITY, &Mat2::ZERO, 0.0, 0.0, 1.0, &tol).is_none());
        let (a, b) = skew_control();
        let period = 2.0 * PI / 7f64.sqrt();
        for i in 0..8 {
            let th1 = -FRAC_PI_2 + PI * i as f64 / 8.0;
            let t = reach_angle(&a, &b, 2.0, 0.4, th1, &tol).unwrap();
            assert!((0.0..period).contains(&t));
            let s = ControlSchedule::constant(2.0, t).unwrap();
            let th = integrate_angular(&a, &b, &s, 0.4, 1e-3).unwrap().last().unwrap().1;
            assert!(projective_distance(th, th1) < 1e-9, "{th} vs {th1}");
        }
    }
}
