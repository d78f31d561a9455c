//! The sign classification of Δ against direct sampling and minimisation.

mod common;

use std::collections::BTreeSet;

use bilinear_core::delta::*;
use bilinear_core::mat2::Mat2;
use bilinear_core::tolerance::Tolerance;
use common::{elliptic, rand_mat, rotate, system_zoo};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn case_families(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Mat2, Mat2)> {
    let mut out = system_zoo(rng, n, 720);
    for _ in 0..n / 8 {
        let th = rng.gen_range(0.0..3.0);
        let nil = rotate(&Mat2::new(0.0, rng.gen_range(0.5..2.0), 0.0, 0.0), th);
        // α = 0 with det[A,B] typically nonzero
        out.push((rand_mat(rng, 2.0), nil + Mat2::scalar(rng.gen_range(-1.0..1.0))));
        // commuting with an elliptic drift: C2_neg, or C1_neg for scalar B
        let e = elliptic(rng);
        out.push((e, e.scale(rng.gen_range(-2.0..2.0)) + Mat2::scalar(rng.gen_range(-2.0..2.0))));
        out.push((e, Mat2::scalar(rng.gen_range(0.5..2.0))));
        // hyperbolic pairs with det[A,B] > 0
        let h = Mat2::new(rng.gen_range(0.5..2.0), 0.0, 0.0, -rng.gen_range(0.5..2.0));
        let k = Mat2::new(0.0, rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), 0.0);
        out.push((rotate(&k, th), rotate(&h, th)));
    }
    out
}

fn abs_tol(d: &DeltaQuadratic, u: f64) -> f64 {
    1e-9 * d.scale.powi(2) * (1.0 + u * u)
}

#[test]
fn negative_set_matches_sampled_signs() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut seen = BTreeSet::new();
    for (a, b) in case_families(&mut rng, 400) {
        let (d, c) = classify_pair(&a, &b, &tol);
        seen.insert(c.case.label());
        assert_eq!(c.exists_negative, !c.negative_set.is_empty());
        let ends: Vec<f64> = c.negative_set.iter().flat_map(|iv| [iv.lo, iv.hi]).flatten().collect();
        let lo = ends.iter().cloned().fold(-5.0, f64::min) - 2.0;
        let hi = ends.iter().cloned().fold(5.0, f64::max) + 2.0;
        for k in 0..1001 {
            let u = lo + (hi - lo) * k as f64 / 1000.0;
            let v = d.eval(u);
            let inside = c.negative_set.iter().any(|iv| iv.contains(u));
            if inside {
                assert!(v < abs_tol(&d, u), "{:?} u={u} Δ={v}", c.case);
            } else {
                assert!(v > -abs_tol(&d, u), "{:?} u={u} Δ={v}", c.case);
            }
        }
        for e in ends {
            assert!(d.eval(e).abs() <= abs_tol(&d, e), "{:?} endpoint {e}", c.case);
        }
    }
    for label in ["A1", "A2", "B2", "C1_neg", "C1_nonneg", "C2_neg", "C2_pos"] {
        assert!(seen.contains(label), "no sample for {label}: {seen:?}");
    }
}

/// Minimum of Δ over [-R, R]: the vertex when it is a minimum inside,
/// otherwise an endpoint.
fn brute_min(d: &DeltaQuadratic, r: f64) -> (f64, f64) {
    let mut best = (d.eval(-r), -r);
    for u in [r, if d.alpha > 0.0 { -d.beta / (2.0 * d.alpha) } else { r }] {
        if u.abs() <= r && d.eval(u) < best.0 {
            best = (d.eval(u), u);
        }
    }
    best
}

#[test]
fn exists_negative_matches_minimisation() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (a, b) in case_families(&mut rng, 800) {
        let (d, c) = classify_pair(&a, &b, &tol);
        let (m, u) = brute_min(&d, 1e6);
        // rounding in α is amplified by u², so allow a small u² term
        let negative = m < -(1e-9 * d.scale.powi(2) + 1e-15 * (b.max_abs() * u).powi(2));
        assert_eq!(c.exists_negative, negative, "{:?} min {m} at {u}, A={a}, B={b}", c.case);
    }
}

#[test]
fn extremum_is_the_vertex_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let (a, b) = (rand_mat(&mut rng, 3.0), rand_mat(&mut rng, 3.0));
        let d = delta_quadratic(&a, &b);
        let (u, v) = delta_extremum(&d).unwrap();
        assert!((v - d.eval(u)).abs() <= 1e-10 * d.scale.powi(4) * (1.0 + 1.0 / d.alpha.abs()));
    }
    let d = delta_quadratic(&Mat2::IDENTITY, &Mat2::ZERO);
    assert!(delta_extremum(&d).is_none());
}
