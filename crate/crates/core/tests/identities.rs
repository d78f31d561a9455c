//! Algebraic identities between the matrix, pencil and discriminant helpers,
//! checked on random pairs.

use bilinear_core::angular::{delta_of_pqr, pqr};
use bilinear_core::delta::delta_quadratic;
use bilinear_core::larc::{independence_form, indicator};
use bilinear_core::mat2::{adjugate, bracket, char_discriminant, det_pencil, Mat2};
use bilinear_core::spectrum::product_discriminant;
use proptest::prelude::*;

fn mat() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(-10.0f64..10.0).prop_map(Mat2::from_coords)
}

fn traceless() -> impl Strategy<Value = Mat2> {
    (-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y, z)| Mat2::new(x, y, z, -x))
}

fn scale(a: &Mat2, b: &Mat2) -> f64 {
    1.0 + a.max_abs().max(b.max_abs())
}

/// `|lhs - rhs| ≤ 1e-10 · s^degree`, `s` the entry scale of the pair.
fn close(lhs: f64, rhs: f64, s: f64, degree: i32) -> bool {
    (lhs - rhs).abs() <= 1e-10 * s.powi(degree)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adjugate_formula(a in mat()) {
        let m = adjugate(&a);
        let want = Mat2::scalar(a.trace()) - a;
        let s = scale(&a, &a);
        for (x, y) in m.to_coords().iter().zip(want.to_coords()) {
            prop_assert!(close(*x, y, s, 1));
        }
        // the defining property, computed without the formula
        let explicit = Mat2::new(a.a22(), -a.a12(), -a.a21(), a.a11());
        prop_assert_eq!(m, explicit);
    }

    #[test]
    fn adjugate_trace_identity(a in mat(), b in mat()) {
        let s = scale(&a, &b);
        let lhs = (adjugate(&a) * b).trace();
        let rhs = a.trace() * b.trace() - (a * b).trace();
        prop_assert!(close(lhs, rhs, s, 2));
    }

    #[test]
    fn pencil_determinant(a in mat(), b in mat(), r in -10.0f64..10.0) {
        let s = scale(&a, &b) * (1.0 + r.abs());
        prop_assert!(close(det_pencil(&a, &b, r), (a + b.scale(r)).det(), s, 2));
    }

    #[test]
    fn discriminant_of_delta(a in mat(), b in mat()) {
        let d = delta_quadratic(&a, &b);
        let s = scale(&a, &b);
        prop_assert!(close(d.discriminant(), -16.0 * bracket(&a, &b).det(), s, 4));
    }

    #[test]
    fn delta_three_ways(a in mat(), b in mat(), u in -10.0f64..10.0) {
        let s = scale(&a, &b) * (1.0 + u.abs());
        let d = delta_quadratic(&a, &b);
        let via_pqr = delta_of_pqr(&pqr(&a, &b, u));
        let via_char = char_discriminant(&(a + b.scale(u)));
        let via_quad = d.eval(u);
        prop_assert!(close(via_pqr, via_char, s, 2));
        prop_assert!(close(via_pqr, via_quad, s, 2));
        prop_assert!(close(via_char, via_quad, s, 2));
    }

    #[test]
    fn bracket_is_adjugate_orthogonal(a in mat(), b in mat()) {
        let c = bracket(&a, &b);
        let s = scale(&a, &b);
        prop_assert!(close(c.trace(), 0.0, s, 2));
        prop_assert!(close((adjugate(&a) * c).trace(), 0.0, s, 3));
    }

    #[test]
    fn beta_zero_conditions_agree(a in mat(), b in mat()) {
        // β/2 = 2tr(AB) - tr(A)tr(B) = tr(AB) - tr(adj(A)B)
        let s = scale(&a, &b);
        let d = delta_quadratic(&a, &b);
        let t1 = 2.0 * (a * b).trace() - a.trace() * b.trace();
        let t2 = (a * b).trace() - (adjugate(&a) * b).trace();
        prop_assert!(close(d.beta / 2.0, t1, s, 2));
        prop_assert!(close(t1, t2, s, 2));
    }

    #[test]
    fn elliptic_control_forces_nonpositive_bracket(a in mat(), b in mat()) {
        // Δ is Lorentzian in the traceless part, so α < 0 gives β² ≥ 4αγ
        let d = delta_quadratic(&a, &b);
        let s = scale(&a, &b);
        if d.alpha < 0.0 {
            prop_assert!(d.det_bracket <= 1e-10 * s.powi(4));
        }
    }

    #[test]
    fn traceless_product_discriminant_is_indicator(a in mat(), b in traceless()) {
        let s = scale(&a, &b);
        prop_assert!(close(product_discriminant(&a, &b), indicator(&a, &b), s, 4));
    }

    #[test]
    fn indicator_is_form_discriminant(a in mat(), b in mat()) {
        let s = scale(&a, &b);
        prop_assert!(close(independence_form(&a, &b).discriminant(), indicator(&a, &b), s, 4));
    }
}
