//! The rank-condition decision against a brute-force evaluation of
//! brackets on a grid of directions.

mod common;

use bilinear_core::larc::{decide_larc, generate_lie_algebra, indicator, rank_at};
use bilinear_core::tolerance::Tolerance;
use common::{brute_larc, system_zoo};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn decision_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let zoo = system_zoo(&mut rng, 400, 720);
    let mut fails = 0;
    for (a, b) in &zoo {
        let v = decide_larc(a, b);
        assert_eq!(v.holds, brute_larc(a, b, 720), "A = {a}, B = {b}");
        fails += usize::from(!v.holds);
    }
    // the zoo must exercise both outcomes
    assert!(fails > 50 && fails < 350, "{fails} failures");
}

#[test]
fn verdicts_carry_consistent_evidence() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (a, b) in system_zoo(&mut rng, 200, 720) {
        let v = decide_larc(&a, &b);
        if v.holds {
            assert!(v.failure_point.is_none());
            if let Some(c) = &v.certificate {
                assert!(c.indicator < 0.0);
                assert_eq!(c.indicator, indicator(&c.first, &c.second));
                let basis = generate_lie_algebra(&a, &b, &tol);
                for m in [c.first, c.second] {
                    let res = basis.residual(&m);
                    assert!(res.iter().all(|r| r.abs() < 1e-8 * (1.0 + m.max_abs())));
                }
            }
        } else {
            assert!(v.certificate.is_none());
            let x = v.failure_point.expect("failing verdict names a point");
            let basis = generate_lie_algebra(&a, &b, &tol);
            assert!(rank_at(&basis, x, &tol).unwrap() <= 1);
        }
    }
}
