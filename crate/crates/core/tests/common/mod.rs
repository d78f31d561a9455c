//! Independent oracles and random system generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use bilinear_core::mat2::{Mat2, Vec2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `exp(M)` by scaling and squaring with a 30-term Taylor series, using
/// only matrix products (no eigen decomposition).
pub fn expm(m: &Mat2) -> Mat2 {
    let norm = m.norm();
    let mut k = 0;
    while norm / 2f64.powi(k) > 0.5 {
        k += 1;
    }
    let s = m.scale(1.0 / 2f64.powi(k));
    let mut term = Mat2::IDENTITY;
    let mut sum = Mat2::IDENTITY;
    for n in 1..30 {
        term = (term * s).scale(1.0 / n as f64);
        sum = sum + term;
    }
    for _ in 0..k {
        sum = sum * sum;
    }
    sum
}

/// Words in `A, B` up to four letters, computed by explicit commutators.
pub fn words_up_to_four(a: &Mat2, b: &Mat2) -> Vec<Mat2> {
    let br = |x: &Mat2, y: &Mat2| *x * *y - *y * *x;
    let ab = br(a, b);
    let aab = br(a, &ab);
    let bab = br(b, &ab);
    vec![*a, *b, ab, aab, bab, br(a, &aab), br(b, &aab), br(a, &bab), br(b, &bab)]
}

/// Rank of `{W x}` over the brackets of length ≤ 4, with a relative cut-off.
pub fn brute_rank(words: &[Mat2], x: Vec2) -> usize {
    let vs: Vec<Vec2> = words.iter().map(|w| w.apply(x)).collect();
    let biggest = vs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if biggest <= 1e-12 {
        return 0;
    }
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            let (p, q) = (vs[i], vs[j]);
            let det = p.x1 * q.x2 - p.x2 * q.x1;
            if det.abs() > 1e-8 * biggest * biggest {
                return 2;
            }
        }
    }
    1
}

/// Rank condition by brute force on `n` equally spaced directions of the
/// projective line.
pub fn brute_larc(a: &Mat2, b: &Mat2, n: usize) -> bool {
    let words = words_up_to_four(a, b);
    (0..n).all(|k| {
        let th = PI * k as f64 / n as f64;
        brute_rank(&words, Vec2::from_angle(th)) == 2
    })
}

pub fn rand_mat(rng: &mut ChaCha8Rng, r: f64) -> Mat2 {
    Mat2::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn rotation(th: f64) -> Mat2 {
    let (s, c) = th.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Conjugate by a rotation: `R M Rᵀ`.
pub fn rotate(m: &Mat2, th: f64) -> Mat2 {
    let r = rotation(th);
    r * *m * r.transpose()
}

/// Random matrix with a complex conjugate eigenvalue pair.
pub fn elliptic(rng: &mut ChaCha8Rng) -> Mat2 {
    let core = Mat2::new(rng.gen_range(-2.0..2.0), -rng.gen_range(0.2..2.0), 0.0, 0.0);
    let core = Mat2::new(core.a11(), core.a12(), -core.a12(), core.a11());
    let mut s = rand_mat(rng, 2.0);
    while s.det().abs() < 0.2 {
        s = rand_mat(rng, 2.0);
    }
    let inv = Mat2::new(s.a22(), -s.a12(), -s.a21(), s.a11()).scale(1.0 / s.det());
    s * core * inv
}

/// Random pairs spread over generic and degenerate families; degenerate
/// members put their invariant direction on the `grid`-point circle so a
/// grid oracle can see it.
pub fn system_zoo(rng: &mut ChaCha8Rng, count: usize, grid: usize) -> Vec<(Mat2, Mat2)> {
    let grid_angle = |rng: &mut ChaCha8Rng| PI * rng.gen_range(0..grid) as f64 / grid as f64;
    (0..count)
        .map(|i| match i % 8 {
            0 | 1 => (rand_mat(rng, 3.0), rand_mat(rng, 3.0)),
            2 => {
                // common eigenvector: both upper triangular, then rotated
                let th = grid_angle(rng);
                let a = Mat2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, rng.gen_range(-2.0..2.0));
                let b = Mat2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, rng.gen_range(-2.0..2.0));
                (rotate(&a, th), rotate(&b, th))
            }
            3 => {
                // commuting pair; real eigenvectors include a grid direction
                let th = grid_angle(rng);
                let t = Mat2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, rng.gen_range(-2.0..2.0));
                let a = if rng.gen_bool(0.5) { rotate(&t, th) } else { elliptic(rng) };
                (a, a.scale(rng.gen_range(-2.0..2.0)) + Mat2::scalar(rng.gen_range(-2.0..2.0)))
            }
            4 => {
                // drift plus a scalar control
                let th = grid_angle(rng);
                let t = Mat2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, rng.gen_range(-2.0..2.0));
                let a = if rng.gen_bool(0.5) { rotate(&t, th) } else { elliptic(rng) };
                (a, Mat2::scalar(rng.gen_range(-2.0..2.0)))
            }
            5 => {
                // both diagonal in a rotated frame
                let th = grid_angle(rng);
                let a = Mat2::new(rng.gen_range(-2.0..2.0), 0.0, 0.0, rng.gen_range(-2.0..2.0));
                let b = Mat2::new(rng.gen_range(-2.0..2.0), 0.0, 0.0, rng.gen_range(-2.0..2.0));
                (rotate(&a, th), rotate(&b, th))
            }
            6 => {
                // span of the identity and a nilpotent
                let th = grid_angle(rng);
                let n = rotate(&Mat2::new(0.0, 1.0, 0.0, 0.0), th);
                let a = Mat2::scalar(rng.gen_range(-2.0..2.0)) + n.scale(rng.gen_range(-2.0..2.0));
                let b = Mat2::scalar(rng.gen_range(-2.0..2.0)) + n.scale(rng.gen_range(-2.0..2.0));
                (a, b)
            }
            _ => {
                // one-dimensional span: B proportional to A, or zero
                let a = if rng.gen_bool(0.5) { elliptic(rng) } else { rand_mat(rng, 2.0) };
                (a, a.scale(rng.gen_range(-1i32..=1) as f64 * rng.gen_range(0.5..2.0)))
            }
        })
        .collect()
}

/// A drift matrix with prescribed angular coefficients `(P, Q, R)`.
pub fn matrix_from_pqr(p: f64, q: f64, r: f64) -> Mat2 {
    Mat2::new(-q / 2.0, (p - r) / 2.0, (p + r) / 2.0, q / 2.0)
}
