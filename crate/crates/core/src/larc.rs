//! Lie algebra rank condition on the punctured plane.
//!
//! The decision never relies on the certificate search: a nonzero pairwise
//! form `x ↦ det(Mᵢx | Mⱼx)` vanishes on at most two projective directions,
//! so checking the rank at those directions is enough to decide the rank
//! everywhere. The certificate (a pair with negative indicator) is searched
//! afterwards and reported separately.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::mat2::{adjugate, bracket, det_columns, Mat2, Vec2};
use crate::tolerance::Tolerance;

pub const DEFAULT_SEED: u64 = 0x5eed_1a7c;
pub const DEFAULT_RANDOM_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LarcError {
    #[error("the rank is only defined away from the origin")]
    ZeroState,
    #[error("state has non-finite coordinates")]
    NonFiniteState,
}

/// Homogeneous quadratic `c0 x1² + c1 x1 x2 + c2 x2²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl QuadraticForm {
    pub fn eval(&self, x: Vec2) -> f64 {
        self.c0 * x.x1 * x.x1 + self.c1 * x.x1 * x.x2 + self.c2 * x.x2 * x.x2
    }

    /// `c1² - 4 c0 c2`; negative iff the form is sign-definite.
    pub fn discriminant(&self) -> f64 {
        self.c1 * self.c1 - 4.0 * self.c0 * self.c2
    }

    pub fn max_abs(&self) -> f64 {
        self.c0.abs().max(self.c1.abs()).max(self.c2.abs())
    }

    pub fn is_identically_zero(&self, threshold: f64) -> bool {
        self.max_abs() <= threshold
    }

    /// Sign-definite beyond what a perturbation of `threshold` in each
    /// coefficient could undo.
    pub fn is_definite(&self, threshold: f64) -> bool {
        self.discriminant() < -4.0 * threshold * self.max_abs().max(threshold)
    }

    /// Real projective roots as unit vectors with first nonzero coordinate
    /// positive. `threshold` is the zero tolerance on the coefficients; a
    /// form that is not [`QuadraticForm::is_definite`] has at least a
    /// double root.
    pub fn projective_roots(&self, threshold: f64) -> Vec<Vec2> {
        let mut roots = Vec::with_capacity(2);
        if self.c0.abs() <= threshold {
            roots.push(Vec2::new(1.0, 0.0));
            let other = Vec2::new(self.c2, -self.c1);
            if other.norm() > 0.0 {
                roots.push(other.projective_normalize());
            }
        } else {
            let disc = self.discriminant();
            if !self.is_definite(threshold) {
                let sq = disc.max(0.0).sqrt();
                // x1/x2 roots of c0 r² + c1 r + c2
                let q = -0.5 * (self.c1 + if self.c1 >= 0.0 { sq } else { -sq });
                let r1 = q / self.c0;
                let r2 = if q != 0.0 { self.c2 / q } else { r1 };
                roots.push(Vec2::new(r1, 1.0).projective_normalize());
                roots.push(Vec2::new(r2, 1.0).projective_normalize());
                if disc <= 4.0 * threshold * self.max_abs() {
                    // a double root up to tolerance; the vertex is exact for it
                    roots.push(Vec2::new(-self.c1 / (2.0 * self.c0), 1.0).projective_normalize());
                }
            }
        }
        roots.dedup_by(|a, b| (a.x1 - b.x1).abs() < 1e-15 && (a.x2 - b.x2).abs() < 1e-15);
        roots
    }
}

/// Coefficients of `x ↦ det(Ax | Bx)`.
pub fn independence_form(a: &Mat2, b: &Mat2) -> QuadraticForm {
    let (a1, a2, b1, b2) = (a.col1(), a.col2(), b.col1(), b.col2());
    QuadraticForm { c0: det_columns(a1, b1), c1: det_columns(a1, b2) + det_columns(a2, b1), c2: det_columns(a2, b2) }
}

/// `tr²(adj(A)B) - 4 det(adj(A)B)`. Strictly negative iff `Ax` and `Bx`
/// are independent at every `x ≠ 0`.
pub fn indicator(a: &Mat2, b: &Mat2) -> f64 {
    let m = adjugate(a) * *b;
    let t = m.trace();
    t * t - 4.0 * m.det()
}

/// A bracket expression in the drift `A` and the control matrix `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    Drift,
    Control,
    Bracket(Box<Word>, Box<Word>),
}

impl Word {
    pub fn bracket(left: Word, right: Word) -> Word {
        Word::Bracket(Box::new(left), Box::new(right))
    }

    /// Number of letters; also the homogeneity degree of the evaluated matrix.
    pub fn len(&self) -> usize {
        match self {
            Word::Drift | Word::Control => 1,
            Word::Bracket(l, r) => l.len() + r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn evaluate(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        match self {
            Word::Drift => *a,
            Word::Control => *b,
            Word::Bracket(l, r) => bracket(&l.evaluate(a, b), &r.evaluate(a, b)),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Drift => f.write_str("A"),
            Word::Control => f.write_str("B"),
            Word::Bracket(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("malformed bracket word {0:?}")]
pub struct ParseWordError(String);

impl FromStr for Word {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn parse(chars: &[u8], pos: &mut usize) -> Option<Word> {
            match chars.get(*pos)? {
                b'A' => {
                    *pos += 1;
                    Some(Word::Drift)
                }
                b'B' => {
                    *pos += 1;
                    Some(Word::Control)
                }
                b'[' => {
                    *pos += 1;
                    let l = parse(chars, pos)?;
                    if chars.get(*pos)? != &b',' {
                        return None;
                    }
                    *pos += 1;
                    let r = parse(chars, pos)?;
                    if chars.get(*pos)? != &b']' {
                        return None;
                    }
                    *pos += 1;
                    Some(Word::bracket(l, r))
                }
                _ => None,
            }
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bytes = compact.as_bytes();
        let mut pos = 0;
        match parse(bytes, &mut pos) {
            Some(w) if pos == bytes.len() => Ok(w),
            _ => Err(ParseWordError(s.to_string())),
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An independent spanning set of the system Lie algebra, each element
/// tagged with the bracket word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraBasis {
    generators: Vec<Mat2>,
    words: Vec<Word>,
    // Gram-Schmidt image of `generators` in coefficient space
    orthonormal: Vec<[f64; 4]>,
}

impl LieAlgebraBasis {
    fn empty() -> Self {
        Self { generators: Vec::new(), words: Vec::new(), orthonormal: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Component of `m` orthogonal to the span, in coefficient space.
    pub fn residual(&self, m: &Mat2) -> [f64; 4] {
        let mut v = m.to_coords();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &self.orthonormal {
                let p = dot4(q, &v);
                for k in 0..4 {
                    v[k] -= p * q[k];
                }
            }
        }
        v
    }

    /// Least-squares coordinates of `m` in the generators.
    pub fn coordinates(&self, m: &Mat2) -> Vec<f64> {
        let n = self.dim();
        let g: Vec<[f64; 4]> = self.generators.iter().map(Mat2::to_coords).collect();
        let target = m.to_coords();
        let mut gram = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = dot4(&g[i], &g[j]);
            }
            gram[i][n] = dot4(&g[i], &target);
        }
        solve_augmented(gram)
    }

    pub fn combine(&self, coords: &[f64]) -> Mat2 {
        self.generators.iter().zip(coords).fold(Mat2::ZERO, |acc, (g, c)| acc + g.scale(*c))
    }

    fn try_push(&mut self, m: Mat2, word: Word, threshold: f64) -> bool {
        if self.dim() == 4 || !m.is_finite() {
            return false;
        }
        let r = self.residual(&m);
        let norm = dot4(&r, &r).sqrt();
        if norm <= threshold {
            return false;
        }
        self.orthonormal.push(r.map(|v| v / norm));
        self.generators.push(m);
        self.words.push(word);
        true
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting on an `n × (n+1)` system.
fn solve_augmented(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap_or(col);
        m.swap(col, piv);
        let p = m[col][col];
        if p == 0.0 {
            continue;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col] / p;
                let pivot_row = m[col].clone();
                for (x, y) in m[row][col..=n].iter_mut().zip(&pivot_row[col..=n]) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..n).map(|i| if m[i][i] != 0.0 { m[i][n] / m[i][i] } else { 0.0 }).collect()
}

/// Breadth-first bracket closure of `{A, B}`.
pub fn generate_lie_algebra(a: &Mat2, b: &Mat2, tol: &Tolerance) -> LieAlgebraBasis {
    let scale = Tolerance::scale_of(a, b);
    let mut basis = LieAlgebraBasis::empty();
    basis.try_push(*a, Word::Drift, tol.threshold(scale, 1));
    basis.try_push(*b, Word::Control, tol.threshold(scale, 1));

    // pairs (i, j) with i < j still to be bracketed
    let mut next_j = 1;
    while next_j < basis.dim() && basis.dim() < 4 {
        for i in 0..next_j {
            let m = bracket(&basis.generators[i], &basis.generators[next_j]);
            let word = Word::bracket(basis.words[i].clone(), basis.words[next_j].clone());
            let degree = word.len() as i32;
            basis.try_push(m, word, tol.threshold(scale, degree));
        }
        next_j += 1;
    }
    basis
}

fn generator_scale(m: &Mat2) -> f64 {
    1.0 + m.max_abs()
}

/// Rank of `span{Mᵢ x}` over the basis generators, in {0, 1, 2}.
pub fn rank_at(basis: &LieAlgebraBasis, x: Vec2, tol: &Tolerance) -> Result<usize, LarcError> {
    if !x.is_finite() {
        return Err(LarcError::NonFiniteState);
    }
    if x.is_zero() {
        return Err(LarcError::ZeroState);
    }
    let n2 = x.dot(x);
    let images: Vec<Vec2> = basis.generators.iter().map(|m| m.apply(x)).collect();
    let scales: Vec<f64> = basis.generators.iter().map(generator_scale).collect();
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            let d = det_columns(images[i], images[j]);
            if d.abs() > tol.eps * scales[i] * scales[j] * n2 {
                return Ok(2);
            }
        }
    }
    let nonzero = images.iter().zip(&scales).any(|(w, s)| w.norm() > tol.eps * s * n2.sqrt());
    Ok(usize::from(nonzero))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateSource {
    /// Two elements of the computed basis.
    BasisPair { first: Word, second: Word },
    /// `(A, [A,B])` from `det(A) det[A,B] > 0`.
    DriftShortcut,
    /// `(B, [A,B])` from `det(B) det[A,B] > 0`.
    ControlShortcut,
    /// Random linear combination of basis elements, found on the given trial.
    RandomCombination { trial: usize },
}

/// A pair `(Ã, B̃)` in the Lie algebra with negative indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub first: Mat2,
    pub second: Mat2,
    pub indicator: f64,
    pub source: CertificateSource,
    /// Coordinates of `first` and `second` in the basis generators.
    pub first_coords: Vec<f64>,
    pub second_coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarcVerdict {
    pub holds: bool,
    pub certificate: Option<Certificate>,
    pub failure_point: Option<Vec2>,
    pub certificate_found: bool,
    pub basis_dim: usize,
    pub basis_words: Vec<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LarcOptions {
    pub tolerance: Tolerance,
    pub seed: u64,
    pub random_budget: usize,
}

impl Default for LarcOptions {
    fn default() -> Self {
        Self { tolerance: Tolerance::default(), seed: DEFAULT_SEED, random_budget: DEFAULT_RANDOM_BUDGET }
    }
}

/// The two cheap sufficient conditions for the rank condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortcutConditions {
    /// `indicator(A, B)`; sufficient when negative.
    pub indicator_ab: f64,
    /// `det(A) det[A,B]`; sufficient when positive.
    pub det_a_det_bracket: f64,
    /// `det(B) det[A,B]`; sufficient when positive.
    pub det_b_det_bracket: f64,
    pub indicator_negative: bool,
    pub drift_shortcut: bool,
    pub control_shortcut: bool,
}

pub fn shortcut_conditions(a: &Mat2, b: &Mat2, tol: &Tolerance) -> ShortcutConditions {
    let scale = Tolerance::scale_of(a, b);
    let c = bracket(a, b).det();
    let ind = indicator(a, b);
    let da = a.det() * c;
    let db = b.det() * c;
    ShortcutConditions {
        indicator_ab: ind,
        det_a_det_bracket: da,
        det_b_det_bracket: db,
        indicator_negative: ind < -tol.threshold(scale, 4),
        drift_shortcut: da > tol.threshold(scale, 6),
        control_shortcut: db > tol.threshold(scale, 6),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalIndicator {
    pub first: Word,
    pub second: Word,
    pub value: f64,
}

/// Indicators of the pairs among `A, B, [A,B], [A,[A,B]], [B,[A,B]]` in the
/// order they are conventionally listed: `(A,B)` first, then each of
/// `[A,B]`, `[A,[A,B]]`, `[B,[A,B]]` against `A` and `B`, then `[A,B]`
/// against the two depth-two words.
pub fn canonical_indicators(a: &Mat2, b: &Mat2) -> Vec<CanonicalIndicator> {
    let ab = Word::bracket(Word::Drift, Word::Control);
    let aab = Word::bracket(Word::Drift, ab.clone());
    let bab = Word::bracket(Word::Control, ab.clone());
    let pairs = [
        (Word::Drift, Word::Control),
        (Word::Drift, ab.clone()),
        (Word::Control, ab.clone()),
        (Word::Drift, aab.clone()),
        (Word::Control, aab.clone()),
        (Word::Drift, bab.clone()),
        (Word::Control, bab.clone()),
        (ab.clone(), aab),
        (ab, bab),
    ];
    pairs
        .into_iter()
        .map(|(first, second)| {
            let value = indicator(&first.evaluate(a, b), &second.evaluate(a, b));
            CanonicalIndicator { first, second, value }
        })
        .collect()
}

pub fn decide_larc(a: &Mat2, b: &Mat2) -> LarcVerdict {
    decide_larc_with(a, b, &LarcOptions::default())
}

pub fn decide_larc_with(a: &Mat2, b: &Mat2, opts: &LarcOptions) -> LarcVerdict {
    let tol = &opts.tolerance;
    let basis = generate_lie_algebra(a, b, tol);
    let fail = |x: Vec2| LarcVerdict {
        holds: false,
        certificate: None,
        failure_point: Some(x),
        certificate_found: false,
        basis_dim: basis.dim(),
        basis_words: basis.words().to_vec(),
    };

    if basis.dim() <= 1 {
        let x = basis.generators.first().map_or(Vec2::new(1.0, 0.0), kernel_direction);
        return fail(x);
    }

    // all pairwise forms; any definite one is already a certificate, and
    // otherwise every rank-deficient direction is a common root of all of them
    let mut forms: Vec<(QuadraticForm, f64)> = Vec::new();
    let gens = basis.generators();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let q = independence_form(&gens[i], &gens[j]);
            let s = generator_scale(&gens[i]) * generator_scale(&gens[j]);
            let threshold = tol.eps * s;
            if q.is_identically_zero(threshold) {
                continue;
            }
            if q.is_definite(threshold) {
                let cert = basis_pair_certificate(&basis, i, j);
                return LarcVerdict {
                    holds: true,
                    certificate: Some(cert),
                    failure_point: None,
                    certificate_found: true,
                    basis_dim: basis.dim(),
                    basis_words: basis.words().to_vec(),
                };
            }
            forms.push((q, threshold));
        }
    }

    if forms.is_empty() {
        return fail(Vec2::new(1.0, 0.0));
    }

    // simple roots are located to full precision, near-double ones only to
    // about the square root of it, so try well-separated forms first
    forms.sort_by(|(p, tp), (q, tq)| {
        let sep = |f: &QuadraticForm, t: f64| f.discriminant() / (t * f.max_abs().max(t));
        sep(q, *tq).total_cmp(&sep(p, *tp))
    });
    for (form, threshold) in &forms {
        for root in form.projective_roots(*threshold) {
            let rank = rank_at(&basis, root, tol).unwrap_or(0);
            if rank <= 1 {
                return fail(root);
            }
        }
    }

    let certificate = search_certificate(a, b, &basis, opts);
    LarcVerdict {
        holds: true,
        certificate_found: certificate.is_some(),
        certificate,
        failure_point: None,
        basis_dim: basis.dim(),
        basis_words: basis.words().to_vec(),
    }
}

fn kernel_direction(m: &Mat2) -> Vec2 {
    // rows of m are orthogonal to its kernel
    let r1 = Vec2::new(-m.a12(), m.a11());
    let r2 = Vec2::new(-m.a22(), m.a21());
    let v = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if v.norm() == 0.0 {
        Vec2::new(1.0, 0.0)
    } else {
        v.projective_normalize()
    }
}

fn basis_pair_certificate(basis: &LieAlgebraBasis, i: usize, j: usize) -> Certificate {
    let n = basis.dim();
    let unit = |k: usize| (0..n).map(|l| if l == k { 1.0 } else { 0.0 }).collect::<Vec<_>>();
    let (first, second) = (basis.generators[i], basis.generators[j]);
    Certificate {
        first,
        second,
        indicator: indicator(&first, &second),
        source: CertificateSource::BasisPair { first: basis.words[i].clone(), second: basis.words[j].clone() },
        first_coords: unit(i),
        second_coords: unit(j),
    }
}

fn search_certificate(a: &Mat2, b: &Mat2, basis: &LieAlgebraBasis, opts: &LarcOptions) -> Option<Certificate> {
    let tol = &opts.tolerance;
    let negative = |x: &Mat2, y: &Mat2| {
        let s = generator_scale(x) * generator_scale(y);
        let v = indicator(x, y);
        (v < -tol.eps * s * s).then_some(v)
    };

    let gens = basis.generators();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if negative(&gens[i], &gens[j]).is_some() {
                return Some(basis_pair_certificate(basis, i, j));
            }
        }
    }

    let ab = bracket(a, b);
    for (m, source) in [(*a, CertificateSource::DriftShortcut), (*b, CertificateSource::ControlShortcut)] {
        if let Some(v) = negative(&m, &ab) {
            return Some(Certificate {
                first: m,
                second: ab,
                indicator: v,
                source,
                first_coords: basis.coordinates(&m),
                second_coords: basis.coordinates(&ab),
            });
        }
    }

    // normalized generators so that no element dominates the combinations
    let norms: Vec<f64> = gens.iter().map(|g| g.norm()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for trial in 0..opts.random_budget {
        let mut draw = || -> Vec<f64> { norms.iter().map(|n| rng.gen_range(-1.0..1.0) / n).collect() };
        let (c1, c2) = (draw(), draw());
        let (m1, m2) = (basis.combine(&c1), basis.combine(&c2));
        if let Some(v) = negative(&m1, &m2) {
            return Some(Certificate {
                first: m1,
                second: m2,
                indicator: v,
                source: CertificateSource::RandomCombination { trial },
                first_coords: c1,
                second_coords: c2,
            });
        }
    }
    None
}
