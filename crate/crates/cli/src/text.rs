//! Human-readable rendering of an analysis report (6 decimals).

use std::fmt::Write;

use bilinear_core::delta::OpenInterval;
use bilinear_core::larc::CertificateSource;
use bilinear_core::mat2::Mat2;
use bilinear_core::report::{AnalysisReport, CaseSample};
use bilinear_core::spectrum::InteriorTest;
use bilinear_core::system::ControlSet;

fn n(x: f64) -> String {
    format!("{x:.6}")
}

fn mat(m: &Mat2) -> String {
    let [[a, b], [c, d]] = m.rows();
    format!("[[{}, {}], [{}, {}]]", n(a), n(b), n(c), n(d))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn interval(iv: &OpenInterval) -> String {
    let lo = iv.lo.map_or("-inf".to_string(), n);
    let hi = iv.hi.map_or("+inf".to_string(), n);
    format!("({lo}, {hi})")
}

fn intervals(ivs: &[OpenInterval]) -> String {
    if ivs.is_empty() {
        return "empty".to_string();
    }
    ivs.iter().map(interval).collect::<Vec<_>>().join(" ∪ ")
}

fn case_line(c: &CaseSample) -> String {
    format!("{} at u = {} (margin {:.3e})", c.tag.as_str(), n(c.u), c.margin)
}

pub fn render(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let sys = &r.system;
    if let Some(label) = &sys.label {
        let _ = writeln!(s, "system: {label}");
    }
    let u = match sys.control_set {
        ControlSet::Reals => "reals".to_string(),
        ControlSet::Interval { lo, hi } => format!("[{}, {}]", n(lo), n(hi)),
    };
    let _ = writeln!(s, "A = {}\nB = {}\nU = {u}", mat(&sys.a), mat(&sys.b));
    let _ = writeln!(s);

    let _ = writeln!(s, "verdict: {}", r.verdict.status.as_str());
    for reason in &r.verdict.reasons {
        let mark = if reason.holds { "+" } else { "-" };
        let _ = writeln!(s, "  {mark} {}: {}", reason.condition.as_str(), reason.evidence);
    }
    let _ = writeln!(s);

    let larc = &r.larc;
    let v = &larc.verdict;
    let words: Vec<String> = v.basis_words.iter().map(|w| w.to_string()).collect();
    let _ = writeln!(s, "rank condition: {}", if v.holds { "holds" } else { "fails" });
    let _ = writeln!(s, "  Lie algebra basis: {} (dimension {})", words.join(", "), v.basis_dim);
    if let Some(c) = &v.certificate {
        let source = match &c.source {
            CertificateSource::BasisPair { first, second } => format!("basis pair ({first}, {second})"),
            CertificateSource::DriftShortcut => "(A, [A,B])".to_string(),
            CertificateSource::ControlShortcut => "(B, [A,B])".to_string(),
            CertificateSource::RandomCombination { trial } => format!("random combination, trial {trial}"),
        };
        let _ = writeln!(s, "  certificate: {source}, indicator {}", n(c.indicator));
    } else if v.holds {
        let _ = writeln!(s, "  certificate: none found (rank verified at every candidate direction)");
    }
    if let Some(x) = v.failure_point {
        let _ = writeln!(s, "  rank ≤ 1 at x = ({}, {})", n(x.x1), n(x.x2));
    }
    let sc = &larc.shortcuts;
    let _ =
        writeln!(s, "  indicator(A, B) = {} (sufficient if < 0: {})", n(sc.indicator_ab), yes(sc.indicator_negative));
    let _ =
        writeln!(s, "  det(A) det[A,B] = {} (sufficient if > 0: {})", n(sc.det_a_det_bracket), yes(sc.drift_shortcut));
    let _ = writeln!(
        s,
        "  det(B) det[A,B] = {} (sufficient if > 0: {})",
        n(sc.det_b_det_bracket),
        yes(sc.control_shortcut)
    );
    let _ = writeln!(s, "  indicators of bracket pairs:");
    for ci in &larc.canonical_indicators {
        let _ = writeln!(s, "    ({}, {}) {}", ci.first, ci.second, n(ci.value));
    }
    let _ = writeln!(s);

    let ang = &r.angular;
    let _ = writeln!(
        s,
        "projective line: {}",
        if ang.projective.controllable { "controllable" } else { "not controllable" }
    );
    if let Some(w) = ang.projective.witness {
        let _ = writeln!(s, "  witness u = {}", n(w));
    }
    let _ = writeln!(s, "  admissible u with Δ(u) < 0: {}", intervals(&ang.projective.feasible_set));
    let _ = writeln!(s, "  regime {}", case_line(&ang.at_zero));
    if let Some(c) = &ang.at_witness {
        let _ = writeln!(s, "  regime {}", case_line(c));
    }
    let _ = writeln!(s);

    let d = &r.delta;
    let q = &d.quadratic;
    let _ = writeln!(s, "Δ(u) = αu² + βu + γ: α = {}, β = {}, γ = {}", n(q.alpha), n(q.beta), n(q.gamma));
    let _ = writeln!(s, "  det[A,B] = {}", n(q.det_bracket));
    let _ = writeln!(s, "  case {} (margin {:.3e})", d.classification.case.label(), d.classification.margin);
    let _ = writeln!(s, "  Δ(u) < 0 on: {}", intervals(&d.classification.negative_set));
    if let Some((u, val)) = d.extremum {
        let kind = if q.alpha < 0.0 { "maximum" } else { "minimum" };
        let _ = writeln!(s, "  {kind} {} at u = {}", n(val), n(u));
    }
    let _ = writeln!(s);

    let sp = &r.spectrum;
    let _ = writeln!(s, "real parts of eigenvalues");
    let _ = writeln!(s, "  tr(B) = {}", n(sp.trace_b));
    let ranges: Vec<String> = sp.re_range.iter().map(|iv| format!("[{}, {}]", n(iv.lo), n(iv.hi))).collect();
    let _ = writeln!(s, "  Re λ ∈ {} (u sampled in [{}, {}])", ranges.join(" ∪ "), n(sp.u_window.0), n(sp.u_window.1));
    let zi = &sp.zero_in_interior;
    let how = match zi.test {
        InteriorTest::None => "projective line not controllable".to_string(),
        InteriorTest::NonzeroTrace => "tr(B) ≠ 0".to_string(),
        InteriorTest::TracelessProduct => {
            format!("tr(B) = 0, tr²(AB) - 4det(AB) = {}", n(zi.product_discriminant.unwrap_or(f64::NAN)))
        }
    };
    let _ = writeln!(s, "  0 in interior: {} ({how})", yes(zi.holds));
    let _ = writeln!(s);
    let _ = writeln!(s, "tolerance eps = {:e}, seed = {}", r.tolerance.eps, r.seed);
    s
}
