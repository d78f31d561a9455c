//! Everything the analysis pipeline computes for one system, in one value.

use serde::{Deserialize, Serialize};

use crate::angular::{
    classification_margin, classify_case, pqr, projective_controllable, AngularCase, AngularTag, ProjectiveVerdict,
};
use crate::delta::{classify_pair, delta_extremum, DeltaClassification, DeltaQuadratic};
use crate::larc::{
    canonical_indicators, decide_larc_with, shortcut_conditions, CanonicalIndicator, LarcOptions, LarcVerdict,
    ShortcutConditions,
};
use crate::spectrum::{spectrum_summary, verdict_from_parts, ControllabilityVerdict, SpectrumOptions, SpectrumSummary};
use crate::system::SystemDescription;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarcSection {
    pub verdict: LarcVerdict,
    pub shortcuts: ShortcutConditions,
    pub canonical_indicators: Vec<CanonicalIndicator>,
}

/// Angular regime at one control value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSample {
    pub u: f64,
    pub tag: AngularTag,
    pub case: AngularCase,
    pub margin: f64,
}

impl CaseSample {
    pub fn at(system: &SystemDescription, u: f64, tol: &Tolerance) -> Self {
        let c = pqr(&system.a, &system.b, u);
        let case = classify_case(&c, tol);
        Self { u, tag: case.tag(), case, margin: classification_margin(&c, tol) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSection {
    pub projective: ProjectiveVerdict,
    pub at_zero: CaseSample,
    pub at_witness: Option<CaseSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSection {
    pub quadratic: DeltaQuadratic,
    pub classification: DeltaClassification,
    /// Vertex `(u*, Δ(u*))` when `α ≠ 0`.
    pub extremum: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub system: SystemDescription,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub larc: LarcSection,
    pub angular: AngularSection,
    pub delta: DeltaSection,
    pub spectrum: SpectrumSummary,
    pub verdict: ControllabilityVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalyzeOptions {
    pub larc: LarcOptions,
    pub spectrum: SpectrumOptions,
}

pub fn analyze(system: &SystemDescription, opts: &AnalyzeOptions) -> AnalysisReport {
    let (a, b) = (&system.a, &system.b);
    let tol = opts.larc.tolerance;

    let larc = LarcSection {
        verdict: decide_larc_with(a, b, &opts.larc),
        shortcuts: shortcut_conditions(a, b, &tol),
        canonical_indicators: canonical_indicators(a, b),
    };
    let projective = projective_controllable(a, b, &system.control_set, &tol);
    let angular = AngularSection {
        at_zero: CaseSample::at(system, 0.0, &tol),
        at_witness: projective.witness.map(|u| CaseSample::at(system, u, &tol)),
        projective,
    };
    let (quadratic, classification) = classify_pair(a, b, &tol);
    let delta = DeltaSection { extremum: delta_extremum(&quadratic), quadratic, classification };
    let spectrum = spectrum_summary(a, b, &system.control_set, angular.projective.controllable, &opts.spectrum, &tol);
    let verdict = verdict_from_parts(&larc.verdict, &angular.projective, &spectrum, &system.control_set);

    AnalysisReport {
        system: system.clone(),
        tolerance: tol,
        seed: opts.larc.seed,
        larc,
        angular,
        delta,
        spectrum,
        verdict,
    }
}
