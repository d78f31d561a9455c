//! Controllability analysis for planar bilinear systems `ẋ = (A + uB)x`.
//!
//! The pipeline is: decide the Lie algebra rank condition ([`larc`]),
//! check that the induced flow on the projective line is controllable
//! ([`angular`], [`delta`]), then test whether `0` is interior to the set
//! of real parts of the eigenvalues of `A + uB` ([`spectrum`]).
//! [`report::analyze`] runs all of it; [`sim`] integrates trajectories for
//! numeric cross-checks.
//!
//! ```
//! use bilinear_core::{analyze, AnalyzeOptions, ControlSet, Mat2, SystemDescription, VerdictStatus};
//!
//! let sys = SystemDescription::new(Mat2::ROTATION, Mat2::IDENTITY, ControlSet::Reals);
//! let report = analyze(&sys, &AnalyzeOptions::default());
//! assert_eq!(report.verdict.status, VerdictStatus::Controllable);
//! ```

pub mod angular;
pub mod delta;
pub mod larc;
pub mod mat2;
pub mod report;
pub mod sim;
pub mod spectrum;
pub mod system;
pub mod tolerance;

pub use angular::{AngularCase, AngularTag, PqrCoefficients, ProjectivePoint, ProjectiveVerdict};
pub use delta::{DeltaCase, DeltaClassification, DeltaQuadratic, OpenInterval};
pub use larc::{decide_larc, indicator, LarcOptions, LarcVerdict, Word};
pub use mat2::{Mat2, Vec2};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};
pub use sim::{ControlSchedule, Segment, Trajectory};
pub use spectrum::{controllability_verdict, ControllabilityVerdict, SpectrumOptions, VerdictStatus};
pub use system::{ControlSet, SystemDescription};
pub use tolerance::Tolerance;
