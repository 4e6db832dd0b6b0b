//! Floating-point checks: type-A τ-functions as leading principal minors of `exp(Σ t_k L₀^k)`,
//! zero-crossing counts, and direct integration of the Toda equations with blow-up detection.

pub mod lax;
pub mod ode;

pub use lax::{
    count_zero_crossings, signs_vs_eta_report, CrossingReport, ExpMethod, LaxMatrixA, SignsVsEta, Spectrum,
    TauEvaluator,
};
pub use ode::{ode_integrate, BlowupEvent, OdeControls, Trajectory, DRIFT_BOUND};
