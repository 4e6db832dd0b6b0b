//! Nilpotent τ-functions as Wronskians of complete homogeneous polynomials, with exact
//! degree bookkeeping, Hirota checks and Sturm real-root counting.

pub mod experiment;
pub mod poly;
pub mod tau;
pub mod univariate;

pub use experiment::{real_root_count_experiment, RealRootReport};
pub use poly::{det, Poly};
pub use tau::{h_k, hirota_residual, minimal_degree, minimal_degrees, nu_check, schur_wronskian, tangent_cone, tau_functions, TangentCone, TauSystem, Vars};
pub use univariate::{sturm_real_roots, UnivariateExact};
