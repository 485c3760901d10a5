//! Quadrature path: deficits, derivative identities, and equality scans for
//! smooth origin-symmetric bodies (ellipsoids, harmonically perturbed balls,
//! and rounded zonotopes) in dimensions 2 and 3.
//!
//! Where the atomic path sums over the finitely many normals of a zonotope,
//! this path integrates against curvature densities on spherical quadrature
//! grids and reports refinement-based accuracy estimates.

pub mod body;
pub mod deficit;
pub mod derivative;
pub mod equality;
pub mod harmonics;
pub mod quadrature;
pub mod rounded;

pub use body::{curvature_density, tangent_form, SmoothBody, SmoothFunction, SmoothSupport};
pub use deficit::{smooth_deficit, smooth_surface_area, smooth_volume, SmoothDeficitReport};
pub use derivative::{
    smooth_derivative_check, smooth_normalization_constant, SmoothDerivativeReport,
};
pub use equality::{equality_scan, CandidateReport, EqualityScanReport};
pub use harmonics::Harmonic;
pub use quadrature::QuadratureGrid;
pub use rounded::RoundedZonotope;
