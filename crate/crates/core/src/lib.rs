//! Mixed volumes, mixed area measures, and local log-concavity deficits for
//! origin-symmetric convex bodies.
//!
//! The crate has two computational backends sharing one set of identities:
//!
//! * an exact combinatorial engine for **zonotopes** (Minkowski sums of
//!   centred segments), where volumes, mixed volumes, and mixed area
//!   measures reduce to finite determinant sums, optionally evaluated in
//!   exact rational arithmetic; and
//! * a spherical-quadrature engine for **smooth bodies** (ellipsoids and
//!   spherical-harmonic perturbations of balls in dimensions 2 and 3),
//!   where the same quantities are integrals of curvature-form determinants
//!   against support-function data.
//!
//! On top of both sits the *deficit* layer: for a convex body `K` and an
//! even test function `f` on the sphere it evaluates the quadratic form
//!
//! ```text
//! deficit(K, f) = V(K[n-1], f)^2 / Vol(K)
//!                 - (n-1)/n * V(K[n-2], f, f)
//!                 - 1/n * V(K[n-1], f^2 / h_K)
//! ```
//!
//! whose nonnegativity over support-function differences is the local form
//! of the log-concavity of volume along Minkowski combinations.  The
//! library verifies that nonnegativity numerically, together with the
//! normalization, projection, monotonicity, and derivative identities that
//! the deficit satisfies, over randomized sweeps and structured families.

pub mod deficit;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod linalg;
pub mod report;
pub mod smooth;
pub mod tolerances;

pub use deficit::{deficit, DeficitReport};
pub use engine::{
    functional_mixed_volume, mixed_area_measure, mixed_volume, zonotope_volume, Arithmetic,
    AtomicMeasure, MixedVolumeQuery,
};
pub use error::{LlbmError, Result};
pub use geometry::{Segment, TestFunction, Vector, Zonotope};
pub use instance::{Experiment, InstanceFile};
pub use report::{ReportRecord, RunReport, Verdict};
pub use smooth::{
    equality_scan, smooth_deficit, smooth_derivative_check, Harmonic, QuadratureGrid, SmoothBody,
    SmoothFunction, SmoothSupport,
};
