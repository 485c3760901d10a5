//! Central registry of numeric tolerances.
//!
//! Every inequality or identity this crate verifies is judged against one of the
//! constants below.  Each constant documents what it guards and why the magnitude
//! is appropriate at desk scale (dimensions 1..=5, O(1) generator entries).

/// Two unit directions are considered the same atom when their dot product
/// exceeds `1 - ATOM_MERGE`.  Determinant noise on O(1) inputs sits near 1e-15,
/// three orders below this threshold.
pub const ATOM_MERGE: f64 = 1e-12;

/// Two generators are parallel (and merge during canonicalization) when the
/// normalized cross-Gram defect `1 - <u,v>^2` of their unit vectors is below this.
pub const PARALLEL_MERGE: f64 = 1e-12;

/// Generators with norm at or below this are dropped during canonicalization
/// (projections of generators parallel to the projection direction leave exact
/// or near-exact zeros).
pub const ZERO_GENERATOR: f64 = 1e-12;

/// Rank / pivot threshold for small dense QR and LU factorizations, relative to
/// the largest column norm.
pub const RANK_REL: f64 = 1e-12;

/// Relative agreement required between the subset-determinant mixed volume and
/// the polynomial-fit oracle.
pub const ORACLE_REL: f64 = 1e-8;

/// Relative agreement required between the dimension-2 determinant volume and
/// the vertex-enumeration shoelace value.
pub const SHOELACE_REL: f64 = 1e-10;

/// Condition-number ceiling for the oracle's Vandermonde least-squares fit;
/// beyond this the oracle refuses to report.
pub const ORACLE_COND_LIMIT: f64 = 1e8;

/// Relative tolerance for the projection identity and the linear-covariance
/// identity of mixed volumes (pure float identities, a few hundred flops deep).
pub const IDENTITY_REL: f64 = 1e-10;

/// Shift invariance of the deficit: |D(K, f + c h_K) - D(K, f)| must not exceed
/// `SHIFT_INVARIANCE * (1 + |D| + c^2 vol(K))`.
pub const SHIFT_INVARIANCE: f64 = 1e-10;

/// Deficit non-negativity slack, relative to the deficit's term scale
/// (`|t1| + |t2| + |t3| + 1`).  Covers accumulated rounding in the three-term
/// combination over a few thousand atoms.
pub const DEFICIT_FLOOR: f64 = -1e-9;

/// Planted self-test (`f = h_K`) must return a deficit of zero within this,
/// relative to the term scale.
pub const PLANTED_ZERO: f64 = 1e-11;

/// Agreement between a deficit and its normalized-function counterpart
/// (`f`, `f - c h_K` pairs), relative to the term scale.
pub const NORMALIZED_EQ: f64 = 1e-10;

/// The square term of the one-sided derivative must vanish after normalization,
/// relative to the deficit term scale.
pub const SQUARE_TERM_ZERO: f64 = 1e-12;

/// Monotonicity slack along interpolation chains, relative to the term scale.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Terminal central-difference error allowed in the derivative check, relative
/// to the derivative term scale.
pub const FD_MATCH: f64 = 1e-6;

/// Minimum empirical convergence order for central differences (theory: 2).
pub const FD_ORDER_MIN: f64 = 1.9;

/// When successive central-difference values differ by less than this (relative
/// to scale) the order estimate is dominated by float noise and is not judged.
pub const FD_ORDER_NOISE: f64 = 1e-11;

/// Dimension-1 deficit must vanish within `DIM1_ZERO * f(1)^2 / a`.
pub const DIM1_ZERO: f64 = 1e-14;

/// Cube normalization constant must equal `f(e_n)` within this (absolute).
pub const CUBE_C: f64 = 1e-12;

/// Cube-case deficit floor, relative to the term scale.
pub const CUBE_DEFICIT_FLOOR: f64 = -1e-10;

/// Quadratic-form inequality slack (engine property test), relative to
/// `V(K[n-1],f)^2 + |vol(K) V(K[n-2],f,f)| + 1`.
pub const QUADRATIC_FORM_SLACK: f64 = -1e-9;

/// Sphere quadrature calibration: ball volume and sphere surface area must be
/// reproduced within this relative error.
pub const QUADRATURE_CAL: f64 = 1e-8;

/// Smooth self-deficit `D(K, h_K)` must vanish within this (absolute, bodies
/// are O(1) sized).
pub const SMOOTH_SELF_ZERO: f64 = 1e-8;

/// Floor for quadrature-evaluated deficits of even functions, relative to
/// the term scale: the sign guarantee holds analytically, so only grid
/// error can push below zero, and far less than this.
pub const SMOOTH_DEFICIT_FLOOR: f64 = -1e-6;

/// Equality-scan margin: candidates at grid-norm distance >= 0.1 from the
/// homothety line must show a deficit above this.
pub const EQUALITY_MARGIN: f64 = 1e-6;

/// Equality-scan dilate ceiling: homothets must show a deficit at or below this.
pub const DILATE_CEILING: f64 = 1e-8;

/// Smooth derivative check: Richardson-extrapolated forward differences must
/// match the closed-form right-hand side within this, relative to scale.
pub const SMOOTH_FD_MATCH: f64 = 1e-4;

/// Sum of quadrature weights must reproduce the sphere surface area within this.
pub const GRID_WEIGHT_SUM: f64 = 1e-10;

/// Support of a projected body must match the support of the original at lifted
/// directions within this (relative).
pub const PROJECT_SUPPORT_REL: f64 = 1e-12;

/// Guard for dividing by `h_K` on atoms or quadrature nodes.
pub const SUPPORT_POSITIVE: f64 = 1e-14;

/// Odd integrands must integrate to zero on symmetric grids within this.
pub const ODD_INTEGRAL: f64 = 1e-12;

/// Returns the scale used to normalize deficit tolerances:
/// `|term_sq| + |term_bilinear| + |term_ratio| + 1`.
pub fn deficit_scale(term_sq: f64, term_bilinear: f64, term_ratio: f64) -> f64 {
    term_sq.abs() + term_bilinear.abs() + term_ratio.abs() + 1.0
}
