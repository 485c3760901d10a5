//! Smooth origin-symmetric convex bodies described by their support
//! functions, with enough regularity to carry the curvature-density
//! quadrature: support values and ambient Hessians of the degree-1
//! homogeneous extension.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{LlbmError, Result};
use crate::geometry::{OrthonormalFrame, Vector};
use crate::smooth::harmonics::{self, Harmonic};
use crate::smooth::quadrature::QuadratureGrid;

/// Central-difference step for Hessians of the harmonic perturbation part.
/// The perturbation extension is analytic and degree-1 homogeneous, so the
/// truncation error is O(step^2) and the rounding error O(eps/step^2); this
/// step balances the two near 1e-6 in absolute terms.
const FD_HESSIAN_STEP: f64 = 1e-5;

/// A support function smooth enough for curvature quadrature: values on the
/// sphere plus the full ambient Hessian of the 1-homogeneous extension.
pub trait SmoothSupport {
    fn dim(&self) -> usize;

    /// Support value at a unit vector `u`.
    fn support(&self, u: &[f64]) -> f64;

    /// Row-major `dim x dim` Hessian of the 1-homogeneous extension,
    /// evaluated at a unit vector `u`.
    fn hessian(&self, u: &[f64]) -> Vec<f64>;
}

/// Restriction of an ambient Hessian to an orthonormal tangent basis:
/// the `k x k` matrix `B^T H B`, row-major.
pub fn tangent_form(hess: &[f64], basis: &[Vector], dim: usize) -> Vec<f64> {
    let k = basis.len();
    let mut out = vec![0.0; k * k];
    for (a, ba) in basis.iter().enumerate() {
        // hb = H * ba
        let mut hb = vec![0.0; dim];
        for i in 0..dim {
            let row = &hess[i * dim..(i + 1) * dim];
            hb[i] = row.iter().zip(ba.coords()).map(|(h, b)| h * b).sum();
        }
        for (b, bb) in basis.iter().enumerate() {
            out[a * k + b] = bb.coords().iter().zip(&hb).map(|(x, y)| x * y).sum();
        }
    }
    out
}

/// Determinant of a 1x1 or 2x2 row-major matrix.
pub(crate) fn small_det(m: &[f64]) -> f64 {
    match m.len() {
        1 => m[0],
        4 => m[0] * m[3] - m[1] * m[2],
        _ => unreachable!("tangent forms here are 1x1 or 2x2"),
    }
}

/// Curvature density of a smooth support function at a unit vector: the
/// determinant of its tangent Hessian form.  This is the density of the
/// body's surface-area measure with respect to spherical measure.
pub fn curvature_density(body: &dyn SmoothSupport, u: &Vector) -> f64 {
    let frame = OrthonormalFrame::tangent_at(u);
    let hess = body.hessian(u.coords());
    small_det(&tangent_form(&hess, frame.basis(), body.dim()))
}

/// Shape of a smooth body.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum BodyKind {
    /// `{ x : x^T Q^{-1} x <= 1 }` given by the symmetric positive-definite
    /// matrix `Q`; the support function is `sqrt(u^T Q u)`.
    Ellipsoid { matrix: Vec<Vec<f64>> },
    /// Ball of the given radius with an even spherical-harmonic perturbation
    /// added to the support function.
    PerturbedBall { radius: f64, harmonics: Vec<Harmonic> },
}

/// A smooth origin-symmetric convex body with a strictly positive curvature
/// density, usable on the quadrature path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothBody {
    dim: usize,
    #[serde(flatten)]
    kind: BodyKind,
}

impl SmoothBody {
    /// Ellipsoid with support `sqrt(u^T Q u)` for symmetric positive-definite `Q`.
    pub fn ellipsoid(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n < 2 || n > 3 {
            return Err(LlbmError::Unsupported(format!(
                "smooth bodies are supported in dimensions 2 and 3, not {n}"
            )));
        }
        let mut scale = 0.0f64;
        for row in &matrix {
            if row.len() != n {
                return Err(LlbmError::InvalidInput("ellipsoid matrix must be square".into()));
            }
            for &x in row {
                if !x.is_finite() {
                    return Err(LlbmError::InvalidInput("ellipsoid matrix must be finite".into()));
                }
                scale = scale.max(x.abs());
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * (scale + 1.0) {
                    return Err(LlbmError::InvalidInput(format!(
                        "ellipsoid matrix must be symmetric; entries ({i},{j}) differ"
                    )));
                }
            }
        }
        if !is_positive_definite(&matrix) {
            return Err(LlbmError::DegenerateBody(
                "ellipsoid matrix must be positive definite".into(),
            ));
        }
        Ok(Self { dim: n, kind: BodyKind::Ellipsoid { matrix } })
    }

    /// Ball of radius `r` (an ellipsoid with `Q = r^2 I`).
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(LlbmError::InvalidInput("ball radius must be positive".into()));
        }
        let mut q = vec![vec![0.0; dim]; dim];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = radius * radius;
        }
        Self::ellipsoid(q)
    }

    /// Ball with an even spherical-harmonic support perturbation.  Fails with
    /// a degeneracy error if the perturbation destroys positive curvature or
    /// positive support anywhere on the validation grid.
    pub fn perturbed_ball(dim: usize, radius: f64, harmonics: Vec<Harmonic>) -> Result<Self> {
        if dim < 2 || dim > 3 {
            return Err(LlbmError::Unsupported(format!(
                "smooth bodies are supported in dimensions 2 and 3, not {dim}"
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(LlbmError::InvalidInput("ball radius must be positive".into()));
        }
        for h in &harmonics {
            h.validate(dim)?;
        }
        let body = Self { dim, kind: BodyKind::PerturbedBall { radius, harmonics } };
        body.validate_curvature()?;
        Ok(body)
    }

    /// Checks strict support and curvature positivity on the standard grid.
    fn validate_curvature(&self) -> Result<()> {
        let grid = QuadratureGrid::standard(self.dim)?;
        for (u, _) in grid.nodes() {
            let h = self.support(u.coords());
            if h <= 1e-12 {
                return Err(LlbmError::DegenerateBody(format!(
                    "support function is not strictly positive (h = {h:.3e} at {:?})",
                    u.coords()
                )));
            }
            let dens = curvature_density(self, u);
            if dens <= 0.0 {
                return Err(LlbmError::DegenerateBody(format!(
                    "curvature density is not strictly positive ({dens:.3e} at {:?}); \
                     the harmonic perturbation is too large",
                    u.coords()
                )));
            }
        }
        Ok(())
    }

    /// The dilate `c * K` (support and curvature scale accordingly).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(LlbmError::InvalidInput("dilation factor must be positive".into()));
        }
        match &self.kind {
            BodyKind::Ellipsoid { matrix } => {
                let q = matrix
                    .iter()
                    .map(|row| row.iter().map(|&x| c * c * x).collect())
                    .collect();
                Self::ellipsoid(q)
            }
            BodyKind::PerturbedBall { radius, harmonics } => {
                let hs = harmonics
                    .iter()
                    .map(|h| Harmonic { l: h.l, m: h.m, coeff: c * h.coeff })
                    .collect();
                Self::perturbed_ball(self.dim, c * radius, hs)
            }
        }
    }

    fn ellipsoid_support(matrix: &[Vec<f64>], u: &[f64]) -> f64 {
        let n = u.len();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += u[i] * matrix[i][j] * u[j];
            }
        }
        quad.max(0.0).sqrt()
    }

    /// `sum_lm c * |x| * Y_lm(x/|x|)`: the 1-homogeneous extension of the
    /// harmonic perturbation.
    fn perturbation_extension(dim: usize, harmonics: &[Harmonic], x: &[f64]) -> f64 {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r == 0.0 {
            return 0.0;
        }
        let u: Vec<f64> = x.iter().map(|c| c / r).collect();
        let p: f64 = harmonics.iter().map(|h| h.coeff * harmonics::eval(dim, h.l, h.m, &u)).sum();
        r * p
    }
}

impl SmoothSupport for SmoothBody {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &[f64]) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid { matrix } => Self::ellipsoid_support(matrix, u),
            BodyKind::PerturbedBall { radius, harmonics } => {
                let p: f64 =
                    harmonics.iter().map(|h| h.coeff * harmonics::eval(self.dim, h.l, h.m, u)).sum();
                radius + p
            }
        }
    }

    fn hessian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim;
        match &self.kind {
            BodyKind::Ellipsoid { matrix } => {
                // H(x) = sqrt(x^T Q x):  Hess = Q/H - (Qx)(Qx)^T / H^3.
                let h = Self::ellipsoid_support(matrix, u);
                let mut qu = vec![0.0; n];
                for i in 0..n {
                    qu[i] = (0..n).map(|j| matrix[i][j] * u[j]).sum();
                }
                let mut out = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = matrix[i][j] / h - qu[i] * qu[j] / (h * h * h);
                    }
                }
                out
            }
            BodyKind::PerturbedBall { radius, harmonics } => {
                // Hess(r |x|) at unit u is r (I - u u^T); the harmonic part is
                // differentiated by central differences on its extension.
                let mut out = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = radius * ((i == j) as u8 as f64 - u[i] * u[j]);
                    }
                }
                if harmonics.is_empty() {
                    return out;
                }
                let s = FD_HESSIAN_STEP;
                let p = |x: &[f64]| Self::perturbation_extension(n, harmonics, x);
                let p0 = p(u);
                let mut x = u.to_vec();
                for i in 0..n {
                    // Diagonal: (P(x+s e_i) - 2 P(x) + P(x-s e_i)) / s^2.
                    x[i] = u[i] + s;
                    let fp = p(&x);
                    x[i] = u[i] - s;
                    let fm = p(&x);
                    x[i] = u[i];
                    out[i * n + i] += (fp - 2.0 * p0 + fm) / (s * s);
                    for j in (i + 1)..n {
                        // Cross: four-point central difference.
                        x[i] = u[i] + s;
                        x[j] = u[j] + s;
                        let fpp = p(&x);
                        x[j] = u[j] - s;
                        let fpm = p(&x);
                        x[i] = u[i] - s;
                        let fmm = p(&x);
                        x[j] = u[j] + s;
                        let fmp = p(&x);
                        x[i] = u[i];
                        x[j] = u[j];
                        let d = (fpp - fpm - fmp + fmm) / (4.0 * s * s);
                        out[i * n + j] += d;
                        out[j * n + i] += d;
                    }
                }
                out
            }
        }
    }
}

/// A single spherical harmonic as a smooth field on the sphere: evaluates
/// `coeff * Y_{l,m}` with Hessians of its 1-homogeneous extension taken by
/// the same central differences used for perturbed balls.  Not the support
/// function of a body, but a perfectly good even test function.
#[derive(Debug, Clone)]
struct HarmonicField {
    dim: usize,
    term: Harmonic,
}

impl SmoothSupport for HarmonicField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &[f64]) -> f64 {
        self.term.coeff * harmonics::eval(self.dim, self.term.l, self.term.m, u)
    }

    fn hessian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let s = FD_HESSIAN_STEP;
        let terms = [self.term];
        let p = |x: &[f64]| SmoothBody::perturbation_extension(n, &terms, x);
        let p0 = p(u);
        let mut out = vec![0.0; n * n];
        let mut x = u.to_vec();
        for i in 0..n {
            x[i] = u[i] + s;
            let fp = p(&x);
            x[i] = u[i] - s;
            let fm = p(&x);
            x[i] = u[i];
            out[i * n + i] = (fp - 2.0 * p0 + fm) / (s * s);
            for j in (i + 1)..n {
                x[i] = u[i] + s;
                x[j] = u[j] + s;
                let fpp = p(&x);
                x[j] = u[j] - s;
                let fpm = p(&x);
                x[i] = u[i] - s;
                let fmm = p(&x);
                x[j] = u[j] + s;
                let fmp = p(&x);
                x[i] = u[i];
                x[j] = u[j];
                let d = (fpp - fpm - fmp + fmm) / (4.0 * s * s);
                out[i * n + j] = d;
                out[j * n + i] = d;
            }
        }
        out
    }
}

/// Cholesky-based positive-definiteness test for a small symmetric matrix.
fn is_positive_definite(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// An even test function on the sphere built as a signed combination of
/// smooth support functions: `f = sum_k c_k h_{B_k}`.  Values and Hessians
/// of the 1-homogeneous extension combine linearly.
#[derive(Clone)]
pub struct SmoothFunction {
    dim: usize,
    terms: Vec<(f64, Arc<dyn SmoothSupport + Send + Sync>)>,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("dim", &self.dim)
            .field("terms", &self.terms.iter().map(|(c, _)| *c).collect::<Vec<_>>())
            .finish()
    }
}

impl SmoothFunction {
    /// `f = h_B`.
    pub fn support_of(body: &SmoothBody) -> Self {
        Self { dim: body.dim(), terms: vec![(1.0, Arc::new(body.clone()))] }
    }

    /// `f = h_plus - h_minus`.
    pub fn support_diff(plus: &SmoothBody, minus: &SmoothBody) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(LlbmError::DimensionMismatch { expected: plus.dim(), got: minus.dim() });
        }
        Ok(Self {
            dim: plus.dim(),
            terms: vec![(1.0, Arc::new(plus.clone())), (-1.0, Arc::new(minus.clone()))],
        })
    }

    /// `f = c * h_B` for any real `c`.
    pub fn scaled_support(c: f64, body: &SmoothBody) -> Result<Self> {
        if !c.is_finite() {
            return Err(LlbmError::InvalidInput("scale must be finite".into()));
        }
        Ok(Self { dim: body.dim(), terms: vec![(c, Arc::new(body.clone()))] })
    }

    /// `f = coeff * Y_{l,m}`, an even spherical harmonic (even degree <= 6).
    pub fn harmonic(dim: usize, l: u32, m: i32, coeff: f64) -> Result<Self> {
        if dim < 2 || dim > 3 {
            return Err(LlbmError::Unsupported(format!(
                "harmonic test functions exist in dimensions 2 and 3, not {dim}"
            )));
        }
        let term = Harmonic { l, m, coeff };
        term.validate(dim)?;
        Ok(Self { dim, terms: vec![(1.0, Arc::new(HarmonicField { dim, term }))] })
    }

    /// Generic weighted combination over any smooth supports (used by the
    /// quadrature-consistency checks that smooth non-smooth bodies).
    pub fn combination(dim: usize, terms: Vec<(f64, Arc<dyn SmoothSupport + Send + Sync>)>) -> Result<Self> {
        for (c, b) in &terms {
            if !c.is_finite() {
                return Err(LlbmError::InvalidInput("combination weights must be finite".into()));
            }
            if b.dim() != dim {
                return Err(LlbmError::DimensionMismatch { expected: dim, got: b.dim() });
            }
        }
        Ok(Self { dim, terms })
    }

    /// `f - c * h_K`, sharing `K`'s evaluator so that cancellations against
    /// `K`'s own support are exact.
    pub fn shifted(&self, c: f64, body: &SmoothBody) -> Result<Self> {
        if body.dim() != self.dim {
            return Err(LlbmError::DimensionMismatch { expected: self.dim, got: body.dim() });
        }
        if !c.is_finite() {
            return Err(LlbmError::InvalidInput("shift constant must be finite".into()));
        }
        let mut terms = self.terms.clone();
        terms.push((-c, Arc::new(body.clone())));
        Ok(Self { dim: self.dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.terms.iter().map(|(c, b)| c * b.support(u)).sum()
    }

    /// Ambient Hessian of the 1-homogeneous extension of `f` at unit `u`.
    pub fn hessian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for (c, b) in &self.terms {
            for (o, h) in out.iter_mut().zip(b.hessian(u)) {
                *o += c * h;
            }
        }
        out
    }
}
