//! Closed-form derivative of the deficit along segment extensions, and
//! finite differences to verify it.
//!
//! For `K_t = K + t I` (segment `I`, evaluated at the passed body `K`):
//!
//! ```text
//! d/dt deficit(K_t, f) = term_projected + term_positive + term_square
//!
//! term_projected = (n-1)^2/n^2 * |I| * deficit(P K, f|)    (>= 0)
//! term_positive  = 1/n * V(K[n-1], f^2/h_K^2 * h_I)        (>= 0)
//! term_square    = -n * V(K[n-1], I) * bracket^2           (<= 0)
//! bracket        = V(K[n-1], f)/Vol(K)
//!                  - (n-1)/n * V(K[n-2], I, f) / V(K[n-1], I)
//! ```
//!
//! where `P` projects onto the hyperplane orthogonal to `I` and `f|` is the
//! restriction of `f` to that hyperplane.  The square term is the one the
//! normalization shift removes; the other two certify monotonicity.

use crate::deficit::{deficit, DeficitReport};
use crate::engine::{
    functional_mixed_volume, guarded_support, integrate_against, mixed_area_measure,
    zonotope_volume, Arithmetic,
};
use crate::error::{LlbmError, Result};
use crate::geometry::{project_zonotope, OrthonormalFrame, Segment, TestFunction, Zonotope};

/// The three derivative terms and their total.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DerivativeReport {
    /// `(n-1)^2/n^2 * |I| * deficit(P K, f|)`; nonnegative when the
    /// projected deficit is.
    pub term_projected: f64,
    /// `1/n * V(K[n-1], f^2/h_K^2 * h_I)`; nonnegative pointwise.
    pub term_positive: f64,
    /// `-n * V(K[n-1], I) * bracket^2`; nonpositive, zero after
    /// normalization.
    pub term_square: f64,
    /// Sum of the three terms: the exact derivative of
    /// `t -> deficit(K + tI, f)` at the passed body.
    pub rhs_total: f64,
    /// The projected deficit itself (before the `|I|` prefactor), kept for
    /// diagnostics.
    pub projected_deficit: DeficitReport,
}

impl DerivativeReport {
    /// Scale for comparing finite differences against `rhs_total`:
    /// `|term_projected| + |term_positive| + |term_square| + 1`.  The
    /// central-difference error grows with the curvature of each term
    /// separately, so when two terms nearly cancel the total is a poor
    /// yardstick; the sum of magnitudes is the honest one.
    pub fn scale(&self) -> f64 {
        self.term_projected.abs() + self.term_positive.abs() + self.term_square.abs() + 1.0
    }
}

/// Evaluates the closed-form derivative terms at `(K, I, f)`.
pub fn derivative_terms(
    k: &Zonotope,
    seg: &Segment,
    f: &TestFunction,
) -> Result<DerivativeReport> {
    let n = k.dim();
    if n < 2 {
        return Err(LlbmError::InvalidInput(
            "the derivative formula needs dimension >= 2".into(),
        ));
    }
    if seg.dim() != n || f.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: seg.dim().min(f.dim()) });
    }
    if !k.is_full_dimensional() {
        return Err(LlbmError::DegenerateBody(
            "derivative terms divide by the volume, which is zero here".into(),
        ));
    }

    // Projected term: one dimension down, orthogonal to the segment.
    let frame = OrthonormalFrame::perp_of_segment(seg);
    let projected_body = project_zonotope(k, &frame)?;
    let restricted = f.restrict(&frame)?;
    let projected_deficit = deficit(&projected_body, &restricted)?;
    let ratio = (n - 1) as f64 / n as f64;
    let term_projected = ratio * ratio * seg.length() * projected_deficit.deficit;

    // Shared measure of K[n-1] for the positive term and the bracket.
    let vol = zonotope_volume(k);
    let measure = mixed_area_measure(n, &[(k, n - 1)], Arithmetic::Float)?;
    let mut positive_sum = 0.0;
    for (u, mass) in measure.atoms() {
        let h = guarded_support(k, u)?;
        let fv = f.eval(u);
        positive_sum += 2.0 * mass * (fv * fv) / (h * h) * seg.support(u);
    }
    // One 1/n turns the integral into V(K[n-1], f^2/h_K^2 h_I), the other
    // is the term's coefficient in the derivative identity.
    let term_positive = positive_sum / (n as f64 * n as f64);

    let v_f = integrate_against(f, &measure);
    let v_i = measure.integrate_even(|u| seg.support(u)) / n as f64;
    if v_i <= 0.0 {
        return Err(LlbmError::DegenerateBody(
            "mixed volume with the segment slot vanishes".into(),
        ));
    }
    let seg_z = seg.to_zonotope();
    let mut slots: Vec<(&Zonotope, usize)> = if n >= 3 { vec![(k, n - 2)] } else { vec![] };
    slots.push((&seg_z, 1));
    let w = functional_mixed_volume(f, n, &slots)?;
    let bracket = v_f / vol - ratio * w / v_i;
    let term_square = -(n as f64) * v_i * bracket * bracket;

    Ok(DerivativeReport {
        term_projected,
        term_positive,
        term_square,
        rhs_total: term_projected + term_positive + term_square,
        projected_deficit,
    })
}

/// Central finite difference of `t -> deficit(K + tI, f)` at `t = 0` with
/// the given step.  The negative side is realized by structural Minkowski
/// subtraction, so `step * I` must be a summand of `K`.
pub fn fd_derivative(
    k: &Zonotope,
    seg: &Segment,
    f: &TestFunction,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(LlbmError::InvalidInput(format!("step must be positive, got {step}")));
    }
    let plus = k.add_segment(&seg.scaled(step)?)?;
    let minus = k.minkowski_diff_summand(seg, 1.0 - step)?;
    let d_plus = deficit(&plus, f)?;
    let d_minus = deficit(&minus, f)?;
    Ok((d_plus.deficit - d_minus.deficit) / (2.0 * step))
}

/// A sequence of central-difference estimates with halving steps, their
/// errors against a reference derivative, and the observed convergence
/// orders.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FdSweep {
    pub steps: Vec<f64>,
    pub values: Vec<f64>,
    /// `|values[i] - reference|`.
    pub errors: Vec<f64>,
    /// `log2(errors[i] / errors[i+1])`; length one less than `steps`.
    pub orders: Vec<f64>,
}

impl FdSweep {
    /// True when every consecutive error pair either shows at least
    /// `min_order` of convergence or has already dropped below the noise
    /// floor (at that point roundoff dominates and order is meaningless).
    pub fn orders_ok(&self, min_order: f64, noise_floor: f64) -> bool {
        self.errors.windows(2).zip(&self.orders).all(|(pair, &order)| {
            pair[0] <= noise_floor || pair[1] <= noise_floor || order >= min_order
        })
    }

    pub fn terminal_error(&self) -> f64 {
        *self.errors.last().expect("sweep has at least one step")
    }

    /// Smallest observed order among consecutive pairs where neither error
    /// has dropped below the noise floor; `None` when roundoff dominates
    /// every pair (nothing left to judge).
    pub fn min_informative_order(&self, noise_floor: f64) -> Option<f64> {
        self.errors
            .windows(2)
            .zip(&self.orders)
            .filter(|(pair, _)| pair[0] > noise_floor && pair[1] > noise_floor)
            .map(|(_, &order)| order)
            .min_by(f64::total_cmp)
    }
}

/// Runs central differences at each step and compares against `reference`
/// (normally the closed-form `rhs_total`).
pub fn fd_sweep(
    k: &Zonotope,
    seg: &Segment,
    f: &TestFunction,
    steps: &[f64],
    reference: f64,
) -> Result<FdSweep> {
    let mut values = Vec::with_capacity(steps.len());
    for &s in steps {
        values.push(fd_derivative(k, seg, f, s)?);
    }
    let errors: Vec<f64> = values.iter().map(|v| (v - reference).abs()).collect();
    let orders: Vec<f64> =
        errors.windows(2).map(|pair| (pair[0] / pair[1]).log2()).collect();
    Ok(FdSweep { steps: steps.to_vec(), values, errors, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deficit::normalized_function;
    use crate::geometry::Vector;
    use crate::tolerances;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn sample_instance() -> (Zonotope, Segment, TestFunction) {
        let seg = Segment::new(v(&[0.5, 0.25, 1.0])).unwrap();
        let base = Zonotope::new(
            3,
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.25, 1.0, 0.0]), v(&[0.0, 0.5, 1.0])],
        )
        .unwrap();
        let k = base.add_segment(&seg).unwrap();
        let z1 = Zonotope::new(3, vec![v(&[1.0, 0.25, 0.5]), v(&[0.0, 1.0, 0.25])]).unwrap();
        let z2 = Zonotope::new(3, vec![v(&[0.5, 0.0, 1.0]), v(&[0.25, 0.75, 0.0])]).unwrap();
        let f = TestFunction::support_diff(z1, z2).unwrap();
        (k, seg, f)
    }

    /// The closed-form derivative matches second-order central differences.
    #[test]
    fn finite_differences_converge_to_closed_form() {
        let (k, seg, f) = sample_instance();
        let report = derivative_terms(&k, &seg, &f).unwrap();
        let rhs = report.rhs_total;
        let sweep =
            fd_sweep(&k, &seg, &f, &[1e-2, 5e-3, 2.5e-3], rhs).unwrap();
        let scale = report.scale();
        assert!(
            sweep.orders_ok(tolerances::FD_ORDER_MIN, tolerances::FD_ORDER_NOISE * scale),
            "orders {:?} errors {:?}",
            sweep.orders,
            sweep.errors
        );
        assert!(
            sweep.terminal_error() <= tolerances::FD_MATCH * scale,
            "terminal error {} vs rhs {}",
            sweep.terminal_error(),
            rhs
        );
    }

    /// After normalization the square term is numerically zero and the
    /// derivative is a sum of the two nonnegative terms.
    #[test]
    fn square_term_vanishes_after_normalization() {
        let (k, seg, f) = sample_instance();
        let (_, fbar) = normalized_function(&k, &seg, &f).unwrap();
        let report = derivative_terms(&k, &seg, &fbar).unwrap();
        let scale = report.term_projected.abs() + report.term_positive.abs() + 1.0;
        assert!(
            report.term_square.abs() <= tolerances::SQUARE_TERM_ZERO * scale,
            "square term {} at scale {scale}",
            report.term_square
        );
        assert!(report.term_projected >= -tolerances::SQUARE_TERM_ZERO * scale);
        assert!(report.term_positive >= 0.0);
    }
}
