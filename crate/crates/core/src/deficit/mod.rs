//! The local log-concavity deficit and its structure theory.
//!
//! For an origin-symmetric full-dimensional zonotope `K` in dimension `n`
//! and an even test function `f` on the sphere, the deficit is
//!
//! ```text
//! deficit(K, f) = V(K[n-1], f)^2 / Vol(K)
//!                 - (n-1)/n * V(K[n-2], f, f)
//!                 - 1/n * V(K[n-1], f^2 / h_K)
//! ```
//!
//! where all functional mixed volumes are integrals against the atomic
//! mixed area measure of `K` and `f^2 / h_K` divides pointwise by the
//! support function.  In dimension 1 the middle term carries coefficient
//! zero and the deficit vanishes identically.
//!
//! Submodules layer the identities on top:
//! * [`normalize`] — the shift `f -> f - c h_K` that kills the square term
//!   of the derivative formula;
//! * [`derivative`] — the closed-form derivative of `t -> deficit(K_t, f)`
//!   along segment extensions `K_t = (K div I) + t I`, plus finite
//!   differences to verify it;
//! * [`chains`] — monotonicity along segment scaling and the peel-off
//!   chain that reduces a zonotope to a base body;
//! * [`sweep`] — randomized nonnegativity sweeps and the structured cube
//!   and dimension-one cases.

pub mod chains;
pub mod derivative;
pub mod normalize;
pub mod sweep;

pub use chains::{monotonicity_check, peel_chain, ChainReport, ChainStation, MonotonicityReport};
pub use derivative::{derivative_terms, fd_derivative, fd_sweep, DerivativeReport, FdSweep};
pub use normalize::{normalization_constant, normalized_function};
pub use sweep::{cube_case, dim1_case, random_test_function, random_zonotope, trial_rng,
    trial_stream, zonoid_sweep, CellReport, CubeCaseReport, GeneratorGrid, SweepConfig,
    SweepReport, TrialRecord};

use crate::engine::{
    bilinear_functional_mixed_volume, guarded_support, integrate_against, mixed_area_measure,
    zonotope_volume, Arithmetic,
};
use crate::error::{LlbmError, Result};
use crate::geometry::{TestFunction, Zonotope};
use crate::tolerances;

/// The three terms of the deficit quadratic form and their combination.
///
/// `deficit = term_sq - term_bilinear - term_ratio`; the terms keep their
/// coefficients folded in, so the natural comparison scale is
/// `|term_sq| + |term_bilinear| + |term_ratio| + 1`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DeficitReport {
    /// `V(K[n-1], f)^2 / Vol(K)`.
    pub term_sq: f64,
    /// `(n-1)/n * V(K[n-2], f, f)`.
    pub term_bilinear: f64,
    /// `1/n * V(K[n-1], f^2 / h_K)`.
    pub term_ratio: f64,
    /// `term_sq - term_bilinear - term_ratio`.
    pub deficit: f64,
}

impl DeficitReport {
    /// Magnitude scale for relative comparisons of the deficit: the terms
    /// cancel against one another, so tolerances are quoted against this.
    pub fn scale(&self) -> f64 {
        tolerances::deficit_scale(self.term_sq, self.term_bilinear, self.term_ratio)
    }

    /// Deficit normalized by its term scale.
    pub fn normalized(&self) -> f64 {
        self.deficit / self.scale()
    }
}

/// Evaluates the deficit quadratic form at `(K, f)`.
///
/// Requires `K` full-dimensional (the form divides by its volume and
/// support function) and `f` even; the bilinear term additionally requires
/// `f` to be a support difference when `n >= 2`.
pub fn deficit(k: &Zonotope, f: &TestFunction) -> Result<DeficitReport> {
    let n = k.dim();
    if f.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: f.dim() });
    }
    if !k.is_full_dimensional() {
        return Err(LlbmError::DegenerateBody(
            "the deficit divides by the volume, which is zero here".into(),
        ));
    }
    if !f.is_even_sampled(1e-8) {
        return Err(LlbmError::InvalidInput(
            "test function must be even (f(u) = f(-u))".into(),
        ));
    }
    let vol = zonotope_volume(k);
    let hyper_slots: Vec<(&Zonotope, usize)> = if n >= 2 { vec![(k, n - 1)] } else { vec![] };
    let measure = mixed_area_measure(n, &hyper_slots, Arithmetic::Float)?;

    let v_f = integrate_against(f, &measure);
    let term_sq = v_f * v_f / vol;

    let term_bilinear = if n == 1 {
        0.0
    } else {
        let sub_slots: Vec<(&Zonotope, usize)> = if n >= 3 { vec![(k, n - 2)] } else { vec![] };
        let v_ff = bilinear_functional_mixed_volume(f, f, n, &sub_slots)?;
        (n - 1) as f64 / n as f64 * v_ff
    };

    let mut ratio_sum = 0.0;
    for (u, mass) in measure.atoms() {
        let h = guarded_support(k, u)?;
        let fv = f.eval(u);
        ratio_sum += 2.0 * mass * fv * fv / h;
    }
    // ratio_sum is the measure integral; one 1/n makes it the functional
    // mixed volume V(K[n-1], f^2/h_K), the other is the term's coefficient.
    let term_ratio = ratio_sum / (n as f64 * n as f64);

    let deficit = term_sq - term_bilinear - term_ratio;
    Ok(DeficitReport { term_sq, term_bilinear, term_ratio, deficit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vector;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    /// Frozen hand-computed case: K the square, f = h_hex - h_K with the
    /// hexagon generated by {(1,0),(0,1),(1,1)}.
    ///
    /// By hand: Vol(K) = 4, V(K, f) = V(K, hex) - Vol(K) = 8 - 4 = 4, so
    /// term_sq = 4.  V(hex, f) = V(hex,hex) - V(hex,K) = 12 - 8 = 4, hence
    /// V(f, f) = V(hex,f) - V(K,f) = 0 and term_bilinear = 0.  The measure
    /// of K has atoms e1, e2 with pair mass 2; h_K = 1 and f = 1 at both,
    /// so term_ratio = (1/2) * (2*2*1 + 2*2*1) / 2 = 2.  Deficit = 2.
    #[test]
    fn square_versus_hexagon_hand_case() {
        let k = Zonotope::cube(2);
        let hex =
            Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        let f = TestFunction::support_diff(hex, k.clone()).unwrap();
        let r = deficit(&k, &f).unwrap();
        assert!((r.term_sq - 4.0).abs() < 1e-12, "term_sq {}", r.term_sq);
        assert!(r.term_bilinear.abs() < 1e-12, "term_bilinear {}", r.term_bilinear);
        assert!((r.term_ratio - 2.0).abs() < 1e-12, "term_ratio {}", r.term_ratio);
        assert!((r.deficit - 2.0).abs() < 1e-12, "deficit {}", r.deficit);
    }

    /// Plugging f = h_K into the form makes all three terms equal Vol(K)
    /// (up to the coefficients), and the deficit collapses to zero.
    #[test]
    fn support_of_body_gives_zero_deficit() {
        let k = Zonotope::new(
            3,
            vec![
                v(&[1.0, 0.25, 0.0]),
                v(&[0.0, 1.5, -0.5]),
                v(&[0.25, 0.0, 1.0]),
                v(&[1.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        let f = TestFunction::support_of(&k);
        let r = deficit(&k, &f).unwrap();
        assert!(
            r.deficit.abs() <= 1e-12 * r.scale(),
            "deficit {} at scale {}",
            r.deficit,
            r.scale()
        );
    }

    #[test]
    fn dimension_one_is_identically_zero() {
        let k = Zonotope::new(1, vec![v(&[0.75])]).unwrap();
        let z1 = Zonotope::new(1, vec![v(&[2.5])]).unwrap();
        let z2 = Zonotope::new(1, vec![v(&[0.5])]).unwrap();
        let f = TestFunction::support_diff(z1, z2).unwrap();
        let r = deficit(&k, &f).unwrap();
        assert_eq!(r.term_bilinear, 0.0);
        assert_eq!(r.deficit, 0.0, "dimension 1 cancels bitwise");
    }

    #[test]
    fn degenerate_body_is_rejected() {
        let slab = Zonotope::slab(3);
        let f = TestFunction::support_of(&Zonotope::cube(3));
        assert!(matches!(deficit(&slab, &f), Err(LlbmError::DegenerateBody(_))));
    }
}
