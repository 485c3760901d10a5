//! Deficit computation on the quadrature path.
//!
//! All functionals are spherical integrals against curvature densities:
//!
//! * `V(K[n-1], g)   = (1/n) * int g * det(Q_K) dsigma`
//! * `V(K[n-2], g, g) = (1/n) * int g * D(Q_K, Q_g) dsigma` (n = 3; the `D`
//!   is the mixed determinant of the tangent Hessian forms; for n = 2 the
//!   `K` slot disappears and the density is the form of `g` itself)
//!
//! and the deficit combines them exactly as on the atomic path.

use crate::deficit::DeficitReport;
use crate::error::{LlbmError, Result};
use crate::geometry::OrthonormalFrame;
use crate::smooth::body::{small_det, tangent_form, SmoothFunction, SmoothSupport};
use crate::smooth::quadrature::QuadratureGrid;

/// Deficit of a smooth body with a refinement-based accuracy estimate.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SmoothDeficitReport {
    /// Terms and deficit on the requested grid.
    pub report: DeficitReport,
    /// Deficit recomputed with twice the nodes per grid axis.
    pub refined_deficit: f64,
    /// `|deficit - refined_deficit|`, an a-posteriori quadrature error bound.
    pub refinement_delta: f64,
    /// Set when the refinement delta exceeds the requested tolerance.
    pub accuracy_warning: bool,
}

/// Mixed determinant of two small symmetric forms:
/// `D(A, B) = (det(A+B) - det(A) - det(B)) / 2` for 2x2, degenerate to the
/// symmetric average for 1x1 (where it is not used directly).
pub(crate) fn mixed_det2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), 4);
    let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
    (small_det(&sum) - small_det(a) - small_det(b)) / 2.0
}

/// Deficit terms of `(K, f)` integrated over one specific grid.
pub(crate) fn deficit_on_grid(
    k: &dyn SmoothSupport,
    f: &SmoothFunction,
    grid: &QuadratureGrid,
) -> Result<DeficitReport> {
    let n = k.dim();
    if f.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: f.dim() });
    }
    if grid.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: grid.dim() });
    }
    let nf = n as f64;
    let mut vol = 0.0;
    let mut v_f = 0.0;
    let mut bilinear = 0.0;
    let mut ratio = 0.0;
    for (u, w) in grid.nodes() {
        let frame = OrthonormalFrame::tangent_at(u);
        let h = k.support(u.coords());
        if !(h > 0.0) {
            return Err(LlbmError::DegenerateBody(format!(
                "support is not strictly positive at a quadrature node (h = {h:.3e})"
            )));
        }
        let qk = tangent_form(&k.hessian(u.coords()), frame.basis(), n);
        let dens = small_det(&qk);
        if !(dens > 0.0) {
            return Err(LlbmError::DegenerateBody(format!(
                "curvature density is not strictly positive at a quadrature node ({dens:.3e})"
            )));
        }
        let fv = f.eval(u.coords());
        let qf = tangent_form(&f.hessian(u.coords()), frame.basis(), n);
        let bil_density = if n == 3 { mixed_det2(&qk, &qf) } else { qf[0] };
        vol += w * h * dens;
        v_f += w * fv * dens;
        bilinear += w * fv * bil_density;
        ratio += w * fv * fv / h * dens;
    }
    vol /= nf;
    v_f /= nf;
    bilinear /= nf;
    ratio /= nf;
    // As on the atomic path: the last term is (1/n) V(K[n-1], f^2/h_K), and
    // `ratio` already carries the 1/n of the functional mixed volume, so one
    // more 1/n applies here.
    let term_sq = v_f * v_f / vol;
    let term_bilinear = (nf - 1.0) / nf * bilinear;
    let term_ratio = ratio / nf;
    Ok(DeficitReport {
        term_sq,
        term_bilinear,
        term_ratio,
        deficit: term_sq - term_bilinear - term_ratio,
    })
}

/// Volume of a smooth body on a grid: `(1/n) int h * det(Q) dsigma`.
pub fn smooth_volume(k: &dyn SmoothSupport, grid: &QuadratureGrid) -> Result<f64> {
    if grid.dim() != k.dim() {
        return Err(LlbmError::DimensionMismatch { expected: k.dim(), got: grid.dim() });
    }
    let mut vol = 0.0;
    for (u, w) in grid.nodes() {
        let frame = OrthonormalFrame::tangent_at(u);
        let qk = tangent_form(&k.hessian(u.coords()), frame.basis(), k.dim());
        vol += w * k.support(u.coords()) * small_det(&qk);
    }
    Ok(vol / k.dim() as f64)
}

/// Surface area of a smooth body: `int det(Q) dsigma`.
pub fn smooth_surface_area(k: &dyn SmoothSupport, grid: &QuadratureGrid) -> Result<f64> {
    if grid.dim() != k.dim() {
        return Err(LlbmError::DimensionMismatch { expected: k.dim(), got: grid.dim() });
    }
    let mut area = 0.0;
    for (u, w) in grid.nodes() {
        let frame = OrthonormalFrame::tangent_at(u);
        let qk = tangent_form(&k.hessian(u.coords()), frame.basis(), k.dim());
        area += w * small_det(&qk);
    }
    Ok(area)
}

/// Deficit of a smooth pair `(K, f)` with a refinement error estimate.
///
/// `tolerance` is the accuracy the caller wants from quadrature; when the
/// deficit moves by more than that under grid refinement, the report carries
/// an accuracy warning (the values are still returned).
pub fn smooth_deficit(
    k: &dyn SmoothSupport,
    f: &SmoothFunction,
    grid: &QuadratureGrid,
    tolerance: f64,
) -> Result<SmoothDeficitReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(LlbmError::InvalidInput("tolerance must be positive".into()));
    }
    let report = deficit_on_grid(k, f, grid)?;
    let refined = deficit_on_grid(k, f, &grid.refined()?)?;
    let refinement_delta = (report.deficit - refined.deficit).abs();
    Ok(SmoothDeficitReport {
        report,
        refined_deficit: refined.deficit,
        refinement_delta,
        accuracy_warning: refinement_delta > tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::body::SmoothBody;
    use crate::smooth::harmonics::Harmonic;
    use crate::tolerances;

    #[test]
    fn ball_volume_and_surface_match_closed_forms() {
        let grid = QuadratureGrid::standard(3).unwrap();
        for r in [1.0, 0.7, 2.5] {
            let b = SmoothBody::ball(3, r).unwrap();
            let vol = smooth_volume(&b, &grid).unwrap();
            let vol_exact = 4.0 * std::f64::consts::PI / 3.0 * r * r * r;
            assert!((vol - vol_exact).abs() <= tolerances::QUADRATURE_CAL * vol_exact);
            let area = smooth_surface_area(&b, &grid).unwrap();
            let area_exact = 4.0 * std::f64::consts::PI * r * r;
            assert!((area - area_exact).abs() <= tolerances::QUADRATURE_CAL * area_exact);
        }
        let grid2 = QuadratureGrid::standard(2).unwrap();
        let disc = SmoothBody::ball(2, 1.3).unwrap();
        let a = smooth_volume(&disc, &grid2).unwrap();
        assert!((a - std::f64::consts::PI * 1.69).abs() <= tolerances::QUADRATURE_CAL * a);
    }

    #[test]
    fn ellipsoid_volume_matches_closed_form() {
        let grid = QuadratureGrid::standard(3).unwrap();
        // Semi-axes 1.2, 0.8, 1.0: Q = diag of squares.
        let e = SmoothBody::ellipsoid(vec![
            vec![1.44, 0.0, 0.0],
            vec![0.0, 0.64, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let vol = smooth_volume(&e, &grid).unwrap();
        let exact = 4.0 * std::f64::consts::PI / 3.0 * 1.2 * 0.8;
        assert!((vol - exact).abs() < 1e-8 * exact, "{vol} vs {exact}");
    }

    #[test]
    fn self_deficit_vanishes_to_rounding() {
        // f = h_K uses the same evaluator on both sides, so every density is
        // computed bitwise-identically and the three terms cancel.
        let grid = QuadratureGrid::standard(3).unwrap();
        let bodies = vec![
            SmoothBody::ball(3, 1.0).unwrap(),
            SmoothBody::ellipsoid(vec![
                vec![2.0, 0.3, -0.1],
                vec![0.3, 1.5, 0.2],
                vec![-0.1, 0.2, 0.9],
            ])
            .unwrap(),
            SmoothBody::perturbed_ball(
                3,
                1.0,
                vec![Harmonic { l: 2, m: 1, coeff: 0.05 }, Harmonic { l: 4, m: -2, coeff: 0.02 }],
            )
            .unwrap(),
        ];
        for k in &bodies {
            let f = SmoothFunction::support_of(k);
            let rep = deficit_on_grid(k, &f, &grid).unwrap();
            let scale = rep.scale();
            assert!(
                rep.deficit.abs() <= tolerances::SMOOTH_SELF_ZERO * scale,
                "self deficit {} at scale {scale}",
                rep.deficit
            );
        }
    }

    #[test]
    fn ball_harmonic_deficits_match_the_spectral_values() {
        // On the unit ball, the deficit of a unit-norm degree-l harmonic is
        // (l(l+1) - 3) / 9 in dimension 3 and (l^2 - 2) / 4 in dimension 2.
        let grid = QuadratureGrid::standard(3).unwrap();
        let ball = SmoothBody::ball(3, 1.0).unwrap();
        for (l, m) in [(2u32, 0i32), (2, -1), (4, 2), (6, 0)] {
            let f = SmoothFunction::harmonic(3, l, m, 1.0).unwrap();
            let rep = deficit_on_grid(&ball, &f, &grid).unwrap();
            let expected = ((l * (l + 1)) as f64 - 3.0) / 9.0;
            assert!(
                (rep.deficit - expected).abs() < 1e-4,
                "l={l} m={m}: {} vs {expected}",
                rep.deficit
            );
        }
        let grid2 = QuadratureGrid::standard(2).unwrap();
        let disc = SmoothBody::ball(2, 1.0).unwrap();
        for l in [2u32, 4, 6] {
            let f = SmoothFunction::harmonic(2, l, 0, 1.0).unwrap();
            let rep = deficit_on_grid(&disc, &f, &grid2).unwrap();
            let expected = ((l * l) as f64 - 2.0) / 4.0;
            assert!(
                (rep.deficit - expected).abs() < 1e-4,
                "l={l}: {} vs {expected}",
                rep.deficit
            );
        }
    }

    #[test]
    fn bilinear_term_matches_the_body_difference_decomposition() {
        // V(K, f, f) with f = h_A - h_B must equal the expansion
        // V(K,A,A) - 2 V(K,A,B) + V(K,B,B), each term computed with the
        // mixed-determinant density of the corresponding pair.
        let grid = QuadratureGrid::standard(3).unwrap();
        let k = SmoothBody::ellipsoid(vec![
            vec![1.2, 0.1, 0.0],
            vec![0.1, 1.0, -0.2],
            vec![0.0, -0.2, 1.4],
        ])
        .unwrap();
        let a = SmoothBody::ball(3, 1.1).unwrap();
        let b = SmoothBody::ellipsoid(vec![
            vec![0.9, 0.0, 0.2],
            vec![0.0, 1.3, 0.0],
            vec![0.2, 0.0, 0.8],
        ])
        .unwrap();
        let f = SmoothFunction::support_diff(&a, &b).unwrap();
        let rep = deficit_on_grid(&k, &f, &grid).unwrap();
        let pair = |x: &SmoothBody, y: &SmoothBody| -> f64 {
            grid.integrate(|u| {
                let frame = OrthonormalFrame::tangent_at(u);
                let qk = tangent_form(&k.hessian(u.coords()), frame.basis(), 3);
                let qy = tangent_form(&y.hessian(u.coords()), frame.basis(), 3);
                x.support(u.coords()) * mixed_det2(&qk, &qy)
            }) / 3.0
        };
        let expansion = pair(&a, &a) - pair(&a, &b) - pair(&b, &a) + pair(&b, &b);
        let bilinear = rep.term_bilinear / (2.0 / 3.0);
        assert!(
            (bilinear - expansion).abs() < 1e-10 * (expansion.abs() + 1.0),
            "{bilinear} vs {expansion}"
        );
    }

    #[test]
    fn refinement_estimate_flags_coarse_grids() {
        let k = SmoothBody::perturbed_ball(3, 1.0, vec![Harmonic { l: 6, m: 4, coeff: 0.04 }])
            .unwrap();
        let f = SmoothFunction::harmonic(3, 4, 1, 1.0).unwrap();
        let coarse = QuadratureGrid::sphere(4, 8).unwrap();
        let rep = smooth_deficit(&k, &f, &coarse, 1e-12).unwrap();
        assert!(rep.accuracy_warning, "delta {}", rep.refinement_delta);
        let fine = QuadratureGrid::standard(3).unwrap();
        let rep = smooth_deficit(&k, &f, &fine, 1e-3).unwrap();
        assert!(!rep.accuracy_warning, "delta {}", rep.refinement_delta);
    }

    #[test]
    fn dilate_deficits_vanish() {
        let grid = QuadratureGrid::standard(3).unwrap();
        let k = SmoothBody::perturbed_ball(
            3,
            1.0,
            vec![Harmonic { l: 2, m: 2, coeff: 0.06 }, Harmonic { l: 4, m: 0, coeff: 0.03 }],
        )
        .unwrap();
        for c in [0.5, 1.0, 2.0] {
            let f = SmoothFunction::scaled_support(c, &k).unwrap();
            let rep = deficit_on_grid(&k, &f, &grid).unwrap();
            assert!(
                rep.deficit.abs() <= tolerances::DILATE_CEILING * rep.scale(),
                "c={c}: {}",
                rep.deficit
            );
        }
    }
}
