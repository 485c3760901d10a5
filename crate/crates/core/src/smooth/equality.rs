//! Equality-case scan: the deficit of `(K, f)` vanishes when `f` is a
//! multiple of `h_K` and is strictly positive otherwise, with a margin
//! quantified against the grid distance from the multiples of `h_K`.

use crate::error::Result;
use crate::smooth::body::{SmoothBody, SmoothFunction, SmoothSupport};
use crate::smooth::deficit::deficit_on_grid;
use crate::smooth::quadrature::QuadratureGrid;

/// One non-homothetic candidate in an equality scan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CandidateReport {
    /// Deficit of `(K, h_L)`.
    pub deficit: f64,
    /// Grid `L^2` distance from `h_L` to its best multiple of `h_K`.
    pub distance: f64,
    /// `deficit / distance^2` — bounded away from zero exactly when
    /// equality forces homothety.
    pub margin: f64,
}

/// Result of an equality scan around a body `K`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EqualityScanReport {
    /// `(c, normalized deficit)` for `f = c h_K`; each must vanish.
    pub dilate_deficits: Vec<(f64, f64)>,
    /// Margins for the non-homothetic candidates.
    pub candidates: Vec<CandidateReport>,
}

/// Scans the equality case of the deficit inequality at `K`: dilate support
/// functions must give zero deficit, and each candidate body `L` gets a
/// positivity margin relative to its grid distance from the dilates of `K`.
pub fn equality_scan(
    k: &SmoothBody,
    candidates: &[SmoothBody],
    grid: &QuadratureGrid,
) -> Result<EqualityScanReport> {
    let mut dilate_deficits = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        let f = SmoothFunction::scaled_support(c, k)?;
        let rep = deficit_on_grid(k, &f, grid)?;
        dilate_deficits.push((c, rep.deficit / rep.scale()));
    }
    let mut reports = Vec::with_capacity(candidates.len());
    for l in candidates {
        let f = SmoothFunction::support_of(l);
        let rep = deficit_on_grid(k, &f, grid)?;
        // Best multiple of h_K in the grid L^2 sense, then the residual.
        let mut hk_hl = 0.0;
        let mut hk_hk = 0.0;
        for (u, w) in grid.nodes() {
            let hk = k.support(u.coords());
            let hl = l.support(u.coords());
            hk_hl += w * hk * hl;
            hk_hk += w * hk * hk;
        }
        let best = hk_hl / hk_hk;
        let dist2 = grid.integrate(|u| {
            let d = l.support(u.coords()) - best * k.support(u.coords());
            d * d
        });
        let distance = dist2.max(0.0).sqrt();
        let margin = if dist2 > 0.0 { rep.deficit / dist2 } else { f64::INFINITY };
        reports.push(CandidateReport { deficit: rep.deficit, distance, margin });
    }
    Ok(EqualityScanReport { dilate_deficits, candidates: reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::harmonics::Harmonic;
    use crate::tolerances;

    #[test]
    fn dilates_vanish_and_harmonic_candidates_have_positive_margin() {
        let grid = QuadratureGrid::standard(3).unwrap();
        let ball = SmoothBody::ball(3, 1.0).unwrap();
        let candidates = vec![
            SmoothBody::perturbed_ball(3, 1.0, vec![Harmonic { l: 2, m: 0, coeff: 0.15 }])
                .unwrap(),
            SmoothBody::perturbed_ball(3, 1.0, vec![Harmonic { l: 2, m: -2, coeff: 0.12 }])
                .unwrap(),
            SmoothBody::perturbed_ball(
                3,
                1.2,
                vec![Harmonic { l: 4, m: 1, coeff: 0.05 }, Harmonic { l: 2, m: 1, coeff: 0.1 }],
            )
            .unwrap(),
        ];
        let scan = equality_scan(&ball, &candidates, &grid).unwrap();
        for (c, d) in &scan.dilate_deficits {
            assert!(d.abs() <= tolerances::DILATE_CEILING, "c={c}: {d}");
        }
        for cand in &scan.candidates {
            assert!(cand.distance >= 0.05, "distance {}", cand.distance);
            assert!(cand.deficit > tolerances::EQUALITY_MARGIN, "deficit {}", cand.deficit);
            // The spectral floor on the ball is 1/3 per unit of squared distance.
            assert!(cand.margin > 0.3, "margin {}", cand.margin);
        }
    }

    #[test]
    fn candidate_margin_matches_the_spectral_floor() {
        // For L = ball + eps Y_2m, the deficit is eps^2/3 and the distance
        // is eps, so the margin approaches exactly 1/3.
        let grid = QuadratureGrid::standard(3).unwrap();
        let ball = SmoothBody::ball(3, 1.0).unwrap();
        let eps = 0.02;
        let l =
            SmoothBody::perturbed_ball(3, 1.0, vec![Harmonic { l: 2, m: 1, coeff: eps }]).unwrap();
        let scan = equality_scan(&ball, &[l], &grid).unwrap();
        let cand = &scan.candidates[0];
        assert!((cand.distance - eps).abs() < 1e-6, "distance {}", cand.distance);
        assert!((cand.margin - 1.0 / 3.0).abs() < 0.05, "margin {}", cand.margin);
    }
}
