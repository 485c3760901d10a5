//! Smooth surrogates for zonotopes, tying the quadrature path to the atomic
//! path.  Each generator segment `[-g, g]` is replaced by the ellipsoid with
//! quadratic form `g g^T + eps^2 I`, whose support `sqrt(<g,u>^2 + eps^2)`
//! converges uniformly to `|<g,u>|` as `eps -> 0`; the Minkowski sum of
//! these ellipsoids is a smooth body converging to the zonotope.

use crate::error::{LlbmError, Result};
use crate::geometry::Zonotope;
use crate::smooth::body::SmoothSupport;

/// A zonotope with every generator rounded by `eps`, exposed through the
/// smooth-support interface (values and analytic Hessians).
#[derive(Debug, Clone)]
pub struct RoundedZonotope {
    dim: usize,
    /// One quadratic form `g g^T + eps^2 I` per generator, row-major.
    quads: Vec<Vec<f64>>,
}

impl RoundedZonotope {
    pub fn new(z: &Zonotope, eps: f64) -> Result<Self> {
        let n = z.dim();
        if n < 2 || n > 3 {
            return Err(LlbmError::Unsupported(format!(
                "rounded zonotopes live on the quadrature path (dimensions 2 and 3), not {n}"
            )));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(LlbmError::InvalidInput("rounding radius must be positive".into()));
        }
        if z.generators().is_empty() {
            return Err(LlbmError::DegenerateBody("cannot round the origin".into()));
        }
        let quads = z
            .generators()
            .iter()
            .map(|g| {
                let c = g.coords();
                let mut q = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        q[i * n + j] = c[i] * c[j];
                    }
                    q[i * n + i] += eps * eps;
                }
                q
            })
            .collect();
        Ok(Self { dim: n, quads })
    }
}

impl SmoothSupport for RoundedZonotope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &[f64]) -> f64 {
        let n = self.dim;
        self.quads
            .iter()
            .map(|q| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += u[i] * q[i * n + j] * u[j];
                    }
                }
                s.max(0.0).sqrt()
            })
            .sum()
    }

    fn hessian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for q in &self.quads {
            // Per ellipsoid: Q/H - (Qu)(Qu)^T / H^3.
            let mut qu = vec![0.0; n];
            let mut h2 = 0.0;
            for i in 0..n {
                qu[i] = (0..n).map(|j| q[i * n + j] * u[j]).sum();
                h2 += u[i] * qu[i];
            }
            let h = h2.max(0.0).sqrt();
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] += q[i * n + j] / h - qu[i] * qu[j] / (h * h * h);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deficit::deficit;
    use crate::geometry::{TestFunction, Vector};
    use crate::smooth::body::SmoothFunction;
    use crate::smooth::deficit::{deficit_on_grid, smooth_volume};
    use crate::smooth::quadrature::QuadratureGrid;
    use std::sync::Arc;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rounded_support_converges_to_the_zonotope_support() {
        let z = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        let u = v(&[0.6, -0.8]);
        let exact = z.support(&u);
        let mut last = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05] {
            let r = RoundedZonotope::new(&z, eps).unwrap();
            let err = (r.support(u.coords()) - exact).abs();
            assert!(err < last, "eps={eps}: error {err} did not shrink from {last}");
            last = err;
        }
    }

    #[test]
    fn rounded_volume_approaches_the_combinatorial_volume() {
        let z = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        let exact = crate::engine::zonotope_volume(&z);
        let grid = QuadratureGrid::circle(2048).unwrap();
        let mut last = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05] {
            let r = RoundedZonotope::new(&z, eps).unwrap();
            let vol = smooth_volume(&r, &grid).unwrap();
            let err = (vol - exact).abs();
            assert!(err < last, "eps={eps}: volume error {err} vs previous {last}");
            last = err;
        }
    }

    #[test]
    fn rounded_deficit_trends_toward_the_atomic_deficit() {
        // The frozen hand case: K the unit square, f = h_hexagon - h_K, with
        // atomic deficit exactly 2.  The same pair computed on the quadrature
        // path after rounding must drift toward that value as eps shrinks.
        let square = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let hex =
            Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        let f = TestFunction::support_diff(hex.clone(), square.clone()).unwrap();
        let atomic = deficit(&square, &f).unwrap().deficit;
        assert!((atomic - 2.0).abs() < 1e-12);

        let grid = QuadratureGrid::circle(4096).unwrap();
        let mut errors = Vec::new();
        for eps in [0.2, 0.1, 0.05] {
            let rk = Arc::new(RoundedZonotope::new(&square, eps).unwrap());
            let rhex = Arc::new(RoundedZonotope::new(&hex, eps).unwrap());
            let rf = SmoothFunction::combination(
                2,
                vec![(1.0, rhex as _), (-1.0, rk.clone() as _)],
            )
            .unwrap();
            let rep = deficit_on_grid(rk.as_ref(), &rf, &grid).unwrap();
            errors.push((rep.deficit - atomic).abs());
        }
        assert!(
            errors.windows(2).all(|p| p[1] < p[0]),
            "rounded-to-atomic errors must decrease: {errors:?}"
        );
    }
}
