use crate::error::{LlbmError, Result};
use crate::linalg;

use super::segment::Segment;
use super::vector::Vector;
use super::zonotope::Zonotope;

/// A square linear map with cached determinant.
#[derive(Debug, Clone)]
pub struct LinearMap {
    rows: Vec<Vec<f64>>,
    det: f64,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(LlbmError::InvalidInput("linear map matrix must be square".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LlbmError::InvalidInput("linear map entries must be finite".into()));
        }
        let mut flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let det = linalg::det_in_place(&mut flat, n);
        Ok(Self { rows, det })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(rows).expect("identity is valid")
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        debug_assert_eq!(v.dim(), self.dim());
        Vector::from_raw(self.rows.iter().map(|r| linalg::dot(r, v.coords())).collect())
    }

    pub fn transpose(&self) -> LinearMap {
        let n = self.dim();
        let rows = (0..n).map(|i| (0..n).map(|j| self.rows[j][i]).collect()).collect();
        LinearMap::new(rows).expect("transpose of a valid map is valid")
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<LinearMap> {
        let n = self.dim();
        let mut a: Vec<Vec<f64>> = self.rows.clone();
        let mut inv: Vec<Vec<f64>> = LinearMap::identity(n).rows;
        let scale = a
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        for k in 0..n {
            let (piv, best) = (k..n)
                .map(|i| (i, a[i][k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if best <= 1e-12 * scale {
                return Err(LlbmError::InvalidInput("linear map is not invertible".into()));
            }
            a.swap(k, piv);
            inv.swap(k, piv);
            let d = a[k][k];
            for j in 0..n {
                a[k][j] /= d;
                inv[k][j] /= d;
            }
            for i in 0..n {
                if i != k && a[i][k] != 0.0 {
                    let f = a[i][k];
                    for j in 0..n {
                        a[i][j] -= f * a[k][j];
                        inv[i][j] -= f * inv[k][j];
                    }
                }
            }
        }
        LinearMap::new(inv)
    }
}

/// Image `A(Z)` of a zonotope under an invertible map: generators map through `A`.
pub fn linear_image(z: &Zonotope, map: &LinearMap) -> Result<Zonotope> {
    if z.dim() != map.dim() {
        return Err(LlbmError::DimensionMismatch { expected: map.dim(), got: z.dim() });
    }
    if map.det() == 0.0 {
        return Err(LlbmError::InvalidInput("linear image requires an invertible map".into()));
    }
    let gens = z.generators().iter().map(|g| map.apply(g)).collect();
    Zonotope::new(z.dim(), gens)
}

/// Image of a segment under an invertible map.
pub fn linear_image_segment(seg: &Segment, map: &LinearMap) -> Result<Segment> {
    Segment::new(map.apply(seg.generator()))
}
