use crate::error::{LlbmError, Result};
use crate::linalg;

use super::segment::Segment;
use super::vector::Vector;
use super::zonotope::Zonotope;

/// An orthonormal basis of a subspace of R^n, with deterministic construction:
/// Gram-Schmidt over the standard basis against the fixed directions.
#[derive(Debug, Clone)]
pub struct OrthonormalFrame {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl OrthonormalFrame {
    /// Frame of the hyperplane orthogonal to a segment's direction.
    pub fn perp_of_segment(seg: &Segment) -> Self {
        Self::perp_of_direction(&seg.direction())
    }

    /// Frame of the hyperplane orthogonal to a unit direction.
    pub fn perp_of_direction(dir: &Vector) -> Self {
        let n = dir.dim();
        let fixed = vec![dir.coords().to_vec()];
        let basis = linalg::gram_schmidt_complement(&fixed, n)
            .into_iter()
            .map(Vector::from_raw)
            .collect();
        Self { ambient_dim: n, basis }
    }

    /// Tangent frame of the unit sphere at `u` (the hyperplane `u`-perp).
    pub fn tangent_at(u: &Vector) -> Self {
        Self::perp_of_direction(u)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn subspace_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Embeds subspace coordinates into the ambient space.
    pub fn lift(&self, v: &Vector) -> Vector {
        debug_assert_eq!(v.dim(), self.basis.len());
        let mut out = vec![0.0; self.ambient_dim];
        for (c, b) in v.coords().iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b.coords()) {
                *o += c * x;
            }
        }
        Vector::from_raw(out)
    }

    /// Coordinates of the orthogonal projection of `x` onto the subspace.
    pub fn coords_of(&self, x: &Vector) -> Vector {
        Vector::from_raw(self.basis.iter().map(|b| b.dot(x)).collect())
    }
}

/// Orthogonal projection of a zonotope onto the frame's subspace, expressed in
/// frame coordinates.  Generators parallel to the projection kernel drop out.
pub fn project_zonotope(z: &Zonotope, frame: &OrthonormalFrame) -> Result<Zonotope> {
    if z.dim() != frame.ambient_dim() {
        return Err(LlbmError::DimensionMismatch { expected: frame.ambient_dim(), got: z.dim() });
    }
    let gens = z.generators().iter().map(|g| frame.coords_of(g)).collect();
    Zonotope::new(frame.subspace_dim(), gens)
}

/// `project(Z, I)`: the image of `Z` under projection onto the hyperplane
/// orthogonal to `I`, in the deterministic frame of that hyperplane.
pub fn project(z: &Zonotope, seg: &Segment) -> Result<Zonotope> {
    if z.dim() != seg.dim() {
        return Err(LlbmError::DimensionMismatch { expected: seg.dim(), got: z.dim() });
    }
    project_zonotope(z, &OrthonormalFrame::perp_of_segment(seg))
}
