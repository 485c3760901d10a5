use crate::error::{LlbmError, Result};
use crate::linalg;
use crate::tolerances;

use super::segment::Segment;
use super::vector::Vector;

/// An origin-symmetric zonotope `Z = sum_i [-g_i, g_i]`.
///
/// The generator list is kept canonical:
/// - no zero generators (norm <= `ZERO_GENERATOR` is dropped),
/// - every generator sign-canonical (first significant coordinate positive),
/// - no two parallel generators (parallel classes merged by norm addition,
///   keeping the direction of the longest member),
/// - sorted lexicographically by coordinates.
///
/// Two zonotopes constructed from generator lists describing the same body in
/// different order or sign therefore compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Vector>,
    full_dimensional: bool,
}

impl Zonotope {
    /// Builds a zonotope from raw generators, canonicalizing the list.
    /// An empty list is legal and denotes the degenerate body `{0}`.
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(LlbmError::InvalidInput("dimension must be >= 1".into()));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(LlbmError::DimensionMismatch { expected: dim, got: g.dim() });
            }
        }
        let generators = canonicalize(generators);
        let full_dimensional = rank(&generators, dim) == dim;
        Ok(Self { dim, generators, full_dimensional })
    }

    /// The cube `[-1, 1]^n` (standard basis generators).
    pub fn cube(dim: usize) -> Self {
        let gens = (0..dim).map(|i| Vector::basis(dim, i)).collect();
        Self::new(dim, gens).expect("cube generators are valid")
    }

    /// The degenerate slab `[-1, 1]^(n-1) x {0}` in R^n.
    pub fn slab(dim: usize) -> Self {
        let gens = (0..dim - 1).map(|i| Vector::basis(dim, i)).collect();
        Self::new(dim, gens).expect("slab generators are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full_dimensional
    }

    pub fn is_origin(&self) -> bool {
        self.generators.is_empty()
    }

    /// Support function `h_Z(u) = sum_i |<g_i, u>|`.
    pub fn support(&self, u: &Vector) -> f64 {
        self.generators.iter().map(|g| g.dot(u).abs()).sum()
    }

    /// Minkowski sum: concatenation of generator lists, re-canonicalized.
    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Zonotope> {
        if self.dim != other.dim {
            return Err(LlbmError::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Zonotope::new(self.dim, gens)
    }

    /// `Z + I` for a segment summand.
    pub fn add_segment(&self, seg: &Segment) -> Result<Zonotope> {
        self.minkowski_sum(&seg.to_zonotope())
    }

    /// Dilation by `|c|` (the body is origin-symmetric, so `-c Z = c Z`).
    pub fn scaled(&self, c: f64) -> Zonotope {
        let c = c.abs();
        let gens = self.generators.iter().map(|g| g.scaled(c)).collect();
        Zonotope::new(self.dim, gens).expect("scaling preserves validity")
    }

    /// Structural Minkowski difference path: returns `(Z - I) + t I`, realized
    /// by shrinking the unique generator parallel to `I` by `(1 - t) ||g_I||`.
    ///
    /// Errors when no generator of `Z` is parallel to `I`, or the parallel
    /// generator is too short for the requested `t`.
    pub fn minkowski_diff_summand(&self, seg: &Segment, t: f64) -> Result<Zonotope> {
        if self.dim != seg.dim() {
            return Err(LlbmError::DimensionMismatch { expected: self.dim, got: seg.dim() });
        }
        if !(0.0..=1.0 + 1e-12).contains(&t) {
            return Err(LlbmError::InvalidInput(format!(
                "interpolation parameter t = {t} outside [0, 1]"
            )));
        }
        let dir = seg.direction();
        let j = self
            .generators
            .iter()
            .position(|g| {
                let u = g.normalized().expect("canonical generators are nonzero");
                1.0 - u.dot(&dir).powi(2) < tolerances::PARALLEL_MERGE && u.dot(&dir) > 0.0
            })
            .ok_or_else(|| {
                LlbmError::NotASummand("no generator parallel to the segment".into())
            })?;
        let g = &self.generators[j];
        let remove = (1.0 - t) * seg.generator().norm();
        let new_norm = g.norm() - remove;
        if new_norm < -tolerances::ZERO_GENERATOR {
            return Err(LlbmError::NotASummand(format!(
                "parallel generator has norm {:.6e} < required {:.6e}",
                g.norm(),
                remove
            )));
        }
        let mut gens: Vec<Vector> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, g)| g.clone())
            .collect();
        if new_norm > tolerances::ZERO_GENERATOR {
            let u = g.normalized().expect("nonzero");
            gens.push(u.scaled(new_norm));
        }
        Zonotope::new(self.dim, gens)
    }

    /// True when `minkowski_diff_summand(seg, 0)` would succeed.
    pub fn has_summand(&self, seg: &Segment) -> bool {
        self.minkowski_diff_summand(seg, 0.0).is_ok()
    }
}

fn canonicalize(generators: Vec<Vector>) -> Vec<Vector> {
    // Drop zeros, canonicalize signs.
    let mut gens: Vec<Vector> = Vec::with_capacity(generators.len());
    for g in generators {
        if g.norm() <= tolerances::ZERO_GENERATOR {
            continue;
        }
        let mut coords = g.coords().to_vec();
        linalg::canonicalize_sign(&mut coords);
        gens.push(Vector::from_raw(coords));
    }
    // Merge parallel classes: direction of the longest member, norms added.
    let mut classes: Vec<(Vector, f64, f64)> = Vec::new(); // (unit dir of longest, longest norm, total norm)
    'outer: for g in gens {
        let n = g.norm();
        let u = g.scaled(1.0 / n);
        for (dir, longest, total) in classes.iter_mut() {
            let c = u.dot(dir);
            if c > 0.0 && 1.0 - c * c < tolerances::PARALLEL_MERGE {
                *total += n;
                if n > *longest {
                    *longest = n;
                    *dir = u;
                }
                continue 'outer;
            }
        }
        classes.push((u, n, n));
    }
    let mut out: Vec<Vector> = classes
        .into_iter()
        .map(|(dir, _, total)| dir.scaled(total))
        .collect();
    out.sort_by(|a, b| {
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Numerical rank of the generator set (modified Gram-Schmidt with
/// re-orthogonalization, threshold relative to the largest norm).
fn rank(generators: &[Vector], dim: usize) -> usize {
    let max_norm = generators.iter().map(|g| g.norm()).fold(0.0f64, f64::max);
    if max_norm == 0.0 {
        return 0;
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for g in generators {
        if basis.len() == dim {
            break;
        }
        let mut v = g.coords().to_vec();
        for _ in 0..2 {
            for b in &basis {
                let p = linalg::dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let n = linalg::norm(&v);
        if n > tolerances::RANK_REL * max_norm {
            for x in v.iter_mut() {
                *x /= n;
            }
            basis.push(v);
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form_merges_parallel_and_sorts() {
        // (2,0) and (-1,0) describe parallel segments; they merge to (3,0).
        let z = Zonotope::new(2, vec![v(&[2.0, 0.0]), v(&[-1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert_eq!(z.generators().len(), 2);
        let z2 = Zonotope::new(2, vec![v(&[0.0, 1.0]), v(&[3.0, 0.0])]).unwrap();
        assert_eq!(z, z2);
    }

    #[test]
    fn support_is_sum_of_absolute_projections() {
        let z = Zonotope::cube(3);
        let u = v(&[1.0, -2.0, 0.5]);
        assert_eq!(z.support(&u), 3.5);
    }

    #[test]
    fn sum_then_diff_roundtrip() {
        let z = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        let seg = Segment::new(v(&[0.5, 0.5])).unwrap();
        let sum = z.add_segment(&seg).unwrap();
        // (1,1) and (0.5,0.5) merge into one generator of norm 1.5*sqrt(2).
        assert_eq!(sum.generators().len(), 2);
        let back = sum.minkowski_diff_summand(&seg, 0.0).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn diff_rejects_non_summand() {
        let z = Zonotope::cube(2);
        let seg = Segment::new(v(&[1.0, 1.0])).unwrap();
        assert!(matches!(
            z.minkowski_diff_summand(&seg, 0.0),
            Err(LlbmError::NotASummand(_))
        ));
    }

    #[test]
    fn cube_minus_axis_segment_leaves_slab() {
        let z = Zonotope::cube(2);
        let seg = Segment::new(v(&[1.0, 0.0])).unwrap();
        let d = z.minkowski_diff_summand(&seg, 0.0).unwrap();
        assert_eq!(d.generators().len(), 1);
        assert!(!d.is_full_dimensional());
        assert_eq!(d.generators()[0].coords(), &[0.0, 1.0]);
    }

    #[test]
    fn degenerate_and_full_dimensional_flags() {
        assert!(Zonotope::cube(3).is_full_dimensional());
        assert!(!Zonotope::slab(3).is_full_dimensional());
        assert!(Zonotope::new(2, vec![]).unwrap().is_origin());
    }
}
