//! Mixed volumes, mixed area measures, and functional mixed volumes of
//! origin-symmetric zonotopes, by exact subset enumeration.
//!
//! For zonotopes `Z_i = sum_j [-g_ij, g_ij]` the mixed volume is the
//! multilinear expansion
//! `V(Z_1, ..., Z_n) = (2^n / n!) * sum |det(g_1, ..., g_n)|`
//! over one generator per slot; repeated slots are enumerated once per
//! distinct subset with the ordering multiplicity folded into the factor.

pub mod exact;
pub mod measure;
pub mod oracle;

pub use exact::{mixed_volume_exact, rational_to_f64, zonotope_volume_exact};
pub use measure::{mixed_area_measure, Arithmetic, AtomicMeasure};
pub use oracle::{oracle_mixed_volume, zonogon_area};

use crate::error::{LlbmError, Result};
use crate::geometry::{
    linear_image, project_zonotope, LinearMap, OrthonormalFrame, Segment, TestFunction, Vector,
    Zonotope,
};
use crate::tolerances;

use measure::{det_sum, factorial};

/// A mixed-volume query: `n` slots over a common dimension, stored as
/// (body, multiplicity) groups in first-appearance order.
#[derive(Debug, Clone)]
pub struct MixedVolumeQuery {
    dim: usize,
    groups: Vec<(Zonotope, usize)>,
}

impl MixedVolumeQuery {
    /// Groups an explicit slot list, merging equal bodies.
    pub fn from_slots(slots: &[&Zonotope]) -> Result<Self> {
        if slots.is_empty() {
            return Err(LlbmError::InvalidInput("query needs at least one slot".into()));
        }
        let dim = slots[0].dim();
        let mut groups: Vec<(Zonotope, usize)> = Vec::new();
        for z in slots {
            if z.dim() != dim {
                return Err(LlbmError::DimensionMismatch { expected: dim, got: z.dim() });
            }
            match groups.iter_mut().find(|(b, _)| b == *z) {
                Some((_, k)) => *k += 1,
                None => groups.push(((*z).clone(), 1)),
            }
        }
        Self::from_groups(dim, groups)
    }

    pub fn from_groups(dim: usize, groups: Vec<(Zonotope, usize)>) -> Result<Self> {
        let total: usize = groups.iter().map(|(_, k)| k).sum();
        if total != dim {
            return Err(LlbmError::InvalidInput(format!(
                "query has {total} slots, expected dim = {dim}"
            )));
        }
        for (z, _) in &groups {
            if z.dim() != dim {
                return Err(LlbmError::DimensionMismatch { expected: dim, got: z.dim() });
            }
        }
        Ok(Self { dim, groups })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[(Zonotope, usize)] {
        &self.groups
    }

    pub(crate) fn ref_slots(&self) -> Vec<(&Zonotope, usize)> {
        self.groups.iter().map(|(z, k)| (z, *k)).collect()
    }
}

/// Volume of a zonotope: `2^n * sum_{|S|=n} |det g_S|`.
pub fn zonotope_volume(z: &Zonotope) -> f64 {
    let n = z.dim();
    let sum = det_sum(n, &[(z, n)], n).expect("volume query is always valid");
    // factor = (2^n / n!) * n! = 2^n, kept in this form so that the general
    // mixed-volume factor and the volume factor are literally the same code.
    mixed_volume_factor(n, &[n]) * sum
}

/// Mixed volume of a query by subset-determinant enumeration.
pub fn mixed_volume(q: &MixedVolumeQuery) -> f64 {
    let slots = q.ref_slots();
    let sum = det_sum(q.dim, &slots, q.dim).expect("query validated at construction");
    let mults: Vec<usize> = slots.iter().map(|(_, k)| *k).collect();
    mixed_volume_factor(q.dim, &mults) * sum
}

fn mixed_volume_factor(n: usize, mults: &[usize]) -> f64 {
    let mult_prod: f64 = mults.iter().map(|&k| factorial(k)).product();
    2f64.powi(n as i32) * mult_prod / factorial(n)
}

/// Functional mixed volume `V(f, C_1, ..., C_{n-1}) = (1/n) integral of f`
/// against the atomic mixed area measure of the body slots.
pub fn functional_mixed_volume(
    f: &TestFunction,
    dim: usize,
    slots: &[(&Zonotope, usize)],
) -> Result<f64> {
    if f.dim() != dim {
        return Err(LlbmError::DimensionMismatch { expected: dim, got: f.dim() });
    }
    let m = mixed_area_measure(dim, slots, Arithmetic::Float)?;
    Ok(m.integrate_even(|u| f.eval(u)) / dim as f64)
}

/// As `functional_mixed_volume` but against a premultiplied measure.
pub fn integrate_against(f: &TestFunction, measure: &AtomicMeasure) -> f64 {
    measure.integrate_even(|u| f.eval(u)) / measure.dim() as f64
}

/// Bilinear functional mixed volume `V(f, g, C_1, ..., C_{n-2})`, computed by
/// splitting `g = h_plus - h_minus` into measure slots.
pub fn bilinear_functional_mixed_volume(
    f: &TestFunction,
    g: &TestFunction,
    dim: usize,
    slots: &[(&Zonotope, usize)],
) -> Result<f64> {
    let TestFunction::SupportDiff { plus, minus } = g else {
        return Err(LlbmError::Unsupported(
            "bilinear form requires the second argument to be a support difference".into(),
        ));
    };
    let mut with_plus: Vec<(&Zonotope, usize)> = slots.to_vec();
    let mut with_minus: Vec<(&Zonotope, usize)> = slots.to_vec();
    with_plus.push((plus, 1));
    with_minus.push((minus, 1));
    let vp = if plus.is_origin() { 0.0 } else { functional_mixed_volume(f, dim, &with_plus)? };
    let vm = if minus.is_origin() { 0.0 } else { functional_mixed_volume(f, dim, &with_minus)? };
    Ok(vp - vm)
}

/// Both sides of the projection identity
/// `V(I, C_1, ..., C_{n-1}) = (|I|/n) * V'(P C_1, ..., P C_{n-1})`
/// where `P` projects onto the hyperplane orthogonal to `I` and `V'` is the
/// (n-1)-dimensional mixed volume.
pub fn projection_identity_check(
    seg: &Segment,
    bodies: &[&Zonotope],
) -> Result<(f64, f64)> {
    let n = seg.dim();
    if bodies.len() != n - 1 {
        return Err(LlbmError::InvalidInput(format!(
            "projection identity needs {} bodies, got {}",
            n - 1,
            bodies.len()
        )));
    }
    let seg_z = seg.to_zonotope();
    let mut slots: Vec<&Zonotope> = vec![&seg_z];
    slots.extend(bodies);
    let lhs = mixed_volume(&MixedVolumeQuery::from_slots(&slots)?);
    let frame = OrthonormalFrame::perp_of_segment(seg);
    let projected: Vec<Zonotope> = bodies
        .iter()
        .map(|z| project_zonotope(z, &frame))
        .collect::<Result<_>>()?;
    let prefs: Vec<&Zonotope> = projected.iter().collect();
    let rhs_inner = if n == 1 {
        unreachable!("segments have dim >= 1 and bodies.len() = n-1 >= 0")
    } else {
        mixed_volume(&MixedVolumeQuery::from_slots(&prefs)?)
    };
    Ok((lhs, seg.length() / n as f64 * rhs_inner))
}

/// Both sides of the covariance identity
/// `V(A C_1, ..., A C_n) = |det A| * V(C_1, ..., C_n)`.
pub fn covariance_check(map: &LinearMap, q: &MixedVolumeQuery) -> Result<(f64, f64)> {
    if map.dim() != q.dim() {
        return Err(LlbmError::DimensionMismatch { expected: q.dim(), got: map.dim() });
    }
    let mapped: Vec<(Zonotope, usize)> = q
        .groups()
        .iter()
        .map(|(z, k)| Ok((linear_image(z, map)?, *k)))
        .collect::<Result<_>>()?;
    let lhs = mixed_volume(&MixedVolumeQuery::from_groups(q.dim(), mapped)?);
    let rhs = map.det().abs() * mixed_volume(q);
    Ok((lhs, rhs))
}

/// Support values `h_K` must stay strictly positive where a measure divides by
/// them; guards `f^2 / h_K` style integrands.
pub fn guarded_support(z: &Zonotope, u: &Vector) -> Result<f64> {
    let h = z.support(u);
    if h <= tolerances::SUPPORT_POSITIVE {
        return Err(LlbmError::DegenerateBody(format!(
            "support vanishes at a measure atom (h = {h:.3e}); body is degenerate there"
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn hexagon() -> Zonotope {
        Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap()
    }

    #[test]
    fn cube_volumes() {
        for n in 1..=5usize {
            let c = Zonotope::cube(n);
            assert_eq!(zonotope_volume(&c), 2f64.powi(n as i32), "n = {n}");
        }
    }

    #[test]
    fn hexagon_volume_is_twelve() {
        // 4 * (|det(e1,e2)| + |det(e1,(1,1))| + |det(e2,(1,1))|) = 4 * 3.
        assert_eq!(zonotope_volume(&hexagon()), 12.0);
    }

    #[test]
    fn unit_cross_segments_mixed_volume() {
        // V([-e1,e1], [-e2,e2]) = 2 in the plane.
        let i1 = Zonotope::new(2, vec![v(&[1.0, 0.0])]).unwrap();
        let i2 = Zonotope::new(2, vec![v(&[0.0, 1.0])]).unwrap();
        let q = MixedVolumeQuery::from_slots(&[&i1, &i2]).unwrap();
        assert_eq!(mixed_volume(&q), 2.0);
    }

    #[test]
    fn mixed_volume_with_all_slots_equal_is_volume() {
        let z = hexagon();
        let q = MixedVolumeQuery::from_slots(&[&z, &z]).unwrap();
        assert_eq!(mixed_volume(&q), zonotope_volume(&z));
    }

    #[test]
    fn functional_mixed_volume_of_support_recovers_mixed_volume() {
        let z = hexagon();
        let k = Zonotope::cube(2);
        let f = TestFunction::support_of(&z);
        let via_fn = functional_mixed_volume(&f, 2, &[(&k, 1)]).unwrap();
        let q = MixedVolumeQuery::from_slots(&[&k, &z]).unwrap();
        let direct = mixed_volume(&q);
        assert!((via_fn - direct).abs() < 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn volume_equals_support_integral_against_own_measure() {
        // vol(K) = (1/n) integral h_K dS_{K[n-1]}.
        let z = Zonotope::new(
            3,
            vec![v(&[1.0, 0.2, 0.0]), v(&[0.0, 1.0, -0.4]), v(&[0.3, 0.0, 1.0]), v(&[1.0, 1.0, 1.0])],
        )
        .unwrap();
        let f = TestFunction::support_of(&z);
        let lhs = functional_mixed_volume(&f, 3, &[(&z, 2)]).unwrap();
        let rhs = zonotope_volume(&z);
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn projection_identity_on_the_cube() {
        // V(I, C, C) with C = [-1,1]^3, I = [-e3, e3]: (2/3) * area([-1,1]^2) / 2... = 8/3.
        let c = Zonotope::cube(3);
        let seg = Segment::new(v(&[0.0, 0.0, 1.0])).unwrap();
        let (lhs, rhs) = projection_identity_check(&seg, &[&c, &c]).unwrap();
        assert!((lhs - 8.0 / 3.0).abs() < 1e-14, "lhs = {lhs}");
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn covariance_identity_under_scaling() {
        let c = Zonotope::cube(2);
        let map = LinearMap::new(vec![vec![3.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let q = MixedVolumeQuery::from_slots(&[&c, &c]).unwrap();
        let (lhs, rhs) = covariance_check(&map, &q).unwrap();
        assert_eq!(lhs, 36.0);
        assert_eq!(rhs, 36.0);
    }

    #[test]
    fn permutation_of_slots_is_exact_in_query_form() {
        let a = hexagon();
        let b = Zonotope::cube(2);
        let q1 = MixedVolumeQuery::from_slots(&[&a, &b]).unwrap();
        let q2 = MixedVolumeQuery::from_slots(&[&b, &a]).unwrap();
        // Grouping sorts by first appearance; both orders must agree tightly.
        let v1 = mixed_volume(&q1);
        let v2 = mixed_volume(&q2);
        assert!((v1 - v2).abs() <= 1e-12 * v1.abs());
    }
}
