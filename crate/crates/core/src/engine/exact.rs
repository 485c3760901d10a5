//! Exact rational evaluation of zonotope volumes and mixed volumes.
//!
//! Every `f64` generator coordinate is a dyadic rational, so the determinant
//! sums defining these quantities are exact rational numbers.  This module
//! re-runs the same grouped subset enumeration as the floating-point engine
//! but accumulates `BigRational` determinants, giving a roundoff-free
//! reference value for cross-checking the float path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::engine::measure::{for_each_selection, validate_slots};
use crate::engine::MixedVolumeQuery;
use crate::error::Result;
use crate::geometry::Zonotope;
use crate::linalg::det_exact;

/// Volume of an origin-symmetric zonotope as an exact rational:
/// `2^n` times the sum of `|det|` over all n-subsets of generators.
pub fn zonotope_volume_exact(z: &Zonotope) -> Result<BigRational> {
    let n = z.dim();
    mixed_volume_exact(&MixedVolumeQuery::from_groups(n, vec![(z.clone(), n)])?)
}

/// Mixed volume of the query's bodies as an exact rational, using the same
/// grouped enumeration as the float engine with the prefactor
/// `2^n * (prod of multiplicity factorials) / n!`.
pub fn mixed_volume_exact(q: &MixedVolumeQuery) -> Result<BigRational> {
    let n = q.dim();
    let slots = q.ref_slots();
    validate_slots(n, &slots, n)?;
    let mut acc = BigRational::zero();
    for_each_selection(&slots, n, |flat| {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect();
        acc += det_exact(&rows).abs();
    });
    let mut factor = BigRational::from_integer(BigInt::one() << n);
    for (_, k) in &slots {
        factor *= BigRational::from_integer(factorial_big(*k));
    }
    factor /= BigRational::from_integer(factorial_big(n));
    Ok(acc * factor)
}

/// Nearest `f64` to an exact rational (for tolerance comparisons and reports).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn factorial_big(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{mixed_volume, zonotope_volume};
    use crate::geometry::{Segment, Vector, Zonotope};

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn cube_volume_is_exactly_two_to_the_n() {
        for n in 1..=5 {
            let c = Zonotope::cube(n);
            let exact = zonotope_volume_exact(&c).unwrap();
            let want = BigRational::from_integer(BigInt::one() << n);
            assert_eq!(exact, want, "dim {n}");
        }
    }

    #[test]
    fn exact_matches_float_on_dyadic_generators() {
        // Coordinates chosen as exact dyadics so the float engine is also
        // exact up to its own rounding; values must agree to ~1e-15 rel.
        let z = Zonotope::new(
            3,
            vec![
                v(&[1.0, 0.25, -0.5]),
                v(&[0.0, 1.5, 0.75]),
                v(&[-0.125, 0.0, 2.0]),
                v(&[0.5, 0.5, 0.5]),
            ],
        )
        .unwrap();
        let exact = rational_to_f64(&zonotope_volume_exact(&z).unwrap());
        let float = zonotope_volume(&z);
        assert!(
            (exact - float).abs() <= 1e-13 * exact.abs().max(1.0),
            "exact {exact} vs float {float}"
        );
    }

    #[test]
    fn exact_mixed_volume_of_orthogonal_segments() {
        // V([-e1,e1], [-e2,e2]) in the plane = (2^2/2!) * |det I| * 1!1! = 2.
        let s1 = Segment::new(v(&[1.0, 0.0])).unwrap().to_zonotope();
        let s2 = Segment::new(v(&[0.0, 1.0])).unwrap().to_zonotope();
        let q = MixedVolumeQuery::from_slots(&[&s1, &s2]).unwrap();
        assert_eq!(
            mixed_volume_exact(&q).unwrap(),
            BigRational::from_integer(BigInt::from(2))
        );
    }

    #[test]
    fn exact_mixed_volume_matches_float_with_repeats() {
        let z1 = Zonotope::new(
            3,
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0]), v(&[1.0, 1.0, 1.0])],
        )
        .unwrap();
        let z2 = Zonotope::new(3, vec![v(&[0.5, -0.25, 0.0]), v(&[0.0, 0.75, 1.25])]).unwrap();
        let q = MixedVolumeQuery::from_groups(3, vec![(z1, 2), (z2, 1)]).unwrap();
        let exact = rational_to_f64(&mixed_volume_exact(&q).unwrap());
        let float = mixed_volume(&q);
        assert!(
            (exact - float).abs() <= 1e-13 * exact.abs().max(1.0),
            "exact {exact} vs float {float}"
        );
    }
}
