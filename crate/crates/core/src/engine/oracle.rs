//! Independent oracle for mixed volumes of zonotope pairs.
//!
//! The determinant-sum engine is cross-checked against a method that never
//! enumerates generator subsets: the volume of `t1*Z1 + t2*Z2` is a
//! homogeneous polynomial of degree n in `(t1, t2)` whose coefficients are
//! binomially weighted mixed volumes.  Sampling the volume on a grid of
//! scale pairs and solving the resulting least-squares system recovers every
//! mixed volume `V(Z1[k], Z2[n-k])` at once.  In the plane the sampled
//! volumes themselves are verified against a shoelace area computed from an
//! explicit vertex walk, so the oracle is independent of the engine down to
//! polygon geometry.

use crate::engine::zonotope_volume;
use crate::error::{LlbmError, Result};
use crate::geometry::{Vector, Zonotope};
use crate::linalg::least_squares;
use crate::tolerances;

/// Mixed volume `V(Z1[k1], Z2[k2])` (with `k1 + k2 = n`) recovered from a
/// polynomial fit of `Vol(t1*Z1 + t2*Z2)` over a grid of scale pairs.
///
/// Fails with `OracleUnreliable` when the fit's condition estimate exceeds
/// the configured limit, and with `SelfCheck` when the fit residual is not
/// at rounding level or (in the plane) a sampled volume disagrees with the
/// shoelace area of the corresponding polygon.
pub fn oracle_mixed_volume(z1: &Zonotope, z2: &Zonotope, k1: usize, k2: usize) -> Result<f64> {
    let n = z1.dim();
    if z2.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: z2.dim() });
    }
    if k1 + k2 != n {
        return Err(LlbmError::InvalidInput(format!(
            "slot counts {k1}+{k2} must sum to the dimension {n}"
        )));
    }
    let side = n + 1; // grid side; also the number of polynomial coefficients
    let scale = 1.0 / side as f64;
    let rows = side * side;
    let mut a = vec![0.0; rows * side];
    let mut b = vec![0.0; rows];
    let mut row = 0;
    for i in 1..=side {
        for j in 1..=side {
            let t1 = i as f64 * scale;
            let t2 = j as f64 * scale;
            let body = scaled_sum(z1, t1, z2, t2)?;
            let vol = zonotope_volume(&body);
            if n == 2 {
                let area = zonogon_area(&body)?;
                let tol = tolerances::SHOELACE_REL * vol.abs().max(1.0);
                if (area - vol).abs() > tol {
                    return Err(LlbmError::SelfCheck(format!(
                        "shoelace area {area} vs determinant volume {vol} at scales ({t1},{t2})"
                    )));
                }
            }
            b[row] = vol;
            for (col, entry) in monomials(t1, t2, n).into_iter().enumerate() {
                a[row * side + col] = entry;
            }
            row += 1;
        }
    }
    let (coeffs, residual, cond) = least_squares(&a, rows, side, &b);
    if !cond.is_finite() || cond > tolerances::ORACLE_COND_LIMIT {
        return Err(LlbmError::OracleUnreliable { cond, limit: tolerances::ORACLE_COND_LIMIT });
    }
    let b_norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if residual > 1e-9 * (b_norm + 1.0) {
        return Err(LlbmError::SelfCheck(format!(
            "volume polynomial fit residual {residual:.3e} exceeds rounding level \
             (rhs norm {b_norm:.3e}); the sampled volumes are not degree-{n} homogeneous"
        )));
    }
    // Column j carries t1^(n-j) t2^j, i.e. binomial(n, j) * V(Z1[n-j], Z2[j]).
    Ok(coeffs[k2] / binomial(n, k2))
}

/// `[t1^n, t1^(n-1)*t2, ..., t2^n]` — the degree-n monomial basis row.
fn monomials(t1: f64, t2: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|j| t1.powi((n - j) as i32) * t2.powi(j as i32)).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn scaled_sum(z1: &Zonotope, t1: f64, z2: &Zonotope, t2: f64) -> Result<Zonotope> {
    let mut gens: Vec<Vector> = z1.generators().iter().map(|g| g.scaled(t1)).collect();
    gens.extend(z2.generators().iter().map(|g| g.scaled(t2)));
    Zonotope::new(z1.dim(), gens)
}

/// Area of a planar zonotope computed from an explicit vertex walk.
///
/// Each generator is oriented into the closed upper half-plane; sorting the
/// oriented generators by angle and walking edge vectors `2*g` from the
/// lowest vertex `-sum(g)` traces the right half of the boundary, and central
/// symmetry supplies the left half.  The shoelace formula then gives the
/// area with no determinant enumeration.
pub fn zonogon_area(z: &Zonotope) -> Result<f64> {
    if z.dim() != 2 {
        return Err(LlbmError::DimensionMismatch { expected: 2, got: z.dim() });
    }
    let mut oriented: Vec<[f64; 2]> = z
        .generators()
        .iter()
        .map(|g| {
            let (x, y) = (g[0], g[1]);
            if y > 0.0 || (y == 0.0 && x > 0.0) {
                [x, y]
            } else {
                [-x, -y]
            }
        })
        .collect();
    oriented.sort_by(|p, q| {
        let ang = |v: &[f64; 2]| v[1].atan2(v[0]); // in [0, pi] after orientation
        ang(p).total_cmp(&ang(q))
    });
    let start = oriented.iter().fold([0.0, 0.0], |acc, g| [acc[0] - g[0], acc[1] - g[1]]);
    let mut verts: Vec<[f64; 2]> = Vec::with_capacity(2 * oriented.len() + 2);
    verts.push(start);
    let mut cur = start;
    for g in &oriented {
        cur = [cur[0] + 2.0 * g[0], cur[1] + 2.0 * g[1]];
        verts.push(cur);
    }
    // cur is now +sum(g); mirror the walked chain (excluding both poles)
    // through the origin to close the polygon.
    let half = verts.len();
    for i in 1..half - 1 {
        let p = verts[i];
        verts.push([-p[0], -p[1]]);
    }
    let mut twice_area = 0.0;
    for i in 0..verts.len() {
        let p = verts[i];
        let q = verts[(i + 1) % verts.len()];
        twice_area += p[0] * q[1] - p[1] * q[0];
    }
    Ok(0.5 * twice_area.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{mixed_volume, MixedVolumeQuery};
    use crate::geometry::Segment;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn shoelace_square_and_hexagon() {
        let c = Zonotope::cube(2);
        assert!((zonogon_area(&c).unwrap() - 4.0).abs() < 1e-14);
        let hex = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        // Determinant sum: 4*(1 + 1 + 1) = 12.
        assert!((zonogon_area(&hex).unwrap() - 12.0).abs() < 1e-13);
    }

    #[test]
    fn shoelace_handles_horizontal_and_parallel_generators() {
        let z = Zonotope::new(2, vec![v(&[2.0, 0.0]), v(&[-1.0, 1.0]), v(&[0.0, 0.5])]).unwrap();
        let vol = zonotope_volume(&z);
        assert!((zonogon_area(&z).unwrap() - vol).abs() < 1e-13 * vol);
    }

    #[test]
    fn oracle_recovers_plane_mixed_volume() {
        let z1 = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let z2 = Zonotope::new(2, vec![v(&[1.0, 1.0])]).unwrap();
        // V(Z1, Z2) = (2^2/2!) * (|det(e1,g)| + |det(e2,g)|) * 1 = 2*(1+1) = 4.
        let got = oracle_mixed_volume(&z1, &z2, 1, 1).unwrap();
        assert!((got - 4.0).abs() < 1e-9, "got {got}");
        let q = MixedVolumeQuery::from_groups(
            2,
            vec![(z1.clone(), 1), (z2.clone(), 1)],
        )
        .unwrap();
        let engine = mixed_volume(&q);
        assert!((got - engine).abs() < 1e-9 * engine.abs().max(1.0));
    }

    #[test]
    fn oracle_agrees_with_engine_in_dims_up_to_four() {
        for n in 2..=4 {
            let z1 = Zonotope::cube(n);
            let mut gens = Vec::new();
            for i in 0..n {
                let mut c = vec![0.25; n];
                c[i] = 1.0 + 0.5 * i as f64;
                gens.push(v(&c));
            }
            let z2 = Zonotope::new(n, gens).unwrap();
            for k2 in 0..=n {
                let k1 = n - k2;
                let got = oracle_mixed_volume(&z1, &z2, k1, k2).unwrap();
                let mut groups = Vec::new();
                if k1 > 0 {
                    groups.push((z1.clone(), k1));
                }
                if k2 > 0 {
                    groups.push((z2.clone(), k2));
                }
                let engine =
                    mixed_volume(&MixedVolumeQuery::from_groups(n, groups).unwrap());
                let tol = 1e-8 * engine.abs().max(1.0);
                assert!(
                    (got - engine).abs() <= tol,
                    "n={n} k2={k2}: oracle {got} engine {engine}"
                );
            }
        }
    }

    #[test]
    fn oracle_covers_pure_volume_endpoints() {
        let s1 = Segment::new(v(&[1.5, 0.0])).unwrap().to_zonotope();
        let s2 = Segment::new(v(&[0.5, 2.0])).unwrap().to_zonotope();
        // k2 = 0 recovers Vol(Z1) = 0 for a segment; the fit must return ~0.
        let got = oracle_mixed_volume(&s1, &s2, 2, 0).unwrap();
        assert!(got.abs() < 1e-10, "got {got}");
        // V(I1, I2) = 2 * |det(g1, g2)| = 2 * 3 = 6.
        let got = oracle_mixed_volume(&s1, &s2, 1, 1).unwrap();
        assert!((got - 6.0).abs() < 1e-9, "got {got}");
    }
}
