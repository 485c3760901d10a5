//! Real orthonormal spherical harmonics on `S^1` and `S^2`.
//!
//! Only even degrees are useful here (they give even functions on the
//! sphere), but the evaluators themselves work for any degree.
//!
//! * Circle (`dim == 2`): degree `l`, order `m = 0` selects `cos(l*theta)`,
//!   any other `m` selects `sin(l*theta)`, both scaled to unit `L^2` norm.
//! * Sphere (`dim == 3`): the standard real basis built from associated
//!   Legendre functions, `m in -l..=l`, unit `L^2` norm.

use serde::{Deserialize, Serialize};

use crate::error::{LlbmError, Result};

/// One spherical-harmonic term `coeff * Y_{l,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Harmonic {
    pub l: u32,
    #[serde(default)]
    pub m: i32,
    pub coeff: f64,
}

impl Harmonic {
    /// Validates a term for use as an even support perturbation.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.l % 2 != 0 {
            return Err(LlbmError::InvalidInput(format!(
                "harmonic degree must be even to keep the body origin-symmetric, got l={}",
                self.l
            )));
        }
        if self.l > 6 {
            return Err(LlbmError::InvalidInput(format!(
                "harmonic degree is capped at 6, got l={}",
                self.l
            )));
        }
        if dim == 3 && self.m.unsigned_abs() > self.l {
            return Err(LlbmError::InvalidInput(format!(
                "harmonic order |m| must not exceed the degree, got l={} m={}",
                self.l, self.m
            )));
        }
        if !self.coeff.is_finite() {
            return Err(LlbmError::InvalidInput("harmonic coefficient must be finite".into()));
        }
        Ok(())
    }
}

/// Evaluates the real orthonormal harmonic `Y_{l,m}` at the unit vector `u`
/// (length `dim` = 2 or 3).
pub fn eval(dim: usize, l: u32, m: i32, u: &[f64]) -> f64 {
    match dim {
        2 => {
            let theta = u[1].atan2(u[0]);
            if l == 0 {
                1.0 / (std::f64::consts::TAU).sqrt()
            } else if m == 0 {
                (l as f64 * theta).cos() / std::f64::consts::PI.sqrt()
            } else {
                (l as f64 * theta).sin() / std::f64::consts::PI.sqrt()
            }
        }
        3 => {
            let x = u[2].clamp(-1.0, 1.0);
            let phi = u[1].atan2(u[0]);
            let ma = m.unsigned_abs();
            let p = assoc_legendre(l, ma, x);
            let norm = normalization(l, ma);
            if m == 0 {
                norm * p
            } else if m > 0 {
                std::f64::consts::SQRT_2 * norm * p * (ma as f64 * phi).cos()
            } else {
                std::f64::consts::SQRT_2 * norm * p * (ma as f64 * phi).sin()
            }
        }
        _ => unreachable!("harmonics are only defined for dimensions 2 and 3"),
    }
}

/// `sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)`.
fn normalization(l: u32, m: u32) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * ratio).sqrt()
}

/// Associated Legendre `P_l^m(x)` (no Condon-Shortley phase removed; the
/// standard `(-1)^m` convention is kept and absorbed by the coefficient).
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= l);
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^(m/2)
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    // P_{m+1}^m = x (2m+1) P_m^m
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::quadrature::QuadratureGrid;

    #[test]
    fn sphere_harmonics_are_orthonormal_on_the_grid() {
        let grid = QuadratureGrid::sphere(32, 64).unwrap();
        let basis: Vec<(u32, i32)> =
            vec![(0, 0), (2, 0), (2, 1), (2, -2), (4, 0), (4, 3), (6, -5), (6, 6)];
        for (i, &(l1, m1)) in basis.iter().enumerate() {
            for &(l2, m2) in &basis[i..] {
                let ip = grid.integrate(|u| eval(3, l1, m1, u.coords()) * eval(3, l2, m2, u.coords()));
                let expected = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!(
                    (ip - expected).abs() < 1e-12,
                    "<Y_{l1}^{m1}, Y_{l2}^{m2}> = {ip}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn circle_harmonics_are_orthonormal_on_the_grid() {
        let grid = QuadratureGrid::circle(64).unwrap();
        let basis: Vec<(u32, i32)> = vec![(0, 0), (2, 0), (2, 1), (4, 0), (6, 1)];
        for (i, &(l1, m1)) in basis.iter().enumerate() {
            for &(l2, m2) in &basis[i..] {
                let ip = grid.integrate(|u| eval(2, l1, m1, u.coords()) * eval(2, l2, m2, u.coords()));
                let expected = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12, "({l1},{m1})x({l2},{m2}) = {ip}");
            }
        }
    }

    #[test]
    fn even_degrees_give_even_functions() {
        let u = [0.48, -0.6, 0.64];
        let neg = [-0.48, 0.6, -0.64];
        for &(l, m) in &[(2u32, 1i32), (4, -2), (6, 5)] {
            let a = eval(3, l, m, &u);
            let b = eval(3, l, m, &neg);
            // The azimuth flips by exactly pi mathematically; numerically the
            // two angle evaluations differ at rounding level.
            assert!((a - b).abs() <= 1e-14 * (a.abs() + 1.0), "({l},{m}): {a} vs {b}");
        }
    }

    #[test]
    fn known_value_y20_at_the_pole() {
        // Y_2^0(north pole) = sqrt(5/(4 pi)).
        let v = eval(3, 2, 0, &[0.0, 0.0, 1.0]);
        assert!((v - (5.0 / (4.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn odd_degree_rejected_for_bodies() {
        assert!(Harmonic { l: 3, m: 0, coeff: 0.1 }.validate(3).is_err());
        assert!(Harmonic { l: 8, m: 0, coeff: 0.1 }.validate(3).is_err());
        assert!(Harmonic { l: 4, m: 5, coeff: 0.1 }.validate(3).is_err());
        assert!(Harmonic { l: 4, m: -4, coeff: 0.1 }.validate(3).is_ok());
    }
}
