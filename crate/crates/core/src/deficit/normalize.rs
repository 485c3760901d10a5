//! Shift normalization `f -> f - c h_K`.
//!
//! The deficit is invariant under `f -> f + c h_K` for every constant `c`
//! (the quadratic form annihilates the support function of the body
//! itself).  Along a segment extension `K_t = (K div I) + t I` the
//! derivative of the deficit contains a square term
//!
//! ```text
//! -n V(K[n-1], I) * ( V(K[n-1], f)/Vol(K)
//!                     - (n-1)/n * V(K[n-2], I, f) / V(K[n-1], I) )^2
//! ```
//!
//! and the shift constant chosen here makes the bracket vanish, so the
//! derivative of the shifted deficit is a sum of two nonnegative terms.

use crate::engine::{
    functional_mixed_volume, integrate_against, mixed_area_measure, zonotope_volume, Arithmetic,
};
use crate::error::{LlbmError, Result};
use crate::geometry::{Segment, TestFunction, Zonotope};

/// The bracket-killing constant
/// `c = n V(K[n-1], f)/Vol(K) - (n-1) V(K[n-2], I, f) / V(K[n-1], I)`.
pub fn normalization_constant(k: &Zonotope, seg: &Segment, f: &TestFunction) -> Result<f64> {
    let n = k.dim();
    if n < 2 {
        return Err(LlbmError::InvalidInput(
            "normalization along a segment needs dimension >= 2".into(),
        ));
    }
    if seg.dim() != n || f.dim() != n {
        return Err(LlbmError::DimensionMismatch { expected: n, got: seg.dim().min(f.dim()) });
    }
    if !k.is_full_dimensional() {
        return Err(LlbmError::DegenerateBody(
            "normalization divides by the volume, which is zero here".into(),
        ));
    }
    let vol = zonotope_volume(k);
    let measure = mixed_area_measure(n, &[(k, n - 1)], Arithmetic::Float)?;
    let v_f = integrate_against(f, &measure);
    let v_i = measure.integrate_even(|u| seg.support(u)) / n as f64;
    if v_i <= 0.0 {
        return Err(LlbmError::DegenerateBody(
            "mixed volume with the segment slot vanishes".into(),
        ));
    }
    let seg_z = seg.to_zonotope();
    let mut slots: Vec<(&Zonotope, usize)> = if n >= 3 { vec![(k, n - 2)] } else { vec![] };
    slots.push((&seg_z, 1));
    let w = functional_mixed_volume(f, n, &slots)?;
    Ok(n as f64 * v_f / vol - (n - 1) as f64 * w / v_i)
}

/// The constant together with the shifted function `f - c h_K`.
pub fn normalized_function(
    k: &Zonotope,
    seg: &Segment,
    f: &TestFunction,
) -> Result<(f64, TestFunction)> {
    let c = normalization_constant(k, seg, f)?;
    let shifted = f.shifted(c, k)?;
    Ok((c, shifted))
}
