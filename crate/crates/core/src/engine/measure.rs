use crate::error::{LlbmError, Result};
use crate::geometry::{Vector, Zonotope};
use crate::linalg;
use crate::tolerances;

/// A finite even measure on the sphere, stored one atom per antipodal pair.
///
/// The stored direction is the sign-canonical member of the pair and the mass
/// is the mass of that single atom; integration of an even function counts the
/// pair as `2 * mass * f(u)`.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    dim: usize,
    atoms: Vec<(Vector, f64)>,
}

impl AtomicMeasure {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Atoms as (canonical unit direction, pair mass).
    pub fn atoms(&self) -> &[(Vector, f64)] {
        &self.atoms
    }

    /// Integral of an even function against the full +/- expansion.
    pub fn integrate_even<F: FnMut(&Vector) -> f64>(&self, mut f: F) -> f64 {
        self.atoms.iter().map(|(u, m)| 2.0 * m * f(u)).sum()
    }

    /// Total mass of the full +/- expansion.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, m)| 2.0 * m).sum()
    }

    fn push_merged(&mut self, dir: Vector, mass: f64) {
        for (u, m) in self.atoms.iter_mut() {
            if u.dot(&dir) > 1.0 - tolerances::ATOM_MERGE {
                *m += mass;
                return;
            }
        }
        self.atoms.push((dir, mass));
    }
}

/// Enumerates every selection of one generator subset per group (subset sizes
/// given by the multiplicities), invoking the callback with the chosen vectors
/// packed row-major into a flat buffer.  Subsets run in lexicographic index
/// order and groups in input order, so the reduction order is deterministic.
pub(crate) fn for_each_selection<F: FnMut(&[f64])>(
    groups: &[(&Zonotope, usize)],
    dim: usize,
    mut leaf: F,
) {
    let total: usize = groups.iter().map(|(_, k)| *k).sum();
    let mut buf = vec![0.0; total * dim];
    // Current combination per group (indices into the group's generator list).
    let mut combos: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    for (z, k) in groups {
        if z.generators().len() < *k {
            return; // no subsets of the required size: zero contribution
        }
        combos.push((0..*k).collect());
    }
    let offsets: Vec<usize> = {
        let mut o = Vec::with_capacity(groups.len());
        let mut acc = 0;
        for (_, k) in groups {
            o.push(acc);
            acc += k;
        }
        o
    };
    // Fill the buffer for group `gi` from its current combination.
    let fill = |buf: &mut [f64], gi: usize, combo: &[usize]| {
        let gens = groups[gi].0.generators();
        for (slot, &idx) in combo.iter().enumerate() {
            let row = offsets[gi] + slot;
            buf[row * dim..(row + 1) * dim].copy_from_slice(gens[idx].coords());
        }
    };
    for gi in 0..groups.len() {
        fill(&mut buf, gi, &combos[gi]);
    }
    loop {
        leaf(&buf);
        // Advance the odometer: last group fastest.
        let mut gi = groups.len();
        loop {
            if gi == 0 {
                return;
            }
            gi -= 1;
            let m = groups[gi].0.generators().len();
            let k = groups[gi].1;
            if next_combination(&mut combos[gi], m, k) {
                fill(&mut buf, gi, &combos[gi]);
                break;
            }
            // Wrapped: reset to the first combination and carry.
            combos[gi] = (0..k).collect();
            fill(&mut buf, gi, &combos[gi]);
        }
    }
}

/// Advances `combo` to the next k-subset of {0..m} in lexicographic order.
/// Returns false (leaving `combo` at the last subset) when exhausted.
fn next_combination(combo: &mut [usize], m: usize, k: usize) -> bool {
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) fn validate_slots(
    dim: usize,
    slots: &[(&Zonotope, usize)],
    want_total: usize,
) -> Result<()> {
    let mut total = 0;
    for (z, k) in slots {
        if z.dim() != dim {
            return Err(LlbmError::DimensionMismatch { expected: dim, got: z.dim() });
        }
        if *k == 0 {
            return Err(LlbmError::InvalidInput("slot multiplicity must be >= 1".into()));
        }
        total += k;
    }
    if total != want_total {
        return Err(LlbmError::InvalidInput(format!(
            "slot multiplicities sum to {total}, expected {want_total}"
        )));
    }
    Ok(())
}

/// Arithmetic mode for determinant and Gram computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Float,
    /// Determinants and Gram determinants evaluated exactly over rationals
    /// (every finite f64 is rational); square roots taken in float.
    Exact,
}

/// The mixed area measure `S_{C_1, ..., C_{n-1}}` of `n-1` zonotope slots
/// (with multiplicities) in R^n, as an atomic even measure.
///
/// Each selection of one generator per slot with linearly independent span
/// contributes an antipodal atom pair: direction the canonical unit normal of
/// the span, pair mass `mult * 2^(n-1) * vol_{n-1}(parallelepiped) / (n-1)!`
/// where `mult` is the number of slot orderings realizing the selection.
/// For n = 1 the empty product of slots yields the unit measure on {+1, -1},
/// stored as the single atom (+1, mass 1).
pub fn mixed_area_measure(
    dim: usize,
    slots: &[(&Zonotope, usize)],
    arithmetic: Arithmetic,
) -> Result<AtomicMeasure> {
    validate_slots(dim, slots, dim - 1)?;
    let mut measure = AtomicMeasure { dim, atoms: Vec::new() };
    if dim == 1 {
        measure.atoms.push((Vector::from_raw(vec![1.0]), 1.0));
        return Ok(measure);
    }
    let k_total = dim - 1;
    let mult: f64 = slots.iter().map(|(_, k)| factorial(*k)).product();
    let factor = mult * 2f64.powi(k_total as i32) / factorial(k_total);
    for_each_selection(slots, dim, |flat| {
        let Some(normal) = linalg::null_direction(flat, dim) else {
            return; // dependent selection: zero contribution
        };
        let vol = match arithmetic {
            Arithmetic::Float => linalg::gram_det(flat, k_total, dim).max(0.0).sqrt(),
            Arithmetic::Exact => {
                use num_traits::ToPrimitive;
                linalg::gram_det_exact(flat, k_total, dim)
                    .to_f64()
                    .unwrap_or(0.0)
                    .max(0.0)
                    .sqrt()
            }
        };
        if vol > 0.0 {
            measure.push_merged(Vector::from_raw(normal), factor * vol);
        }
    });
    debug_assert!(measure.atoms.iter().all(|(u, m)| {
        m.is_finite() && *m >= 0.0 && (u.norm() - 1.0).abs() < 1e-9
    }));
    Ok(measure)
}

/// Sum of |det| over all selections, times `scale`.  Shared by the float
/// mixed-volume path.
pub(crate) fn det_sum(dim: usize, slots: &[(&Zonotope, usize)], want_total: usize) -> Result<f64> {
    validate_slots(dim, slots, want_total)?;
    let mut sum = 0.0;
    let mut scratch = vec![0.0; dim * dim];
    for_each_selection(slots, dim, |flat| {
        scratch.copy_from_slice(flat);
        sum += linalg::det_in_place(&mut scratch, dim).abs();
    });
    Ok(sum)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn square_measure_puts_mass_two_on_each_axis() {
        let k = Zonotope::cube(2);
        let m = mixed_area_measure(2, &[(&k, 1)], Arithmetic::Float).unwrap();
        assert_eq!(m.atoms().len(), 2);
        for (u, mass) in m.atoms() {
            assert!((mass - 2.0).abs() < 1e-15);
            let on_axis = (u[0] - 1.0).abs().min((u[1] - 1.0).abs()) < 1e-14
                && u[0].abs().min(u[1].abs()) < 1e-14;
            assert!(on_axis, "atom direction {:?}", u.coords());
        }
        // Total mass of the full expansion = perimeter of [-1,1]^2 = 8.
        assert!((m.total_mass() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn slab_measure_is_a_single_polar_atom() {
        for n in 2..=4usize {
            let slab = Zonotope::slab(n);
            let m = mixed_area_measure(n, &[(&slab, n - 1)], Arithmetic::Float).unwrap();
            assert_eq!(m.atoms().len(), 1, "n = {n}");
            let (u, mass) = &m.atoms()[0];
            let mut en = vec![0.0; n];
            en[n - 1] = 1.0;
            assert_eq!(u.coords(), &en[..]);
            assert_eq!(*mass, 2f64.powi(n as i32 - 1));
        }
    }

    #[test]
    fn orthonormal_segment_slots_give_cross_mass() {
        // Slots I_1, ..., I_{n-1} (axis segments): single atom at e_n with
        // pair mass 2^{n-1} / (n-1)!.
        let n = 4;
        let segs: Vec<Zonotope> = (0..n - 1)
            .map(|i| Zonotope::new(n, vec![Vector::basis(n, i)]).unwrap())
            .collect();
        let slots: Vec<(&Zonotope, usize)> = segs.iter().map(|z| (z, 1)).collect();
        let m = mixed_area_measure(n, &slots, Arithmetic::Float).unwrap();
        assert_eq!(m.atoms().len(), 1);
        let (_, mass) = &m.atoms()[0];
        assert!((mass - 8.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_one_measure_is_unit() {
        let m = mixed_area_measure(1, &[], Arithmetic::Float).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.atoms()[0].1, 1.0);
        assert!((m.total_mass() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hexagon_measure_atoms() {
        let z = Zonotope::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        let m = mixed_area_measure(2, &[(&z, 1)], Arithmetic::Float).unwrap();
        assert_eq!(m.atoms().len(), 3);
        // Pair masses: 2||g|| per generator.
        let mut masses: Vec<f64> = m.atoms().iter().map(|(_, m)| *m).collect();
        masses.sort_by(f64::total_cmp);
        assert!((masses[0] - 2.0).abs() < 1e-14);
        assert!((masses[1] - 2.0).abs() < 1e-14);
        assert!((masses[2] - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exact_and_float_masses_agree() {
        let z = Zonotope::new(
            3,
            vec![v(&[1.0, 0.25, -0.5]), v(&[0.5, 1.0, 0.75]), v(&[-0.25, 0.5, 1.0])],
        )
        .unwrap();
        let mf = mixed_area_measure(3, &[(&z, 2)], Arithmetic::Float).unwrap();
        let me = mixed_area_measure(3, &[(&z, 2)], Arithmetic::Exact).unwrap();
        assert_eq!(mf.atoms().len(), me.atoms().len());
        for ((u1, m1), (u2, m2)) in mf.atoms().iter().zip(me.atoms()) {
            assert!(u1.dot(u2) > 1.0 - 1e-12);
            assert!((m1 - m2).abs() < 1e-12 * (1.0 + m1.abs()));
        }
    }
}
