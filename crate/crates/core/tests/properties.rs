//! Property tests for the structural invariances of the deficit and the
//! functional mixed-volume path.  Bodies are drawn through the library's
//! own seeded samplers, so proptest explores (and shrinks over) the seed
//! space instead of raw coordinate lists that would mostly be degenerate.

use llbm_core::deficit::{deficit, random_test_function, random_zonotope, trial_rng};
use llbm_core::engine::{functional_mixed_volume, mixed_volume, MixedVolumeQuery};
use llbm_core::geometry::{TestFunction, Zonotope};
use proptest::prelude::*;

fn rel_close(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * (1.0 + lhs.abs().max(rhs.abs()))
}

fn body_and_function(seed: u64, dim: usize, gens: usize) -> (Zonotope, TestFunction) {
    let mut rng = trial_rng(seed, dim, gens, 0);
    let k = random_zonotope(&mut rng, dim, gens).expect("full-dimensional body");
    let f = random_test_function(&mut rng, dim).expect("support difference");
    (k, f)
}

/// Scales `f` by `lambda > 0` by scaling both support-difference sides.
fn scaled_function(f: &TestFunction, lambda: f64) -> TestFunction {
    match f {
        TestFunction::SupportDiff { plus, minus } => {
            TestFunction::support_diff(plus.scaled(lambda), minus.scaled(lambda))
                .expect("scaling preserves the support-difference form")
        }
        TestFunction::Closed { .. } => unreachable!("samplers produce support differences"),
    }
}

proptest! {
    /// The deficit is quadratically homogeneous in the function:
    /// deficit(K, lambda f) = lambda^2 deficit(K, f).
    #[test]
    fn deficit_is_quadratic_in_the_function(
        seed in any::<u64>(),
        dim in 2usize..=4,
        extra in 0usize..=2,
        lambda in 0.2f64..3.0,
    ) {
        let (k, f) = body_and_function(seed, dim, dim + 1 + extra);
        let base = deficit(&k, &f).expect("deficit");
        let scaled = deficit(&k, &scaled_function(&f, lambda)).expect("scaled deficit");
        prop_assert!(
            rel_close(scaled.deficit, lambda * lambda * base.deficit, 1e-9),
            "{} vs lambda^2 * {} (lambda = {lambda})",
            scaled.deficit,
            base.deficit
        );
    }

    /// The deficit is (n-2)-homogeneous in the body:
    /// deficit(cK, f) = c^(n-2) deficit(K, f).
    #[test]
    fn deficit_is_degree_n_minus_2_in_the_body(
        seed in any::<u64>(),
        dim in 2usize..=4,
        extra in 0usize..=2,
        c in 0.3f64..2.5,
    ) {
        let (k, f) = body_and_function(seed, dim, dim + 1 + extra);
        let base = deficit(&k, &f).expect("deficit");
        let scaled = deficit(&k.scaled(c), &f).expect("scaled-body deficit");
        let expected = c.powi(dim as i32 - 2) * base.deficit;
        prop_assert!(
            rel_close(scaled.deficit, expected, 1e-9),
            "{} vs c^(n-2) * {} (c = {c}, n = {dim})",
            scaled.deficit,
            base.deficit
        );
    }

    /// Substituting a genuine support function into the functional slot
    /// reproduces the ordinary mixed volume: V(K[n-1], h_L) = V(K[n-1], L).
    #[test]
    fn support_functions_reduce_to_mixed_volumes(
        seed in any::<u64>(),
        dim in 2usize..=4,
        extra in 0usize..=2,
    ) {
        let mut rng = trial_rng(seed, dim, dim + 1 + extra, 1);
        let k = random_zonotope(&mut rng, dim, dim + 1 + extra).expect("body");
        let l = random_zonotope(&mut rng, dim, dim).expect("body");
        let functional =
            functional_mixed_volume(&TestFunction::support_of(&l), dim, &[(&k, dim - 1)])
                .expect("functional mixed volume");
        let query = MixedVolumeQuery::from_groups(dim, vec![(k, dim - 1), (l, 1)])
            .expect("query");
        let classical = mixed_volume(&query);
        prop_assert!(
            rel_close(functional, classical, 1e-10),
            "functional {functional} vs classical {classical}"
        );
    }
}
