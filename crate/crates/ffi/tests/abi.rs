//! Exercises the C ABI from Rust: handle lifecycle, happy paths against the
//! core library, and the status/error-message contract.

use std::ffi::CStr;

use llbm_ffi::{
    llbm_deficit, llbm_function_eval, llbm_function_free, llbm_function_support_diff,
    llbm_last_error_message, llbm_mixed_volume, llbm_zonotope_dim, llbm_zonotope_free,
    llbm_zonotope_new, llbm_zonotope_support, llbm_zonotope_volume, LlbmDeficit, LlbmStatus,
    LlbmTestFunction, LlbmZonotope,
};

fn last_error() -> String {
    unsafe { CStr::from_ptr(llbm_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn new_zonotope(dim: usize, rows: &[f64]) -> *mut LlbmZonotope {
    assert_eq!(rows.len() % dim.max(1), 0);
    llbm_zonotope_new(dim, rows.as_ptr(), rows.len() / dim)
}

#[test]
fn cube_volume_support_and_dim_through_the_abi() {
    let cube = new_zonotope(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    assert!(!cube.is_null());

    let mut dim = 0usize;
    assert_eq!(llbm_zonotope_dim(cube, &mut dim), LlbmStatus::Ok);
    assert_eq!(dim, 3);

    let mut vol = 0.0f64;
    assert_eq!(llbm_zonotope_volume(cube, &mut vol), LlbmStatus::Ok);
    assert_eq!(vol, 8.0);

    let u = [1.0, 1.0, 1.0];
    let mut h = 0.0f64;
    assert_eq!(llbm_zonotope_support(cube, u.as_ptr(), 3, &mut h), LlbmStatus::Ok);
    assert_eq!(h, 3.0);

    llbm_zonotope_free(cube);
}

#[test]
fn mixed_volume_matches_the_core_engine() {
    let cube = new_zonotope(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let slab = new_zonotope(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.3, 0.1, 1.0]);
    let bodies = [cube as *const LlbmZonotope, slab as *const LlbmZonotope];
    let counts = [2usize, 1usize];
    let mut v = 0.0f64;
    assert_eq!(
        llbm_mixed_volume(bodies.as_ptr(), counts.as_ptr(), 2, &mut v),
        LlbmStatus::Ok
    );

    let core_cube = llbm_core::Zonotope::new(
        3,
        vec![
            llbm_core::Vector::new(vec![1.0, 0.0, 0.0]).unwrap(),
            llbm_core::Vector::new(vec![0.0, 1.0, 0.0]).unwrap(),
            llbm_core::Vector::new(vec![0.0, 0.0, 1.0]).unwrap(),
        ],
    )
    .unwrap();
    let core_slab = llbm_core::Zonotope::new(
        3,
        vec![
            llbm_core::Vector::new(vec![1.0, 0.0, 0.0]).unwrap(),
            llbm_core::Vector::new(vec![0.0, 1.0, 0.0]).unwrap(),
            llbm_core::Vector::new(vec![0.3, 0.1, 1.0]).unwrap(),
        ],
    )
    .unwrap();
    let q = llbm_core::engine::MixedVolumeQuery::from_groups(
        3,
        vec![(core_cube, 2), (core_slab, 1)],
    )
    .unwrap();
    let expected = llbm_core::engine::mixed_volume(&q);
    assert!((v - expected).abs() <= 1e-12 * (1.0 + expected.abs()));

    llbm_zonotope_free(cube);
    llbm_zonotope_free(slab);
}

#[test]
fn deficit_terms_match_the_core_path_and_are_nonnegative() {
    let cube = new_zonotope(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let slab = new_zonotope(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.3, 0.1, 1.0]);
    let f = llbm_function_support_diff(slab, cube);
    assert!(!f.is_null());

    let u = [1.0, 0.0, 0.0];
    let mut fv = 0.0f64;
    assert_eq!(llbm_function_eval(f, u.as_ptr(), 3, &mut fv), LlbmStatus::Ok);
    // h_slab(e1) = 1 + 0.3, h_cube(e1) = 1.
    assert!((fv - 0.3).abs() <= 1e-12);

    let mut d = LlbmDeficit { term_sq: 0.0, term_bilinear: 0.0, term_ratio: 0.0, deficit: 0.0 };
    assert_eq!(llbm_deficit(cube, f, &mut d), LlbmStatus::Ok);
    assert!((d.deficit - (d.term_sq - d.term_bilinear - d.term_ratio)).abs() <= 1e-12);
    assert!(d.deficit >= 0.0);

    llbm_function_free(f);
    llbm_zonotope_free(cube);
    llbm_zonotope_free(slab);
}

#[test]
fn null_pointers_are_reported_not_dereferenced() {
    let mut vol = -1.0f64;
    assert_eq!(
        llbm_zonotope_volume(std::ptr::null(), &mut vol),
        LlbmStatus::NullPointer
    );
    assert_eq!(vol, -1.0, "out-parameter must stay untouched on failure");
    assert!(last_error().contains("null"));

    let cube = new_zonotope(2, &[1.0, 0.0, 0.0, 1.0]);
    assert_eq!(
        llbm_zonotope_volume(cube, std::ptr::null_mut()),
        LlbmStatus::NullPointer
    );
    llbm_zonotope_free(cube);

    assert_eq!(
        llbm_deficit(
            std::ptr::null(),
            std::ptr::null::<LlbmTestFunction>(),
            std::ptr::null_mut()
        ),
        LlbmStatus::NullPointer
    );
    llbm_zonotope_free(std::ptr::null_mut());
    llbm_function_free(std::ptr::null_mut());
}

#[test]
fn bad_constructions_return_null_and_set_the_message() {
    // Non-finite generator entry.
    let z = new_zonotope(2, &[1.0, f64::NAN]);
    assert!(z.is_null());
    assert!(!last_error().is_empty());

    // Zero dimension.
    let z = llbm_zonotope_new(0, std::ptr::null(), 0);
    assert!(z.is_null());
}

#[test]
fn dimension_mismatches_surface_as_a_status() {
    let cube = new_zonotope(2, &[1.0, 0.0, 0.0, 1.0]);
    let u = [1.0, 0.0, 0.0];
    let mut h = 0.0f64;
    assert_eq!(
        llbm_zonotope_support(cube, u.as_ptr(), 3, &mut h),
        LlbmStatus::DimensionMismatch
    );
    assert!(last_error().contains("dimension"));
    llbm_zonotope_free(cube);
}

#[test]
fn degenerate_bodies_are_flagged_by_the_deficit() {
    // A 2-dimensional body with collinear generators has no volume.
    let flat = new_zonotope(2, &[1.0, 0.0, 2.0, 0.0]);
    let square = new_zonotope(2, &[1.0, 0.0, 0.0, 1.0]);
    let f = llbm_function_support_diff(square, flat);
    let mut d = LlbmDeficit { term_sq: 0.0, term_bilinear: 0.0, term_ratio: 0.0, deficit: 0.0 };
    assert_eq!(llbm_deficit(flat, f, &mut d), LlbmStatus::DegenerateBody);
    llbm_function_free(f);
    llbm_zonotope_free(flat);
    llbm_zonotope_free(square);
}

#[test]
fn mixed_volume_rejects_wrong_multiplicities() {
    let cube = new_zonotope(2, &[1.0, 0.0, 0.0, 1.0]);
    let bodies = [cube as *const LlbmZonotope];
    let counts = [3usize];
    let mut v = 0.0f64;
    let status = llbm_mixed_volume(bodies.as_ptr(), counts.as_ptr(), 1, &mut v);
    assert_ne!(status, LlbmStatus::Ok);
    assert_eq!(
        llbm_mixed_volume(bodies.as_ptr(), counts.as_ptr(), 0, &mut v),
        LlbmStatus::InvalidArgument
    );
    llbm_zonotope_free(cube);
}
