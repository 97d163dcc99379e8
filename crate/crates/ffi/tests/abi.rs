use std::ffi::CStr;
use std::ptr;

use loopbound_ffi::*;

fn weights(w: *const LbWeights) -> Vec<(LbSymbol, f64)> {
    let n = unsafe { lb_weights_len(w) };
    (0..n)
        .map(|i| {
            let (mut s, mut v) = (LbSymbol::T, 0.0);
            assert_eq!(
                unsafe { lb_weights_get(w, i, &mut s, &mut v) },
                LbStatus::Ok
            );
            (s, v)
        })
        .collect()
}

#[test]
fn on_boundary_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(lb_on_params_new(0.3, 0.2, 0.4, 1.0, &mut p), LbStatus::Ok);
        let mut f = LbFugacities::default();
        assert_eq!(lb_on_params_fugacities(p, &mut f), LbStatus::Ok);
        let gap = f.n3 * f.n3 - (f.n1 * f.n1 + f.n2 * f.n2 - f.n * f.n1 * f.n2);
        assert!(gap.abs() < 1e-12);
        for branch in [LbBranch::Real, LbBranch::Imaginary] {
            let mut w = ptr::null_mut();
            assert_eq!(lb_weights_on_boundary(p, branch, &mut w), LbStatus::Ok);
            let entries = weights(w);
            assert_eq!(
                entries.iter().map(|e| e.0).collect::<Vec<_>>(),
                [LbSymbol::Beta1, LbSymbol::Beta2, LbSymbol::Beta3]
            );
            let mut r = f64::NAN;
            assert_eq!(lb_on_boundary_residual(p, branch, w, &mut r), LbStatus::Ok);
            assert!(r < 1e-10);
            assert_eq!(
                lb_on_reflection_residual(p, 0.25, branch, &mut r),
                LbStatus::Ok
            );
            assert!(r < 1e-10);
            lb_weights_free(w);
        }
        lb_on_params_free(p);
    }
}

#[test]
fn c2_and_generalized() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(lb_c2_params_new(0.25, 0.15, 0.5, 1.0, &mut p), LbStatus::Ok);
        let mut w = ptr::null_mut();
        assert_eq!(
            lb_weights_c2_boundary(p, LbBranch::Imaginary, &mut w),
            LbStatus::Ok
        );
        assert_eq!(lb_weights_len(w), 4);
        let mut r = f64::NAN;
        assert_eq!(
            lb_c2_boundary_residual(p, LbBranch::Imaginary, w, &mut r),
            LbStatus::Ok
        );
        assert!(r < 1e-10);
        assert_eq!(
            lb_c2_reflection_residual(p, 0.1, LbBranch::Imaginary, &mut r),
            LbStatus::Ok
        );
        assert!(r < 1e-10);
        lb_weights_free(w);
        let mut b = ptr::null_mut();
        assert_eq!(lb_weights_c2_bulk(p, &mut b), LbStatus::Ok);
        assert_eq!(lb_weights_len(b), 5);
        lb_weights_free(b);
        lb_c2_params_free(p);

        assert_eq!(
            lb_generalized_reflection_residual(0.3, 0.4, 0.5, 0.7, 0.25, &mut r),
            LbStatus::Ok
        );
        assert!(r < 1e-10);
        let mut g = ptr::null_mut();
        assert_eq!(
            lb_weights_generalized(0.3, 0.4, 0.0, 0.7, &mut g),
            LbStatus::Ok
        );
        let e = weights(g);
        assert_eq!((e[2].1, e[3].1), (0.0, 0.0));
        lb_weights_free(g);
    }
}

#[test]
fn bulk_matches_projectively() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(lb_weights_on_bulk(0.3, 0.5, &mut w), LbStatus::Ok);
        let v: Vec<f64> = weights(w).into_iter().map(|e| e.1).collect();
        let scaled: Vec<f64> = v.iter().map(|x| -3.0 * x).collect();
        let mut d = f64::NAN;
        assert_eq!(
            lb_projective_deviation(v.as_ptr(), scaled.as_ptr(), v.len(), &mut d),
            LbStatus::Ok
        );
        assert!(d < 1e-15);
        lb_weights_free(w);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    unsafe {
        let mut p = ptr::null_mut();
        // sin(4λ + 4λ₁) = 0
        assert_eq!(
            lb_on_params_new(
                std::f64::consts::PI / 8.0,
                std::f64::consts::PI / 8.0,
                0.4,
                1.0,
                &mut p
            ),
            LbStatus::Degenerate
        );
        assert!(p.is_null());
        assert_eq!(
            lb_on_params_new(f64::NAN, 0.2, 0.4, 1.0, &mut p),
            LbStatus::InvalidArgument
        );
        assert_eq!(
            lb_on_params_new(0.3, 0.2, 0.4, 1.0, ptr::null_mut()),
            LbStatus::NullPointer
        );
        let mut r = 0.0;
        assert_eq!(
            lb_on_boundary_residual(ptr::null(), LbBranch::Real, ptr::null(), &mut r),
            LbStatus::NullPointer
        );
        let mut w = ptr::null_mut();
        lb_weights_on_bulk(0.3, 0.5, &mut w);
        let (mut s, mut v) = (LbSymbol::T, 0.0);
        assert_eq!(
            lb_weights_get(w, 6, &mut s, &mut v),
            LbStatus::InvalidArgument
        );
        assert_eq!(lb_weights_len(ptr::null()), 0);
        lb_weights_free(w);
        lb_weights_free(ptr::null_mut());
        let a = [0.0, 0.0];
        assert_eq!(
            lb_projective_deviation(a.as_ptr(), a.as_ptr(), 2, &mut r),
            LbStatus::InvalidArgument
        );
    }
}

#[test]
fn static_strings() {
    let v = unsafe { CStr::from_ptr(lb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let m = unsafe { CStr::from_ptr(lb_status_message(LbStatus::Degenerate)) };
    assert!(m.to_str().unwrap().contains("denominator"));
}
