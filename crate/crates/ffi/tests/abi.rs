use std::ffi::CStr;
use std::ptr;

use fracl::*;

fn state(x1: f64, x2: f64, x3: f64) -> FraclState {
    FraclState { x1, x2, x3 }
}

const E41_X0: FraclState = FraclState {
    x1: 0.01,
    x2: 0.01,
    x3: 1.76,
};

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(fracl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn gamma_and_errors() {
    let mut g = 0.0;
    assert_eq!(unsafe { fracl_gamma(1.65, &mut g) }, FraclStatus::Ok);
    assert!((g - 0.900_116_816_317_231_5).abs() < 1e-13);

    assert_eq!(
        unsafe { fracl_gamma(0.0, &mut g) },
        FraclStatus::InvalidArgument
    );
    assert!(last_error_string().unwrap().contains("0"));
    assert_eq!(
        unsafe { fracl_gamma(2.0, ptr::null_mut()) },
        FraclStatus::NullPointer
    );
}

#[test]
fn eigenvalues_both_routes() {
    let mut a = [FraclComplex { re: 0.0, im: 0.0 }; 3];
    let mut b = a;
    unsafe {
        assert_eq!(
            fracl_eigen_closed_form(3, 1.75, -1.75, -2.0, a.as_mut_ptr()),
            FraclStatus::Ok
        );
        assert_eq!(
            fracl_eigen_numeric(3, 1.75, -1.75, -2.0, b.as_mut_ptr()),
            FraclStatus::Ok
        );
    }
    let mut x: Vec<f64> = a.iter().map(|v| v.re).collect();
    let mut y: Vec<f64> = b.iter().map(|v| v.re).collect();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    for (p, q) in x.iter().zip(&y) {
        assert!((p - q).abs() < 1e-12);
    }
    assert!((x.iter().sum::<f64>() - (-5.75)).abs() < 1e-12);

    let status = unsafe { fracl_eigen_closed_form(7, 0.0, 0.0, 0.0, a.as_mut_ptr()) };
    assert_eq!(status, FraclStatus::InvalidArgument);
    let status = unsafe { fracl_eigen_closed_form(0, f64::NAN, 0.0, 0.0, a.as_mut_ptr()) };
    assert_eq!(status, FraclStatus::InvalidArgument);
}

#[test]
fn classify_and_interval() {
    let mut st = FraclStability::Unstable;
    let mut margins = [0.0; 3];
    unsafe {
        assert_eq!(
            fracl_classify(2, -2.0, -7.2, -0.2, 0.5, &mut st, margins.as_mut_ptr()),
            FraclStatus::Ok
        );
    }
    assert_eq!(st, FraclStability::Unstable);
    assert!(margins.iter().any(|m| *m < 0.0));

    unsafe {
        assert_eq!(
            fracl_classify(0, 0.0, 0.0, 0.0, 0.5, &mut st, ptr::null_mut()),
            FraclStatus::Ok
        );
    }
    assert_eq!(st, FraclStability::NotAsymptoticallyStable);
    let bad_q = unsafe { fracl_classify(0, 0.0, -1.0, -1.0, 1.5, &mut st, ptr::null_mut()) };
    assert_eq!(bad_q, FraclStatus::InvalidArgument);

    let (mut lo, mut hi, mut ok) = (0.0, 0.0, false);
    unsafe {
        assert_eq!(
            fracl_stability_interval(2, -7.2, -0.2, &mut lo, &mut hi, &mut ok),
            FraclStatus::Ok
        );
    }
    assert!(ok && (hi - 1.2).abs() < 1e-12 && (lo + 1.2).abs() < 1e-12);
    unsafe {
        assert_eq!(
            fracl_stability_interval(3, 1.0, 1.0, &mut lo, &mut hi, &mut ok),
            FraclStatus::Ok
        );
    }
    assert!(!ok);
    let e0 = unsafe { fracl_stability_interval(0, -1.0, -1.0, &mut lo, &mut hi, &mut ok) };
    assert_eq!(e0, FraclStatus::InvalidArgument);
}

#[test]
fn lipschitz_and_rl_integral() {
    let mut l = 0.0;
    unsafe {
        assert_eq!(
            fracl_lipschitz_bound(state(1.0, 2.0, 3.0), 1.0, &mut l),
            FraclStatus::Ok
        );
    }
    let want = 1.0 + 2f64.sqrt() + 2.0 * (14f64.sqrt() + 1.0);
    assert!((l - want).abs() < 1e-12);
    let bad = unsafe { fracl_lipschitz_bound(state(0.0, 0.0, 0.0), -1.0, &mut l) };
    assert_eq!(bad, FraclStatus::InvalidArgument);

    let ts: Vec<f64> = (0..=100).map(|k| k as f64 * 0.01).collect();
    let fs = vec![1.0; ts.len()];
    let mut v = 0.0;
    unsafe {
        assert_eq!(
            fracl_rl_integral(ts.as_ptr(), fs.as_ptr(), ts.len(), 0.5, 1.0, &mut v),
            FraclStatus::Ok
        );
    }
    let mut g = 0.0;
    unsafe { fracl_gamma(1.5, &mut g) };
    assert!((v - 1.0 / g).abs() < 1e-12);
}

#[test]
fn trajectory_handle_round_trip() {
    let mut traj = ptr::null_mut();
    let status = unsafe {
        fracl_integrate(
            0.65,
            0.01,
            500,
            E41_X0,
            -1.75,
            -2.0,
            false,
            state(0.0, 0.0, 0.0),
            &mut traj,
        )
    };
    assert_eq!(status, FraclStatus::Ok);
    assert!(!traj.is_null());
    assert_eq!(unsafe { fracl_trajectory_len(traj) }, 501);

    let (mut t, mut x) = (0.0, state(0.0, 0.0, 0.0));
    assert_eq!(
        unsafe { fracl_trajectory_sample(traj, 1, &mut t, &mut x) },
        FraclStatus::Ok
    );
    assert_eq!(t, 0.01);
    assert!((x.x3 - 1.564_011_111_484_123_5).abs() < 1e-12);
    let oob = unsafe { fracl_trajectory_sample(traj, 501, &mut t, &mut x) };
    assert_eq!(oob, FraclStatus::InvalidArgument);

    let csv = unsafe { fracl_trajectory_to_csv(traj) };
    assert!(!csv.is_null());
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
    assert!(text.starts_with("j,t,x1,x2,x3\n"));
    assert_eq!(text.lines().count(), 502);
    unsafe {
        fracl_string_free(csv);
        fracl_trajectory_free(traj);
    }
}

#[test]
fn divergence_returns_partial_handle() {
    let mut traj = ptr::null_mut();
    let status = unsafe {
        fracl_integrate(
            1.0,
            0.01,
            100,
            state(100.0, 100.0, 100.0),
            0.0,
            0.0,
            false,
            state(0.0, 0.0, 0.0),
            &mut traj,
        )
    };
    assert_eq!(status, FraclStatus::Diverged);
    assert!(!traj.is_null());
    let n = unsafe { fracl_trajectory_len(traj) };
    assert!(n > 0 && n < 101);
    unsafe { fracl_trajectory_free(traj) };
}

#[test]
fn invalid_config_leaves_null_handle() {
    let mut traj = ptr::NonNull::dangling().as_ptr();
    let status = unsafe {
        fracl_integrate(
            0.5,
            -0.01,
            10,
            E41_X0,
            0.0,
            0.0,
            false,
            state(0.0, 0.0, 0.0),
            &mut traj,
        )
    };
    assert_eq!(status, FraclStatus::InvalidArgument);
    assert!(traj.is_null());
    assert_eq!(
        unsafe {
            fracl_integrate(
                0.5,
                0.01,
                10,
                E41_X0,
                0.0,
                0.0,
                false,
                E41_X0,
                ptr::null_mut(),
            )
        },
        FraclStatus::NullPointer
    );
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert_eq!(fracl_trajectory_len(ptr::null()), 0);
        assert!(fracl_trajectory_to_csv(ptr::null()).is_null());
        fracl_trajectory_free(ptr::null_mut());
        fracl_string_free(ptr::null_mut());
    }
}

#[test]
fn anchored_run_holds_its_target() {
    let e3 = state(0.0, 0.0, 1.75);
    let mut traj = ptr::null_mut();
    let status = unsafe { fracl_integrate(0.65, 0.01, 50, e3, -1.75, -2.0, true, e3, &mut traj) };
    assert_eq!(status, FraclStatus::Ok);
    let mut x = state(1.0, 1.0, 1.0);
    unsafe {
        fracl_trajectory_sample(traj, 50, ptr::null_mut(), &mut x);
        fracl_trajectory_free(traj);
    }
    assert_eq!(x, e3);
}
