//! C ABI over `fracl_core`.
//!
//! Every fallible function returns a [`FraclStatus`] and writes results
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`fracl_last_error_message`]. Trajectories are returned as an
//! opaque [`FraclTrajectory`] handle that must be released with
//! [`fracl_trajectory_free`]; strings returned by the library are released
//! with [`fracl_string_free`].
//!
//! The header `include/fracl.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracl_core::{
    output, EigenTriple, EquilibriumSpec, Error, Family, FractionalOrder, IntegratorConfig,
    StabilityStatus, State3, Trajectory,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The integration left the finite region; a partial trajectory is
    /// still returned.
    Diverged = 3,
    Panic = 4,
}

/// Equilibrium family; pass the integer value where a family is expected.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclFamily {
    E0 = 0,
    E1 = 1,
    E2 = 2,
    E3 = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclStability {
    AsymptoticallyStable = 0,
    Unstable = 1,
    NotAsymptoticallyStable = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraclComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraclState {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Opaque trajectory handle.
pub struct FraclTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(FraclStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Diverged(_) => FraclStatus::Diverged,
            _ => FraclStatus::InvalidArgument,
        };
        Fail(code, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FraclStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FraclStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FraclStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            FraclStatus::Panic
        }
    }
}

fn family(v: i32) -> Result<Family, Fail> {
    match v {
        0 => Ok(Family::E0),
        1 => Ok(Family::E1),
        2 => Ok(Family::E2),
        3 => Ok(Family::E3),
        _ => Err(Fail(
            FraclStatus::InvalidArgument,
            format!("unknown family {v}"),
        )),
    }
}

fn order(q: f64) -> Result<FractionalOrder, Fail> {
    Ok(FractionalOrder::new(q)?)
}

fn finite(name: &str, v: f64) -> Result<(), Fail> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Fail(
            FraclStatus::InvalidArgument,
            format!("{name} must be finite, got {v}"),
        ))
    }
}

fn state(s: FraclState) -> State3 {
    State3::new(s.x1, s.x2, s.x3)
}

unsafe fn write_triple(out: *mut FraclComplex, eig: &EigenTriple) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    for (k, v) in eig.values.iter().enumerate() {
        out.add(k).write(FraclComplex { re: v.re, im: v.im });
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fracl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fracl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Gamma function for `x > 0`.
///
/// # Safety
/// `out` must be NULL or valid for one `double` write.
#[no_mangle]
pub unsafe extern "C" fn fracl_gamma(x: f64, out: *mut f64) -> FraclStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(fracl_core::gamma(x)?);
        Ok(())
    })
}

/// Closed-form Jacobian eigenvalues at an equilibrium of the controlled
/// system, ordered as in the library.
///
/// # Safety
/// `out` must be NULL or valid for three `FraclComplex` writes.
#[no_mangle]
pub unsafe extern "C" fn fracl_eigen_closed_form(
    family_id: i32,
    m: f64,
    c1: f64,
    c2: f64,
    out: *mut FraclComplex,
) -> FraclStatus {
    guard(|| {
        for (n, v) in [("m", m), ("c1", c1), ("c2", c2)] {
            finite(n, v)?;
        }
        let spec = EquilibriumSpec::new(family(family_id)?, m);
        write_triple(out, &fracl_core::eigen_closed_form(&spec, c1, c2))
    })
}

/// Eigenvalues from the cubic solver on the characteristic polynomial.
///
/// # Safety
/// `out` must be NULL or valid for three `FraclComplex` writes.
#[no_mangle]
pub unsafe extern "C" fn fracl_eigen_numeric(
    family_id: i32,
    m: f64,
    c1: f64,
    c2: f64,
    out: *mut FraclComplex,
) -> FraclStatus {
    guard(|| {
        for (n, v) in [("m", m), ("c1", c1), ("c2", c2)] {
            finite(n, v)?;
        }
        let spec = EquilibriumSpec::new(family(family_id)?, m);
        write_triple(out, &fracl_core::eigen_numeric(&spec, c1, c2))
    })
}

/// Matignon verdict at an equilibrium for order `q` in (0, 1].
/// `margins` (three doubles, may be NULL) receives `|arg l| - q pi/2` per
/// eigenvalue, NaN for zero eigenvalues.
///
/// # Safety
/// `status` must be NULL or valid for one write; `margins` must be NULL or
/// valid for three `double` writes.
#[no_mangle]
pub unsafe extern "C" fn fracl_classify(
    family_id: i32,
    m: f64,
    c1: f64,
    c2: f64,
    q: f64,
    status: *mut FraclStability,
    margins: *mut f64,
) -> FraclStatus {
    guard(|| {
        if status.is_null() {
            return Err(null("status"));
        }
        for (n, v) in [("m", m), ("c1", c1), ("c2", c2)] {
            finite(n, v)?;
        }
        let spec = EquilibriumSpec::new(family(family_id)?, m);
        let verdict = fracl_core::classify(&spec, c1, c2, order(q)?);
        status.write(match verdict.status {
            StabilityStatus::AsymptoticallyStable => FraclStability::AsymptoticallyStable,
            StabilityStatus::Unstable => FraclStability::Unstable,
            StabilityStatus::NotAsymptoticallyStable => FraclStability::NotAsymptoticallyStable,
        });
        if !margins.is_null() {
            for (k, v) in verdict.margins.iter().enumerate() {
                margins.add(k).write(v.unwrap_or(f64::NAN));
            }
        }
        Ok(())
    })
}

/// Open interval of `m` on which the family is asymptotically stable.
/// `nonempty` is set to false (and the bounds left untouched) when no `m`
/// works. Family E0 is rejected.
///
/// # Safety
/// All three pointers must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fracl_stability_interval(
    family_id: i32,
    c1: f64,
    c2: f64,
    lo: *mut f64,
    hi: *mut f64,
    nonempty: *mut bool,
) -> FraclStatus {
    guard(|| {
        if lo.is_null() || hi.is_null() || nonempty.is_null() {
            return Err(null("output pointer"));
        }
        match fracl_core::stability_interval_m(family(family_id)?, c1, c2)? {
            Some(iv) => {
                lo.write(iv.lo);
                hi.write(iv.hi);
                nonempty.write(true);
            }
            None => nonempty.write(false),
        }
        Ok(())
    })
}

/// Lipschitz constant of the uncontrolled right-hand side on the box of
/// half-width `delta` around `x0`.
///
/// # Safety
/// `out` must be NULL or valid for one `double` write.
#[no_mangle]
pub unsafe extern "C" fn fracl_lipschitz_bound(
    x0: FraclState,
    delta: f64,
    out: *mut f64,
) -> FraclStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(fracl_core::lipschitz_bound(state(x0), delta)?);
        Ok(())
    })
}

/// Riemann-Liouville integral of order `q` at `t` of samples `(ts[k], fs[k])`
/// on a grid starting at 0.
///
/// # Safety
/// `ts` and `fs` must be valid for `n` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn fracl_rl_integral(
    ts: *const f64,
    fs: *const f64,
    n: usize,
    q: f64,
    t: f64,
    out: *mut f64,
) -> FraclStatus {
    guard(|| {
        if ts.is_null() || fs.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let ts = std::slice::from_raw_parts(ts, n);
        let fs = std::slice::from_raw_parts(fs, n);
        let samples: Vec<(f64, f64)> = ts.iter().copied().zip(fs.iter().copied()).collect();
        out.write(fracl_core::rl_integral(&samples, order(q)?, t)?);
        Ok(())
    })
}

/// Integrate the controlled system with the fractional Euler scheme.
///
/// With `anchored` false the controls are `c_i x_i`; with `anchored` true
/// they are `c_i (x_i - target_i)`. On success or divergence `*out` receives
/// a new handle (the partial trajectory when `FRACL_STATUS_DIVERGED` is
/// returned); otherwise `*out` is set to NULL.
///
/// # Safety
/// `out` must be NULL or valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fracl_integrate(
    q: f64,
    h: f64,
    steps: usize,
    x0: FraclState,
    c1: f64,
    c2: f64,
    anchored: bool,
    target: FraclState,
    out: *mut *mut FraclTrajectory,
) -> FraclStatus {
    if out.is_null() {
        set_error("out is null");
        return FraclStatus::NullPointer;
    }
    out.write(ptr::null_mut());
    guard(|| {
        finite("c1", c1)?;
        finite("c2", c2)?;
        let controls = if anchored {
            fracl_core::ControlParams::anchored(c1, c2, state(target))
        } else {
            fracl_core::ControlParams::literal(c1, c2)
        };
        let cfg = IntegratorConfig::new(order(q)?, h, steps, state(x0), controls)?;
        let (traj, fail) = match fracl_core::integrate(&cfg) {
            Ok(t) => (t, None),
            Err(Error::Diverged(d)) => {
                let msg = format!("trajectory diverged at step {}", d.step);
                (d.partial, Some(Fail(FraclStatus::Diverged, msg)))
            }
            Err(e) => return Err(e.into()),
        };
        out.write(Box::into_raw(Box::new(FraclTrajectory { inner: traj })));
        fail.map_or(Ok(()), Err)
    })
}

/// Number of samples, including the initial state. 0 for NULL.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracl_trajectory_len(traj: *const FraclTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.samples.len())
}

/// Time and state of sample `index`.
///
/// # Safety
/// `traj` must be NULL or a live handle; `t` and `x` must be NULL or valid
/// for one write each (either may be NULL to skip it).
#[no_mangle]
pub unsafe extern "C" fn fracl_trajectory_sample(
    traj: *const FraclTrajectory,
    index: usize,
    t: *mut f64,
    x: *mut FraclState,
) -> FraclStatus {
    guard(|| {
        let traj = traj.as_ref().ok_or_else(|| null("traj"))?;
        let s = traj.inner.samples.get(index).ok_or_else(|| {
            Fail(
                FraclStatus::InvalidArgument,
                format!(
                    "index {index} out of range (len {})",
                    traj.inner.samples.len()
                ),
            )
        })?;
        if !t.is_null() {
            t.write(s.t);
        }
        if !x.is_null() {
            x.write(FraclState {
                x1: s.x.x1,
                x2: s.x.x2,
                x3: s.x.x3,
            });
        }
        Ok(())
    })
}

/// The trajectory as `j,t,x1,x2,x3` CSV text, byte-identical to the CLI
/// output. Free with [`fracl_string_free`]. NULL on failure.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracl_trajectory_to_csv(traj: *const FraclTrajectory) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = guard(|| {
        let traj = traj.as_ref().ok_or_else(|| null("traj"))?;
        let csv = CString::new(output::trajectory_csv(&traj.inner))
            .map_err(|e| Fail(FraclStatus::InvalidArgument, e.to_string()))?;
        result = csv.into_raw();
        Ok(())
    });
    if status != FraclStatus::Ok {
        return ptr::null_mut();
    }
    result
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fracl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a trajectory handle. NULL is ignored.
///
/// # Safety
/// `traj` must be NULL or a handle from [`fracl_integrate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fracl_trajectory_free(traj: *mut FraclTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Copy a C string for diagnostics; used by the tests.
#[doc(hidden)]
pub fn last_error_string() -> Option<String> {
    let p = fracl_last_error_message();
    if p.is_null() {
        None
    } else {
        // SAFETY: non-null pointers from fracl_last_error_message are live
        // NUL-terminated strings owned by this thread.
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
