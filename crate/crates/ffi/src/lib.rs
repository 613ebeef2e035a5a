//! C ABI for the matstretch solvers.
//!
//! Every function returns an `MsStatus`; on failure a description is
//! available from `ms_last_error` on the same thread. Handles are opaque
//! and must be released with their `_free` function. No function unwinds
//! across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use matstretch::arrow::{predicted_counts, StretchedSolver};
use matstretch::bench::figure6_matrix;
use matstretch::blockelim::{be_factor, be_solve, dbe_factor, dbe_solve};
use matstretch::lu::{dense_lu, dense_lu_restricted, OpCounts};
use matstretch::matrix::{ArrowMatrix, DenseMatrix, Norm};
use matstretch::spectral::{cond, CondNorm};
use matstretch::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Singular = 4,
    Breakdown = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsMethod {
    /// Dense LU with unrestricted partial pivoting.
    Full = 0,
    /// Dense LU with the pivot search limited to the lower bandwidth.
    Restricted = 1,
    /// Row stretching of the border followed by band LU.
    Stretch = 2,
    /// Block elimination (single border only).
    BlockElimination = 3,
    /// Deflated block elimination (single border only).
    DeflatedBlockElimination = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsNorm {
    One = 0,
    Two = 1,
    Inf = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MsOpCounts {
    pub comparisons: u64,
    pub divisions: u64,
    pub multiplications: u64,
    pub subtractions: u64,
    pub total: u64,
}

impl From<OpCounts> for MsOpCounts {
    fn from(c: OpCounts) -> Self {
        Self {
            comparisons: c.comparisons,
            divisions: c.divisions,
            multiplications: c.multiplications,
            subtractions: c.subtractions,
            total: c.total(),
        }
    }
}

/// Work done by one call to ms_solve.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MsSolveReport {
    pub factor: MsOpCounts,
    pub solve: MsOpCounts,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MsPredictedCounts {
    pub order: u64,
    pub factor: u64,
    pub solve: u64,
}

/// An arrow matrix: band core with `border` dense trailing rows and columns.
pub struct MsArrow {
    inner: ArrowMatrix,
}

/// A factored stretched arrow matrix, reusable for many right sides.
pub struct MsFactorization {
    solver: StretchedSolver,
    original_order: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MsStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::BorderDepth { .. } => MsStatus::DimensionMismatch,
        Error::SingularStep { .. } | Error::ZeroDiagonal { .. } => MsStatus::Singular,
        Error::Breakdown(_) => MsStatus::Breakdown,
        _ => MsStatus::InvalidArgument,
    }
}

struct Fail(MsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MsStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            MsStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic");
            MsStatus::Panic
        }
    }
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

fn check_len(what: &str, expected: usize, found: usize) -> Result<(), Fail> {
    if expected == found {
        Ok(())
    } else {
        Err(Fail(
            MsStatus::DimensionMismatch,
            format!("{what} has length {found}, expected {expected}"),
        ))
    }
}

fn glue_norm(n: MsNorm) -> Result<Norm, Fail> {
    match n {
        MsNorm::One => Ok(Norm::One),
        MsNorm::Inf => Ok(Norm::Inf),
        MsNorm::Two => Err(Fail(
            MsStatus::InvalidArgument,
            "glue norm must be 1 or inf".into(),
        )),
    }
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ms_status_message(status: MsStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MsStatus::Ok => b"ok\0",
        MsStatus::NullPointer => b"null pointer argument\0",
        MsStatus::InvalidArgument => b"invalid argument\0",
        MsStatus::DimensionMismatch => b"dimension mismatch\0",
        MsStatus::Singular => b"singular matrix\0",
        MsStatus::Breakdown => b"method breakdown\0",
        MsStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Detail for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds an arrow matrix from a dense row-major array of order
/// `core_order + border`. Entries outside the band of the core must be zero.
///
/// # Safety
/// `dense` must point to `(core_order + border)^2` doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ms_arrow_new(
    core_order: usize,
    border: usize,
    lower: usize,
    upper: usize,
    dense: *const f64,
    out: *mut *mut MsArrow,
) -> MsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let n = core_order
            .checked_add(border)
            .filter(|n| n.checked_mul(*n).is_some())
            .ok_or_else(|| Fail(MsStatus::InvalidArgument, "order too large".into()))?;
        let data = input(dense, n * n, "dense")?;
        let a = DenseMatrix::new(n, n, data.to_vec())?;
        let inner = ArrowMatrix::from_dense(&a, core_order, lower, upper)?;
        store(out, MsArrow { inner });
        Ok(())
    })
}

/// Member of the tridiagonal test family with one all-ones border, of total
/// order `order` and diagonal `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_arrow_family(t: f64, order: usize, out: *mut *mut MsArrow) -> MsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        store(
            out,
            MsArrow {
                inner: figure6_matrix(t, order)?,
            },
        );
        Ok(())
    })
}

/// Total order of an arrow matrix, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_arrow_order(a: *const MsArrow) -> usize {
    a.as_ref().map_or(0, |a| a.inner.order())
}

/// # Safety
/// `a` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_arrow_free(a: *mut MsArrow) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Solves `A x = y` with one method. `glue` selects the glue scaling for the
/// stretching method and is ignored otherwise. `report` may be null.
///
/// # Safety
/// `y` and `x` must each hold `len` doubles; `report` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ms_solve(
    a: *const MsArrow,
    method: MsMethod,
    glue: MsNorm,
    y: *const f64,
    x: *mut f64,
    len: usize,
    report: *mut MsSolveReport,
) -> MsStatus {
    guard(|| {
        let a = &a.as_ref().ok_or_else(|| null("matrix"))?.inner;
        check_len("right side", a.order(), len)?;
        let y = input(y, len, "y")?;
        let sum = |steps: &[matstretch::blockelim::Step]| {
            steps
                .iter()
                .fold(OpCounts::default(), |acc, s| acc + s.counts)
        };
        let (sol, factor, solve) = match method {
            MsMethod::Full | MsMethod::Restricted => {
                let d = a.to_dense();
                let f = if method == MsMethod::Full {
                    dense_lu(&d)?
                } else {
                    dense_lu_restricted(&d, a.lower())?
                };
                let (sol, c) = f.solve(y)?;
                (sol, f.counts(), c)
            }
            MsMethod::Stretch => {
                let s = StretchedSolver::new(a, glue_norm(glue)?)?;
                let (sol, c) = s.solve(y)?;
                (sol, s.lu.counts(), c)
            }
            MsMethod::BlockElimination => {
                let f = be_factor(a)?;
                let s = be_solve(&f, y)?;
                (s.x.clone(), sum(&f.steps), s.total())
            }
            MsMethod::DeflatedBlockElimination => {
                let f = dbe_factor(a)?;
                let s = dbe_solve(&f, y)?;
                (s.x.clone(), sum(&f.steps), s.total())
            }
        };
        output(x, len, "x")?.copy_from_slice(&sol);
        if let Some(r) = report.as_mut() {
            *r = MsSolveReport {
                factor: factor.into(),
                solve: solve.into(),
            };
        }
        Ok(())
    })
}

/// Stretches and factors an arrow matrix once for repeated solves.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_stretch_factor(
    a: *const MsArrow,
    glue: MsNorm,
    out: *mut *mut MsFactorization,
) -> MsStatus {
    guard(|| {
        let a = &a.as_ref().ok_or_else(|| null("matrix"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let solver = StretchedSolver::new(a, glue_norm(glue)?)?;
        store(
            out,
            MsFactorization {
                solver,
                original_order: a.order(),
            },
        );
        Ok(())
    })
}

/// Order of the stretched matrix, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_factorization_order(f: *const MsFactorization) -> usize {
    f.as_ref().map_or(0, |f| f.solver.stretched.order())
}

/// Operation counts of the factorization.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_factorization_counts(
    f: *const MsFactorization,
    out: *mut MsOpCounts,
) -> MsStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("factorization"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = f.solver.lu.counts().into();
        Ok(())
    })
}

/// Solves with a stored factorization; `len` is the original order.
/// `counts` may be null.
///
/// # Safety
/// `y` and `x` must each hold `len` doubles; `counts` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ms_factorization_solve(
    f: *const MsFactorization,
    y: *const f64,
    x: *mut f64,
    len: usize,
    counts: *mut MsOpCounts,
) -> MsStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("factorization"))?;
        check_len("right side", f.original_order, len)?;
        let (sol, c) = f.solver.solve(input(y, len, "y")?)?;
        output(x, len, "x")?.copy_from_slice(&sol);
        if let Some(out) = counts.as_mut() {
            *out = c.into();
        }
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_factorization_free(f: *mut MsFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Closed-form stretched order and operation counts for core order `n`,
/// bandwidths `lower`/`upper` and `border` dense rows and columns.
/// The solve count covers the band part of the factors only.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_predicted_counts(
    n: u64,
    lower: u64,
    upper: u64,
    border: u64,
    out: *mut MsPredictedCounts,
) -> MsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = predicted_counts(n, lower, upper, border)?;
        *out = MsPredictedCounts {
            order: p.order,
            factor: p.factor,
            solve: p.solve,
        };
        Ok(())
    })
}

/// Condition number from an explicit inverse (1 and inf) or singular values
/// (2). A singular matrix yields infinity with status `Ok`.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_cond(a: *const MsArrow, norm: MsNorm, out: *mut f64) -> MsStatus {
    guard(|| {
        let a = &a.as_ref().ok_or_else(|| null("matrix"))?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = match norm {
            MsNorm::One => CondNorm::One,
            MsNorm::Two => CondNorm::Two,
            MsNorm::Inf => CondNorm::Inf,
        };
        *out = cond(&a.to_dense(), p)?.or_inf();
        Ok(())
    })
}
