use std::ffi::CStr;
use std::ptr;

use matstretch_ffi::*;

fn family(t: f64, order: usize) -> *mut MsArrow {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { ms_arrow_family(t, order, &mut a) }, MsStatus::Ok);
    a
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ms_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn rel(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum();
    let den: f64 = y.iter().map(|q| q * q).sum();
    (num / den).sqrt()
}

#[test]
fn all_methods_agree_on_a_well_conditioned_member() {
    let a = family(6.0, 51);
    assert_eq!(unsafe { ms_arrow_order(a) }, 51);
    let y: Vec<f64> = (0..51).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut full = vec![0.0; 51];
    let mut rep = MsSolveReport::default();
    let st = unsafe {
        ms_solve(
            a,
            MsMethod::Full,
            MsNorm::Inf,
            y.as_ptr(),
            full.as_mut_ptr(),
            51,
            &mut rep,
        )
    };
    assert_eq!(st, MsStatus::Ok);
    assert!(rep.factor.total > 0 && rep.solve.total > 0);
    for m in [
        MsMethod::Restricted,
        MsMethod::Stretch,
        MsMethod::BlockElimination,
        MsMethod::DeflatedBlockElimination,
    ] {
        let mut x = vec![0.0; 51];
        let st = unsafe {
            ms_solve(
                a,
                m,
                MsNorm::One,
                y.as_ptr(),
                x.as_mut_ptr(),
                51,
                ptr::null_mut(),
            )
        };
        assert_eq!(st, MsStatus::Ok, "{m:?}: {}", last_error());
        assert!(rel(&x, &full) <= 1e-12, "{m:?}");
    }
    unsafe { ms_arrow_free(a) };
}

#[test]
fn stored_factorization_matches_one_shot_counts() {
    let a = family(-1.0, 51);
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ms_stretch_factor(a, MsNorm::Inf, &mut f) },
        MsStatus::Ok
    );
    assert_eq!(unsafe { ms_factorization_order(f) }, 75);

    let mut pred = MsPredictedCounts::default();
    assert_eq!(
        unsafe { ms_predicted_counts(50, 1, 1, 1, &mut pred) },
        MsStatus::Ok
    );
    assert_eq!((pred.order, pred.factor), (75, 1452));
    let mut fc = MsOpCounts::default();
    assert_eq!(unsafe { ms_factorization_counts(f, &mut fc) }, MsStatus::Ok);
    assert_eq!(fc.total, pred.factor);

    let y = vec![1.0; 51];
    let (mut x1, mut x2) = (vec![0.0; 51], vec![0.0; 51]);
    let mut sc = MsOpCounts::default();
    let mut rep = MsSolveReport::default();
    unsafe {
        assert_eq!(
            ms_factorization_solve(f, y.as_ptr(), x1.as_mut_ptr(), 51, &mut sc),
            MsStatus::Ok
        );
        assert_eq!(
            ms_solve(
                a,
                MsMethod::Stretch,
                MsNorm::Inf,
                y.as_ptr(),
                x2.as_mut_ptr(),
                51,
                &mut rep
            ),
            MsStatus::Ok
        );
    }
    assert_eq!(x1, x2);
    assert_eq!(sc, rep.solve);
    assert_eq!(rep.factor, fc);
    unsafe {
        ms_factorization_free(f);
        ms_arrow_free(a);
    }
}

#[test]
fn dense_input_round_trips() {
    // tridiagonal core of order 3 with one border
    #[rustfmt::skip]
    let dense = [
        4.0, 1.0, 0.0, 1.0,
        1.0, 4.0, 1.0, 2.0,
        0.0, 1.0, 4.0, 3.0,
        1.0, 1.0, 1.0, 9.0,
    ];
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { ms_arrow_new(3, 1, 1, 1, dense.as_ptr(), &mut a) },
        MsStatus::Ok
    );
    let x_true = [1.0, -2.0, 0.5, 3.0];
    let y: Vec<f64> = (0..4)
        .map(|i| (0..4).map(|j| dense[4 * i + j] * x_true[j]).sum())
        .collect();
    let mut x = [0.0; 4];
    let st = unsafe {
        ms_solve(
            a,
            MsMethod::Stretch,
            MsNorm::Inf,
            y.as_ptr(),
            x.as_mut_ptr(),
            4,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, MsStatus::Ok);
    assert!(rel(&x, &x_true) <= 1e-14);

    let mut k = 0.0;
    assert_eq!(unsafe { ms_cond(a, MsNorm::Two, &mut k) }, MsStatus::Ok);
    assert!(k > 1.0 && k.is_finite());
    unsafe { ms_arrow_free(a) };

    // nonzero outside the declared band
    let mut bad = dense;
    bad[2] = 5.0;
    let mut a = ptr::null_mut();
    assert_ne!(
        unsafe { ms_arrow_new(3, 1, 1, 1, bad.as_ptr(), &mut a) },
        MsStatus::Ok
    );
    assert!(a.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn failures_map_to_status_codes() {
    let a = family(2.0, 9);
    let y = [1.0; 9];
    let mut x = [0.0; 9];
    unsafe {
        assert_eq!(
            ms_solve(
                a,
                MsMethod::Full,
                MsNorm::Inf,
                y.as_ptr(),
                x.as_mut_ptr(),
                8,
                ptr::null_mut()
            ),
            MsStatus::DimensionMismatch
        );
        assert_eq!(
            ms_solve(
                a,
                MsMethod::Full,
                MsNorm::Inf,
                ptr::null(),
                x.as_mut_ptr(),
                9,
                ptr::null_mut()
            ),
            MsStatus::NullPointer
        );
        assert_eq!(
            ms_solve(
                a,
                MsMethod::Stretch,
                MsNorm::Two,
                y.as_ptr(),
                x.as_mut_ptr(),
                9,
                ptr::null_mut()
            ),
            MsStatus::InvalidArgument
        );
        let mut b = ptr::null_mut();
        assert_eq!(ms_arrow_family(0.0, 2, &mut b), MsStatus::InvalidArgument);
        assert_eq!(
            ms_predicted_counts(5, 3, 3, 1, ptr::null_mut()),
            MsStatus::NullPointer
        );
        ms_arrow_free(a);
        ms_arrow_free(ptr::null_mut());
        ms_factorization_free(ptr::null_mut());
    }

    // exactly singular, and without a border block elimination does not apply
    let mut d = ptr::null_mut();
    #[rustfmt::skip]
    let sing = [
        1.0, 1.0, 0.0,
        1.0, 1.0, 0.0,
        0.0, 0.0, 0.0,
    ];
    assert_eq!(
        unsafe { ms_arrow_new(3, 0, 1, 1, sing.as_ptr(), &mut d) },
        MsStatus::Ok
    );
    let mut x = [0.0; 3];
    let st = unsafe {
        ms_solve(
            d,
            MsMethod::Full,
            MsNorm::Inf,
            [1.0; 3].as_ptr(),
            x.as_mut_ptr(),
            3,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, MsStatus::Singular, "{}", last_error());
    let st = unsafe {
        ms_solve(
            d,
            MsMethod::BlockElimination,
            MsNorm::Inf,
            [1.0; 3].as_ptr(),
            x.as_mut_ptr(),
            3,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, MsStatus::DimensionMismatch);
    unsafe { ms_arrow_free(d) };
}
