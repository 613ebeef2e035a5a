//! Deliberately broken inputs that the self-checks must reject.

use matstretch::bench::verify::{check_band_counts, default_band_counter, verify_suite};
use matstretch::matrix::{BandedMatrix, DenseMatrix, Norm};
use matstretch::stretch::{
    check_glue_trees, glue_sigma, stretch_rows, verify_certificate, Blocks, StretchMode,
};

#[test]
fn production_suite_passes() {
    for r in verify_suite() {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
}

#[test]
fn off_by_one_counter_is_caught() {
    let broken = |b: &BandedMatrix| default_band_counter(b).map(|(f, s)| (f + 1, s));
    let r = check_band_counts(&broken);
    assert!(!r.passed);
    assert!(r.detail.contains("failed"), "{}", r.detail);

    // an error that only shows up once the band is wide enough
    let subtle = |b: &BandedMatrix| {
        default_band_counter(b).map(|(f, s)| {
            if b.lower() + b.upper() >= 6 {
                (f, s - 1)
            } else {
                (f, s)
            }
        })
    };
    assert!(!check_band_counts(&subtle).passed);
    assert!(check_band_counts(&default_band_counter).passed);
}

#[test]
fn flipped_glue_sign_is_caught() {
    let mut a = DenseMatrix::identity(5);
    for j in 0..5 {
        a[(4, j)] = 1.0 + j as f64;
    }
    let glue = glue_sigma(&a, StretchMode::Row, Norm::Inf).unwrap();
    let good = stretch_rows(&a, &[4], &Blocks::from_sizes(&[2, 1, 2]).unwrap(), &glue).unwrap();
    assert!(check_glue_trees(&good).ok);
    for k in 0..good.map.glue.len() {
        let mut bad = good.clone();
        let col = bad.map.glue[k];
        let row = (0..bad.order())
            .find(|&i| bad.matrix[(i, col)] > 0.0)
            .unwrap();
        bad.matrix[(row, col)] = -bad.matrix[(row, col)];
        let report = check_glue_trees(&bad);
        assert!(!report.ok);
        assert!(
            report
                .diagnostics
                .iter()
                .any(|d| d.contains("do not cancel")),
            "{:?}",
            report.diagnostics
        );
        assert!(verify_certificate(&a, &bad).is_err());
    }
}
