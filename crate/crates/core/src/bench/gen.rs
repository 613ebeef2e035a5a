//! Test-matrix families.

use super::rng::SeededRng;
use crate::error::{Error, Result};
use crate::matrix::{ArrowMatrix, BandedMatrix, DenseMatrix};

/// Toeplitz band core (`-1` below, `t` on, `-2` above the diagonal) bordered
/// by `d` rows and columns. The first border row and column are all ones;
/// further ones follow cosine profiles so the border stays independent.
pub fn toeplitz_arrow(
    t: f64,
    n: usize,
    lower: usize,
    upper: usize,
    d: usize,
) -> Result<ArrowMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("core of order 0".into()));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter("non-finite diagonal".into()));
    }
    let mut core = BandedMatrix::new(n, lower, upper)?;
    for i in 0..n {
        for j in core.stored_cols(i) {
            let v = match j.cmp(&i) {
                std::cmp::Ordering::Less => -1.0,
                std::cmp::Ordering::Equal => t,
                std::cmp::Ordering::Greater => -2.0,
            };
            core.set(i, j, v)?;
        }
    }
    let profile = |k: usize, j: usize| {
        if k == 0 {
            1.0
        } else {
            (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()
        }
    };
    let mut r = DenseMatrix::zeros(d, n);
    let mut c = DenseMatrix::zeros(n, d);
    for k in 0..d {
        for j in 0..n {
            r[(k, j)] = profile(k, j);
            c[(j, k)] = profile(k, j);
        }
    }
    ArrowMatrix::new(core, r, c, DenseMatrix::identity(d))
}

/// The tridiagonal test family of order `order` with a single border.
pub fn figure6_matrix(t: f64, order: usize) -> Result<ArrowMatrix> {
    if order < 3 {
        return Err(Error::InvalidParameter("order must be at least 3".into()));
    }
    toeplitz_arrow(t, order - 1, 1, 1, 1)
}

/// `count` right-hand sides with entries uniform in `[-1, 1)`.
pub fn rhs_set(order: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeededRng::new(seed);
    (0..count)
        .map(|_| (0..order).map(|_| rng.next_signed()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_family_member() {
        let a = figure6_matrix(2.0, 3).unwrap().to_dense();
        assert_eq!(
            a,
            DenseMatrix::from_rows(&[[2.0, -2.0, 1.0], [-1.0, 2.0, 1.0], [1.0, 1.0, 1.0]]).unwrap()
        );
        assert!(figure6_matrix(2.0, 2).is_err());
    }

    #[test]
    fn small_family_member() {
        let a = figure6_matrix(0.5, 5).unwrap().to_dense();
        let expect = DenseMatrix::from_rows(&[
            [0.5, -2.0, 0.0, 0.0, 1.0],
            [-1.0, 0.5, -2.0, 0.0, 1.0],
            [0.0, -1.0, 0.5, -2.0, 1.0],
            [0.0, 0.0, -1.0, 0.5, 1.0],
            [1.0, 1.0, 1.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(a, expect);
    }

    #[test]
    fn rhs_reproducible() {
        assert_eq!(rhs_set(7, 3, 9), rhs_set(7, 3, 9));
        assert_ne!(rhs_set(7, 3, 9), rhs_set(7, 3, 10));
    }
}
