//! Gaussian elimination with partial pivoting and exact operation counts.
//!
//! Factors are kept in LINPACK form: step `k` records the transposition
//! `k <-> pivots[k]` and stores its multipliers in column `k` below the
//! diagonal. Row interchanges only touch columns `k..`, so earlier multipliers
//! are never permuted.
//!
//! Counts are structural: every position the elimination visits is counted,
//! whether or not it happens to hold a zero.

use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::matrix::{BandedMatrix, DenseMatrix, Permutation};

/// Scalar operation tallies. Additions are counted as subtractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub comparisons: u64,
    pub divisions: u64,
    pub multiplications: u64,
    pub subtractions: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.comparisons + self.divisions + self.multiplications + self.subtractions
    }
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(self, o: OpCounts) -> OpCounts {
        OpCounts {
            comparisons: self.comparisons + o.comparisons,
            divisions: self.divisions + o.divisions,
            multiplications: self.multiplications + o.multiplications,
            subtractions: self.subtractions + o.subtractions,
        }
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, o: OpCounts) {
        *self = *self + o;
    }
}

/// Which kernel produced a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceShape {
    Dense,
    /// Dense elimination, pivot searched only `window` rows below the diagonal.
    Restricted {
        window: usize,
    },
    Banded {
        lower: usize,
        upper: usize,
    },
    /// Band kernel with `dense_cols` trailing dense columns.
    Stretched {
        lower: usize,
        upper: usize,
        dense_cols: usize,
    },
}

/// Share of stored nonzeros relative to a reference order squared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillStats {
    /// Nonzero multipliers (the unit diagonal is not counted).
    pub l_nonzeros: usize,
    /// Nonzeros of U, diagonal included.
    pub u_nonzeros: usize,
    pub denominator: usize,
    pub percent: f64,
}

#[derive(Debug, Clone)]
struct BandStore {
    band: BandedMatrix,
    tail: DenseMatrix,
    tail_start: usize,
    lower: usize,
    fill: usize,
}

impl BandStore {
    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        if j >= self.tail_start {
            self.tail[(i, j - self.tail_start)]
        } else {
            self.band.get(i, j)
        }
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, v: f64) {
        if j >= self.tail_start {
            self.tail[(i, j - self.tail_start)] = v;
        } else {
            self.band.put(i, j, v);
        }
    }
}

#[derive(Debug, Clone)]
enum Factors {
    Dense(DenseMatrix),
    Band(BandStore),
}

impl Factors {
    fn order(&self) -> usize {
        match self {
            Factors::Dense(a) => a.rows(),
            Factors::Band(b) => b.band.order(),
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Factors::Dense(a) => a[(i, j)],
            Factors::Band(b) => b.get(i, j),
        }
    }

    /// Rows holding multipliers of step `k`.
    fn lower_rows(&self, k: usize) -> std::ops::Range<usize> {
        let n = self.order();
        match self {
            Factors::Dense(_) => k + 1..n,
            Factors::Band(b) => k + 1..(k + b.lower + 1).min(n),
        }
    }

    /// Structural strictly-upper columns of row `k` of U.
    fn upper_cols(&self, k: usize) -> UpperCols {
        let n = self.order();
        match self {
            Factors::Dense(_) => UpperCols {
                band: k + 1..n,
                tail: n..n,
            },
            Factors::Band(b) => {
                let band_end = (k + b.fill + 1).min(b.tail_start).max(k + 1);
                UpperCols {
                    band: k + 1..band_end,
                    tail: b.tail_start.max(k + 1)..n,
                }
            }
        }
    }
}

struct UpperCols {
    band: std::ops::Range<usize>,
    tail: std::ops::Range<usize>,
}

impl UpperCols {
    fn len(&self) -> usize {
        self.band.len() + self.tail.len()
    }

    fn iter(&self) -> impl Iterator<Item = usize> {
        self.band.clone().chain(self.tail.clone())
    }
}

/// An LU factorization together with the operations it cost.
#[derive(Debug, Clone)]
pub struct CountingLU {
    factors: Factors,
    pivots: Vec<usize>,
    shape: SourceShape,
    counts: OpCounts,
}

fn check_rhs(n: usize, y: &[f64]) -> Result<()> {
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            context: "right-hand side",
            expected: n,
            found: y.len(),
        });
    }
    Ok(())
}

impl CountingLU {
    pub fn order(&self) -> usize {
        self.factors.order()
    }

    pub fn shape(&self) -> SourceShape {
        self.shape
    }

    /// Operations spent by the factorization.
    pub fn counts(&self) -> OpCounts {
        self.counts
    }

    /// Transposition applied at each step.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `P` with `P A = (I + L) U`, where `L` is [`Self::permuted_lower`].
    pub fn permutation(&self) -> Permutation {
        Permutation::from_transpositions(self.order(), &self.pivots)
    }

    /// Multiplier of step `k` stored in row `i`.
    pub fn multiplier(&self, i: usize, k: usize) -> f64 {
        if i > k && self.factors.lower_rows(k).contains(&i) {
            self.factors.get(i, k)
        } else {
            0.0
        }
    }

    pub fn upper(&self, k: usize, j: usize) -> f64 {
        if j == k || (j > k && self.factors.upper_cols(k).iter().any(|c| c == j)) {
            self.factors.get(k, j)
        } else {
            0.0
        }
    }

    pub fn u_factor(&self) -> DenseMatrix {
        let n = self.order();
        let mut u = DenseMatrix::zeros(n, n);
        for k in 0..n {
            u[(k, k)] = self.factors.get(k, k);
            for j in self.factors.upper_cols(k).iter() {
                u[(k, j)] = self.factors.get(k, j);
            }
        }
        u
    }

    /// Multipliers in Gauss-transform form: column `k` holds step `k`.
    pub fn stored_lower(&self) -> DenseMatrix {
        let n = self.order();
        let mut l = DenseMatrix::zeros(n, n);
        for k in 0..n {
            for i in self.factors.lower_rows(k) {
                l[(i, k)] = self.factors.get(i, k);
            }
        }
        l
    }

    /// Strictly lower factor in LAPACK form, later interchanges applied.
    pub fn permuted_lower(&self) -> DenseMatrix {
        let n = self.order();
        let stored = self.stored_lower();
        let mut l = DenseMatrix::zeros(n, n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                for j in 0..k {
                    let t = l[(k, j)];
                    l[(k, j)] = l[(p, j)];
                    l[(p, j)] = t;
                }
            }
            for i in k + 1..n {
                l[(i, k)] = stored[(i, k)];
            }
        }
        l
    }

    pub fn determinant(&self) -> f64 {
        let swaps = self
            .pivots
            .iter()
            .enumerate()
            .filter(|(k, p)| *k != **p)
            .count();
        let prod: f64 = (0..self.order()).map(|k| self.factors.get(k, k)).product();
        if swaps % 2 == 0 {
            prod
        } else {
            -prod
        }
    }

    /// Position and value of the diagonal entry of U with least magnitude.
    pub fn smallest_pivot(&self) -> (usize, f64) {
        let mut best = (0, self.factors.get(0, 0));
        for k in 1..self.order() {
            let v = self.factors.get(k, k);
            if v.abs() < best.1.abs() {
                best = (k, v);
            }
        }
        best
    }

    pub fn fill_stats(&self, denominator: usize) -> FillStats {
        let n = self.order();
        let mut l_nz = 0;
        let mut u_nz = 0;
        for k in 0..n {
            l_nz += self
                .factors
                .lower_rows(k)
                .filter(|&i| self.factors.get(i, k) != 0.0)
                .count();
            if self.factors.get(k, k) != 0.0 {
                u_nz += 1;
            }
            u_nz += self
                .factors
                .upper_cols(k)
                .iter()
                .filter(|&j| self.factors.get(k, j) != 0.0)
                .count();
        }
        FillStats {
            l_nonzeros: l_nz,
            u_nonzeros: u_nz,
            denominator,
            percent: 100.0 * (l_nz + u_nz) as f64 / (denominator as f64).powi(2),
        }
    }

    /// Solves `A x = y`.
    pub fn solve(&self, y: &[f64]) -> Result<(Vec<f64>, OpCounts)> {
        let n = self.order();
        check_rhs(n, y)?;
        let f = &self.factors;
        let mut c = OpCounts::default();
        let mut x = y.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for i in f.lower_rows(k) {
                x[i] -= f.get(i, k) * xk;
                c.multiplications += 1;
                c.subtractions += 1;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            let cols = f.upper_cols(k);
            for j in cols.iter() {
                s -= f.get(k, j) * x[j];
            }
            c.multiplications += cols.len() as u64;
            c.subtractions += cols.len() as u64;
            x[k] = s / f.get(k, k);
            c.divisions += 1;
        }
        Ok((x, c))
    }

    /// Solves `A^T x = y`.
    pub fn transpose_solve(&self, y: &[f64]) -> Result<(Vec<f64>, OpCounts)> {
        let n = self.order();
        check_rhs(n, y)?;
        let f = &self.factors;
        let mut c = OpCounts::default();
        let mut x = y.to_vec();
        for k in 0..n {
            x[k] /= f.get(k, k);
            c.divisions += 1;
            let xk = x[k];
            let cols = f.upper_cols(k);
            for j in cols.iter() {
                x[j] -= f.get(k, j) * xk;
            }
            c.multiplications += cols.len() as u64;
            c.subtractions += cols.len() as u64;
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for i in f.lower_rows(k) {
                s -= f.get(i, k) * x[i];
                c.multiplications += 1;
                c.subtractions += 1;
            }
            x[k] = s;
            x.swap(k, self.pivots[k]);
        }
        Ok((x, c))
    }
}

fn dense_kernel(
    a: &DenseMatrix,
    window: Option<usize>,
) -> Result<(DenseMatrix, Vec<usize>, OpCounts)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "LU of non-square matrix",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::InvalidParameter("LU of an empty matrix".into()));
    }
    let mut w = a.clone();
    let mut piv = vec![0; n];
    let mut c = OpCounts::default();
    for k in 0..n {
        let r = (n - 1 - k) as u64;
        let last = window.map_or(n - 1, |l| (k + l).min(n - 1));
        c.comparisons += (last - k) as u64;
        let mut p = k;
        for i in k + 1..=last {
            if w[(i, k)].abs() > w[(p, k)].abs() {
                p = i;
            }
        }
        if w[(p, k)] == 0.0 {
            return Err(Error::SingularStep { step: k });
        }
        piv[k] = p;
        if p != k {
            for j in k..n {
                let t = w[(k, j)];
                w[(k, j)] = w[(p, j)];
                w[(p, j)] = t;
            }
        }
        let pivot = w[(k, k)];
        for i in k + 1..n {
            w[(i, k)] /= pivot;
        }
        c.divisions += r;
        for i in k + 1..n {
            let m = w[(i, k)];
            for j in k + 1..n {
                w[(i, j)] -= m * w[(k, j)];
            }
        }
        c.multiplications += r * r;
        c.subtractions += r * r;
    }
    Ok((w, piv, c))
}

/// Dense partial pivoting over the whole remaining column.
pub fn dense_lu(a: &DenseMatrix) -> Result<CountingLU> {
    let (w, pivots, counts) = dense_kernel(a, None)?;
    Ok(CountingLU {
        factors: Factors::Dense(w),
        pivots,
        shape: SourceShape::Dense,
        counts,
    })
}

/// Dense elimination whose pivot is searched only among rows `k..=k+window`.
pub fn dense_lu_restricted(a: &DenseMatrix, window: usize) -> Result<CountingLU> {
    let (w, pivots, counts) = dense_kernel(a, Some(window))?;
    Ok(CountingLU {
        factors: Factors::Dense(w),
        pivots,
        shape: SourceShape::Restricted { window },
        counts,
    })
}

fn band_kernel(mut s: BandStore) -> Result<(BandStore, Vec<usize>, OpCounts)> {
    let n = s.band.order();
    let mut piv = vec![0; n];
    let mut c = OpCounts::default();
    let pattern = |s: &BandStore, k: usize| {
        let band_end = (k + s.fill + 1).min(s.tail_start).max(k + 1);
        UpperCols {
            band: k + 1..band_end,
            tail: s.tail_start.max(k + 1)..n,
        }
    };
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        let w = s.lower.min(n - 1 - k);
        c.comparisons += w as u64;
        let mut p = k;
        for i in k + 1..=k + w {
            if s.get(i, k).abs() > s.get(p, k).abs() {
                p = i;
            }
        }
        if s.get(p, k) == 0.0 {
            return Err(Error::SingularStep { step: k });
        }
        piv[k] = p;
        let cols = pattern(&s, k);
        if p != k {
            for j in std::iter::once(k).chain(cols.iter()) {
                let t = s.get(k, j);
                s.put(k, j, s.get(p, j));
                s.put(p, j, t);
            }
        }
        let pivot = s.get(k, k);
        for i in k + 1..=k + w {
            s.put(i, k, s.get(i, k) / pivot);
        }
        c.divisions += w as u64;
        for i in k + 1..=k + w {
            let m = s.get(i, k);
            for j in cols.iter() {
                s.put(i, j, s.get(i, j) - m * s.get(k, j));
            }
        }
        let ops = (w * cols.len()) as u64;
        c.multiplications += ops;
        c.subtractions += ops;
    }
    Ok((s, piv, c))
}

/// Band partial pivoting: pivot window `lower`, U fill up to `lower + upper`.
pub fn banded_lu(b: &BandedMatrix) -> Result<CountingLU> {
    let (l, u) = (b.lower(), b.upper());
    let store = BandStore {
        band: b.with_fill(l + u),
        tail: DenseMatrix::zeros(b.order(), 0),
        tail_start: b.order(),
        lower: l,
        fill: l + u,
    };
    let (s, pivots, counts) = band_kernel(store)?;
    Ok(CountingLU {
        factors: Factors::Band(s),
        pivots,
        shape: SourceShape::Banded { lower: l, upper: u },
        counts,
    })
}

/// Band kernel for a band part plus trailing dense columns.
///
/// `band` carries the lower/upper bandwidths; its last `tail.cols()` columns
/// are ignored in favour of `tail`, which holds those columns in full.
pub(crate) fn bordered_band_lu(band: &BandedMatrix, tail: &DenseMatrix) -> Result<CountingLU> {
    let n = band.order();
    let d = tail.cols();
    if tail.rows() != n || d > n {
        return Err(Error::DimensionMismatch {
            context: "dense tail rows",
            expected: n,
            found: tail.rows(),
        });
    }
    let (l, u) = (band.lower(), band.upper());
    let mut wide = band.with_fill(l + u);
    for i in 0..n {
        for j in wide.stored_cols(i) {
            if j >= n - d {
                wide.put(i, j, 0.0);
            }
        }
    }
    let store = BandStore {
        band: wide,
        tail: tail.clone(),
        tail_start: n - d,
        lower: l,
        fill: l + u,
    };
    let (s, pivots, counts) = band_kernel(store)?;
    Ok(CountingLU {
        factors: Factors::Band(s),
        pivots,
        shape: SourceShape::Stretched {
            lower: l,
            upper: u,
            dense_cols: d,
        },
        counts,
    })
}

/// Factorization operations of dense partial pivoting: `2n^3/3 - 2n/3`.
pub fn dense_factor_ops(n: u64) -> u64 {
    (2 * n * n * n - 2 * n) / 3
}

/// Solve operations with dense factors: `2n^2 - n`.
pub fn dense_solve_ops(n: u64) -> u64 {
    2 * n * n - n
}

/// Factorization operations of band partial pivoting, valid for `l + u < n`.
pub fn banded_factor_ops(n: u64, l: u64, u: u64) -> u64 {
    2 * l * (l + u + 1) * n - l * (4 * l * l + 6 * l * u + 3 * u * u + 6 * l + 3 * u + 2) / 3
}

/// Solve operations with band factors, valid for `l + u < n`.
pub fn banded_solve_ops(n: u64, l: u64, u: u64) -> u64 {
    (4 * l + 2 * u + 1) * n - (2 * l * l + 2 * l * u + u * u + 2 * l + u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize, sub: f64, diag: f64, sup: f64) -> BandedMatrix {
        let mut b = BandedMatrix::new(n, 1, 1).unwrap();
        for i in 0..n {
            b.set(i, i, diag).unwrap();
            if i > 0 {
                b.set(i, i - 1, sub).unwrap();
            }
            if i + 1 < n {
                b.set(i, i + 1, sup).unwrap();
            }
        }
        b
    }

    #[test]
    fn permutation_matrix_hand_trace() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let f = dense_lu(&a).unwrap();
        assert_eq!(f.pivots(), &[1, 1]);
        assert_eq!(f.u_factor(), DenseMatrix::identity(2));
        let c = f.counts();
        assert_eq!(
            (
                c.comparisons,
                c.divisions,
                c.multiplications,
                c.subtractions
            ),
            (1, 1, 1, 1)
        );
        assert_eq!(f.determinant(), -1.0);
    }

    #[test]
    fn dense_counts_small_orders() {
        for n in 1..8 {
            let a = DenseMatrix::identity(n);
            assert_eq!(
                dense_lu(&a).unwrap().counts().total(),
                dense_factor_ops(n as u64)
            );
        }
        assert_eq!(dense_factor_ops(3), 16);
        assert_eq!(dense_factor_ops(2), 4);
    }

    #[test]
    fn banded_formula_small_instance() {
        assert_eq!(banded_factor_ops(3, 1, 0), 8);
        assert_eq!(banded_solve_ops(3, 1, 0), 11);
        let mut b = BandedMatrix::new(3, 1, 0).unwrap();
        for i in 0..3 {
            b.set(i, i, 2.0).unwrap();
        }
        b.set(1, 0, 1.0).unwrap();
        b.set(2, 1, 1.0).unwrap();
        let f = banded_lu(&b).unwrap();
        assert_eq!(f.counts().total(), 8);
        assert_eq!(f.solve(&[1.0, 2.0, 3.0]).unwrap().1.total(), 11);
    }

    #[test]
    fn singular_window_reports_step() {
        let mut b = BandedMatrix::new(3, 1, 1).unwrap();
        b.set(0, 0, 1.0).unwrap();
        b.set(1, 1, 0.0).unwrap();
        b.set(2, 2, 1.0).unwrap();
        assert_eq!(banded_lu(&b).unwrap_err(), Error::SingularStep { step: 1 });
        let z = DenseMatrix::zeros(2, 2);
        assert_eq!(dense_lu(&z).unwrap_err(), Error::SingularStep { step: 0 });
    }

    #[test]
    fn banded_solve_matches_dense() {
        let b = tridiag(9, -1.0, 0.3, -2.0);
        let y: Vec<f64> = (0..9).map(|i| (i as f64).sin()).collect();
        let xb = banded_lu(&b).unwrap().solve(&y).unwrap().0;
        let xd = dense_lu(&b.to_dense()).unwrap().solve(&y).unwrap().0;
        for (a, c) in xb.iter().zip(&xd) {
            assert!((a - c).abs() <= 1e-12 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn transpose_solve_inverts_transpose() {
        let b = tridiag(7, -1.0, 0.5, -2.0);
        let f = banded_lu(&b).unwrap();
        let y = [1.0, -1.0, 2.0, 0.5, 0.0, 3.0, -2.0];
        let (x, c) = f.transpose_solve(&y).unwrap();
        let back = b.to_dense().transpose().matvec(&x).unwrap();
        for (a, c) in back.iter().zip(&y) {
            assert!((a - c).abs() < 1e-12);
        }
        assert_eq!(c.total(), f.solve(&y).unwrap().1.total());
    }

    #[test]
    fn identity_fill_is_twenty_percent() {
        let f = dense_lu(&DenseMatrix::identity(5)).unwrap();
        let s = f.fill_stats(5);
        assert_eq!((s.l_nonzeros, s.u_nonzeros), (0, 5));
        assert!((s.percent - 20.0).abs() < 1e-12);
    }
}
