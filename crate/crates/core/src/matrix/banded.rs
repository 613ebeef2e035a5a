use super::{DenseMatrix, Norm};
use crate::error::{Error, Result};

/// Square band matrix with strict lower bandwidth `lower` and strict upper
/// bandwidth `upper`.
///
/// Storage is row-wise: row `i` keeps columns `i - lower ..= i + storage_upper`,
/// where `storage_upper >= upper` reserves room for fill created by row
/// interchanges.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    storage_upper: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(n: usize, lower: usize, upper: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("band matrix of order 0".into()));
        }
        Ok(Self {
            n,
            lower,
            upper,
            storage_upper: upper,
            data: vec![0.0; n * (lower + upper + 1)],
        })
    }

    /// Copy with `storage_upper` widened to `fill` (never narrowed below `upper`).
    pub fn with_fill(&self, fill: usize) -> Self {
        let fill = fill.max(self.upper);
        let mut out = Self {
            n: self.n,
            lower: self.lower,
            upper: self.upper,
            storage_upper: fill,
            data: vec![0.0; self.n * (self.lower + fill + 1)],
        };
        for i in 0..self.n {
            for j in self.stored_cols(i) {
                let v = self.get(i, j);
                if v != 0.0 {
                    let s = out.slot(i, j).expect("widened storage");
                    out.data[s] = v;
                }
            }
        }
        out
    }

    pub fn from_dense(a: &DenseMatrix, lower: usize, upper: usize) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                context: "band from dense",
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let mut b = Self::new(a.rows(), lower, upper)?;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v = a[(i, j)];
                if v != 0.0 {
                    b.set(i, j, v)?;
                }
            }
        }
        Ok(b)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower(&self) -> usize {
        self.lower
    }

    #[inline]
    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    pub fn storage_upper(&self) -> usize {
        self.storage_upper
    }

    #[inline]
    fn width(&self) -> usize {
        self.lower + self.storage_upper + 1
    }

    /// Whether `(i, j)` lies inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.lower && j <= i + self.upper
    }

    #[inline]
    pub(crate) fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || i > j + self.lower || j > i + self.storage_upper {
            return None;
        }
        Some(i * self.width() + (j + self.lower - i))
    }

    /// Columns held in storage for row `i`.
    pub fn stored_cols(&self, i: usize) -> std::ops::Range<usize> {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.storage_upper + 1).min(self.n);
        lo..hi
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::NonFinite { row: i, col: j });
        }
        if i >= self.n || j >= self.n {
            return Err(Error::OutOfRange {
                row: i,
                col: j,
                rows: self.n,
                cols: self.n,
            });
        }
        match self.slot(i, j) {
            Some(s) => {
                self.data[s] = v;
                Ok(())
            }
            None => Err(Error::OutsideBand { row: i, col: j }),
        }
    }

    /// Unchecked write used by the factorization kernels.
    #[inline]
    pub(crate) fn put(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).expect("write inside band storage");
        self.data[s] = v;
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.stored_cols(i) {
                d[(i, j)] = self.get(i, j);
            }
        }
        d
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "band matvec",
                expected: self.n,
                found: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| self.stored_cols(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    pub fn norm(&self, p: Norm) -> f64 {
        match p {
            Norm::Inf => (0..self.n)
                .map(|i| {
                    self.stored_cols(i)
                        .map(|j| self.get(i, j).abs())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
            Norm::One => {
                let mut sums = vec![0.0; self.n];
                for i in 0..self.n {
                    for j in self.stored_cols(i) {
                        sums[j] += self.get(i, j).abs();
                    }
                }
                sums.into_iter().fold(0.0, f64::max)
            }
        }
    }
}
