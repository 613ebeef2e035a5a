use super::{BandedMatrix, DenseMatrix, Norm};
use crate::error::{Error, Result};

/// Arrow (bordered band) matrix `[[B, C], [R, E]]`.
///
/// `B` is an `n x n` band matrix, `C` is `n x d`, `R` is `d x n` and `E` is
/// `d x d`. The full order is `n + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowMatrix {
    core: BandedMatrix,
    r: DenseMatrix,
    c: DenseMatrix,
    e: DenseMatrix,
}

impl ArrowMatrix {
    pub fn new(core: BandedMatrix, r: DenseMatrix, c: DenseMatrix, e: DenseMatrix) -> Result<Self> {
        let n = core.order();
        let d = e.rows();
        let check = |ctx: &'static str, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    context: ctx,
                    expected,
                    found,
                })
            }
        };
        check("border E square", d, e.cols())?;
        check("border R rows", d, r.rows())?;
        check("border R cols", n, r.cols())?;
        check("border C rows", n, c.rows())?;
        check("border C cols", d, c.cols())?;
        Ok(Self { core, r, c, e })
    }

    /// Splits a dense matrix into core and border, checking the core band.
    pub fn from_dense(
        a: &DenseMatrix,
        core_order: usize,
        lower: usize,
        upper: usize,
    ) -> Result<Self> {
        if !a.is_square() || core_order > a.rows() {
            return Err(Error::DimensionMismatch {
                context: "arrow from dense",
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = core_order;
        let d = a.rows() - n;
        let idx_core: Vec<usize> = (0..n).collect();
        let idx_border: Vec<usize> = (n..n + d).collect();
        let core = BandedMatrix::from_dense(&a.submatrix(&idx_core, &idx_core), lower, upper)?;
        Self::new(
            core,
            a.submatrix(&idx_border, &idx_core),
            a.submatrix(&idx_core, &idx_border),
            a.submatrix(&idx_border, &idx_border),
        )
    }

    pub fn core(&self) -> &BandedMatrix {
        &self.core
    }

    pub fn border_rows(&self) -> &DenseMatrix {
        &self.r
    }

    pub fn border_cols(&self) -> &DenseMatrix {
        &self.c
    }

    pub fn corner(&self) -> &DenseMatrix {
        &self.e
    }

    pub fn core_order(&self) -> usize {
        self.core.order()
    }

    pub fn border(&self) -> usize {
        self.e.rows()
    }

    pub fn order(&self) -> usize {
        self.core_order() + self.border()
    }

    pub fn lower(&self) -> usize {
        self.core.lower()
    }

    pub fn upper(&self) -> usize {
        self.core.upper()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let n = self.core_order();
        match (i < n, j < n) {
            (true, true) => self.core.get(i, j),
            (true, false) => self.c[(i, j - n)],
            (false, true) => self.r[(i - n, j)],
            (false, false) => self.e[(i - n, j - n)],
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.core_order();
        let mut a = DenseMatrix::zeros(self.order(), self.order());
        for i in 0..n {
            for j in self.core.stored_cols(i) {
                a[(i, j)] = self.core.get(i, j);
            }
        }
        for i in 0..self.order() {
            for j in 0..self.order() {
                if i >= n || j >= n {
                    a[(i, j)] = self.get(i, j);
                }
            }
        }
        a
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order() {
            return Err(Error::DimensionMismatch {
                context: "arrow matvec",
                expected: self.order(),
                found: x.len(),
            });
        }
        let n = self.core_order();
        let (xb, xd) = x.split_at(n);
        let mut y = self.core.matvec(xb)?;
        let cy = self.c.matvec(xd)?;
        for (a, b) in y.iter_mut().zip(cy) {
            *a += b;
        }
        let ry = self.r.matvec(xb)?;
        let ey = self.e.matvec(xd)?;
        y.extend(ry.into_iter().zip(ey).map(|(a, b)| a + b));
        Ok(y)
    }

    pub fn norm(&self, p: Norm) -> f64 {
        self.to_dense().norm(p)
    }
}
