//! Singular values by one-sided Jacobi and condition numbers from explicit
//! inverses.

use crate::error::{Error, Result};
use crate::lu::{dense_lu, CountingLU};
use crate::matrix::{norm2, DenseMatrix, Norm};

/// Inverse assembled column by column from an existing factorization.
pub fn inverse_from(f: &CountingLU) -> DenseMatrix {
    let n = f.order();
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let (x, _) = f.solve(&e).expect("order checked");
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
        e[j] = 0.0;
    }
    inv
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(inverse_from(&dense_lu(a)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondNorm {
    One,
    Two,
    Inf,
}

impl From<Norm> for CondNorm {
    fn from(p: Norm) -> Self {
        match p {
            Norm::One => CondNorm::One,
            Norm::Inf => CondNorm::Inf,
        }
    }
}

/// Condition number; `finite == false` marks a singular or overflowing case,
/// with `value` the largest finite quantity that could be formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub value: f64,
    pub finite: bool,
}

impl Condition {
    fn from_product(a: f64, b: f64) -> Self {
        let v = a * b;
        if v.is_finite() {
            Condition {
                value: v,
                finite: true,
            }
        } else {
            Condition {
                value: if a.is_finite() { a } else { f64::MAX },
                finite: false,
            }
        }
    }

    /// `value` when finite, infinity otherwise.
    pub fn or_inf(&self) -> f64 {
        if self.finite {
            self.value
        } else {
            f64::INFINITY
        }
    }
}

pub fn cond(a: &DenseMatrix, p: CondNorm) -> Result<Condition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "condition number of non-square matrix",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    match p {
        CondNorm::Two => {
            let s = svd_values(a);
            let (max, min) = (s.values[0], *s.values.last().expect("nonempty"));
            if min == 0.0 {
                return Ok(Condition {
                    value: max,
                    finite: false,
                });
            }
            Ok(Condition::from_product(max, 1.0 / min))
        }
        CondNorm::One | CondNorm::Inf => {
            let norm = if p == CondNorm::One {
                Norm::One
            } else {
                Norm::Inf
            };
            match dense_lu(a) {
                Ok(f) => Ok(Condition::from_product(
                    a.norm(norm),
                    inverse_from(&f).norm(norm),
                )),
                Err(Error::SingularStep { .. }) => Ok(Condition {
                    value: a.norm(norm),
                    finite: false,
                }),
                Err(e) => Err(e),
            }
        }
    }
}

/// Singular values in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub values: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl SpectralReport {
    pub fn sigma_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

const MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi: rotate column pairs until all are
/// numerically orthogonal; singular values are the final column norms.
pub fn svd_values(a: &DenseMatrix) -> SpectralReport {
    let w = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (m, n) = (w.rows(), w.cols());
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| w.column(j)).collect();
    let tol = f64::EPSILON * m as f64;
    let mut sweeps = 0;
    let mut converged = n < 2;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                let alpha: f64 = cp.iter().map(|v| v * v).sum();
                let beta: f64 = cq.iter().map(|v| v * v).sum();
                let gamma: f64 = cp.iter().zip(cq.iter()).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        converged = !rotated;
    }
    let mut values: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite norms"));
    SpectralReport {
        values,
        sweeps,
        converged,
    }
}
