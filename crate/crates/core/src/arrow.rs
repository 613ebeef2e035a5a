//! Stretching of arrow matrices into band matrices with a few dense columns.
//!
//! The border rows are row-stretched along a partition of the band core into
//! blocks of `l + u` columns. After shuffling each piece (and its glue) in
//! next to the core rows it touches, the result has lower bandwidth `d + l`,
//! upper bandwidth `u`, and `d` trailing dense columns. Partial pivoting
//! restricted to that band then needs no more work than a band solver.

use crate::error::{Error, Result};
use crate::lu::{bordered_band_lu, CountingLU, FillStats, OpCounts};
use crate::matrix::{norm2, ArrowMatrix, BandedMatrix, DenseMatrix, Norm};
use crate::stretch::{GlueSpec, StretchMap, StretchMode, StretchOutput};

/// Partition of a band matrix of order `n` into a block bidiagonal form.
///
/// Row blocks: `a`, then `m - 1` blocks of `l + u`, then `c` (the first and
/// last may be empty). Column blocks: `a + u`, then `m - 2` blocks of
/// `l + u`, then `l + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandPartition {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub m: usize,
    pub a: usize,
    pub c: usize,
    pub col_blocks: Vec<usize>,
    pub row_blocks: Vec<usize>,
}

pub fn partition_banded(n: usize, lower: usize, upper: usize) -> Result<BandPartition> {
    let w = lower + upper;
    if w == 0 || w >= n {
        return Err(Error::InvalidParameter(format!(
            "partition needs 0 < l + u < n, got l + u = {w}, n = {n}"
        )));
    }
    let r = n - (n - w).div_ceil(w) * w;
    let a = lower.min(r);
    let c = r - a;
    let m = n.div_ceil(w);
    let mut col_blocks = vec![a + upper];
    col_blocks.extend(std::iter::repeat(w).take(m - 2));
    col_blocks.push(lower + c);
    let mut row_blocks = vec![a];
    row_blocks.extend(std::iter::repeat(w).take(m - 1));
    row_blocks.push(c);
    Ok(BandPartition {
        n,
        lower,
        upper,
        m,
        a,
        c,
        col_blocks,
        row_blocks,
    })
}

fn block_of(sizes: &[usize], idx: usize) -> usize {
    let mut end = 0;
    for (b, s) in sizes.iter().enumerate() {
        end += s;
        if idx < end {
            return b;
        }
    }
    unreachable!("index {idx} beyond partition")
}

impl BandPartition {
    /// Row block (0-based, `0..=m`) holding core row `i`.
    pub fn row_block(&self, i: usize) -> usize {
        block_of(&self.row_blocks, i)
    }

    /// Column block (0-based, `0..m`) holding core column `j`.
    pub fn col_block(&self, j: usize) -> usize {
        block_of(&self.col_blocks, j)
    }

    /// Row block sizes with empty end blocks dropped.
    pub fn nonempty_row_blocks(&self) -> Vec<usize> {
        self.row_blocks.iter().copied().filter(|&s| s > 0).collect()
    }
}

/// A stretched arrow matrix in shuffled band form.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchedArrow {
    /// Band part, lower bandwidth `d + l`, upper `u`. Its last `d` columns
    /// are unused; those live in `tail`.
    pub band: BandedMatrix,
    pub tail: DenseMatrix,
    pub map: StretchMap,
    pub partition: BandPartition,
    pub glue: GlueSpec,
}

impl StretchedArrow {
    pub fn order(&self) -> usize {
        self.band.order()
    }

    pub fn border(&self) -> usize {
        self.tail.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let ts = self.order() - self.border();
        if j >= ts {
            self.tail[(i, j - ts)]
        } else {
            self.band.get(i, j)
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        let mut s = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = self.get(i, j);
            }
        }
        s
    }

    /// Dense view usable with the generic stretching checks.
    pub fn as_stretch_output(&self) -> StretchOutput {
        StretchOutput {
            matrix: self.to_dense(),
            map: self.map.clone(),
            glue: self.glue,
            disjoint: true,
        }
    }
}

/// Row-stretching glue for an arrow matrix.
pub fn arrow_glue(a: &ArrowMatrix, p: Norm) -> Result<GlueSpec> {
    let na = a.norm(p);
    if na == 0.0 {
        return Err(Error::InvalidParameter(
            "glue scaling of a zero matrix".into(),
        ));
    }
    Ok(GlueSpec {
        mode: StretchMode::Row,
        norm: p,
        sigma: if p == Norm::One { na / 2.0 } else { na },
    })
}

/// Stretches the border rows of `a` and shuffles the pieces into band form.
pub fn stretch_arrow(a: &ArrowMatrix, glue: &GlueSpec) -> Result<StretchedArrow> {
    if glue.mode != StretchMode::Row || !glue.sigma.is_finite() || glue.sigma == 0.0 {
        return Err(Error::InvalidParameter(
            "arrow stretching needs row glue with finite nonzero sigma".into(),
        ));
    }
    let (n, d, l, u) = (a.core_order(), a.border(), a.lower(), a.upper());
    let part = partition_banded(n, l, u)?;
    let m = part.m;
    let w = l + u;
    let order = n + d * m;
    let sigma = glue.sigma;
    let row_pos = |i: usize| i + d * part.row_block(i);
    let col_pos = |j: usize| j + d * part.col_block(j);
    // piece q (0-based) of border row t
    let piece_pos = |q: usize, t: usize| part.a + q * (w + d) + t;
    let col_prefix = |q: usize| part.col_blocks[..q].iter().sum::<usize>();
    // glue between pieces q and q + 1 (0-based q < m - 1), component t
    let glue_pos = |q: usize, t: usize| col_prefix(q + 1) + q * d + t;

    let mut band = BandedMatrix::new(order, d + l, u)?;
    let mut tail = DenseMatrix::zeros(order, d);
    let core = a.core();
    for i in 0..n {
        for j in core.stored_cols(i) {
            let v = core.get(i, j);
            if v != 0.0 {
                band.set(row_pos(i), col_pos(j), v)?;
            }
        }
        for t in 0..d {
            tail[(row_pos(i), t)] = a.border_cols()[(i, t)];
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![row_pos(i)]).collect();
    for t in 0..d {
        groups.push((0..m).map(|q| piece_pos(q, t)).collect());
        for j in 0..n {
            let v = a.border_rows()[(t, j)];
            if v != 0.0 {
                band.set(piece_pos(part.col_block(j), t), col_pos(j), v)?;
            }
        }
        for s in 0..d {
            tail[(piece_pos(m - 1, t), s)] = a.corner()[(t, s)];
        }
        for q in 0..m {
            if q + 1 < m {
                band.set(piece_pos(q, t), glue_pos(q, t), -sigma)?;
            }
            if q > 0 {
                band.set(piece_pos(q, t), glue_pos(q - 1, t), sigma)?;
            }
        }
    }
    let mut carry: Vec<usize> = (0..n).map(col_pos).collect();
    carry.extend((0..d).map(|t| order - d + t));
    let glue_cols = (0..m - 1)
        .flat_map(|q| (0..d).map(move |t| (q, t)))
        .map(|(q, t)| glue_pos(q, t))
        .collect();
    Ok(StretchedArrow {
        band,
        tail,
        map: StretchMap {
            mode: StretchMode::Row,
            original_order: n + d,
            order,
            groups,
            carry,
            glue: glue_cols,
        },
        partition: part,
        glue: *glue,
    })
}

/// Band partial pivoting on the stretched matrix: pivot window `d + l`, fill
/// up to `d + l + u`, dense trailing columns kept in full.
pub fn stretched_lu(s: &StretchedArrow) -> Result<CountingLU> {
    bordered_band_lu(&s.band, &s.tail)
}

/// Closed-form operation counts for solving through a stretched arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictedCounts {
    pub order: u64,
    pub factor: u64,
    pub solve: u64,
}

/// Order, factorization and solve counts in closed form.
///
/// The solve count here covers the band part of the factors only; the work
/// against the `d` dense columns above the band is
/// [`dense_column_solve_ops`].
pub fn predicted_counts(n: u64, l: u64, u: u64, d: u64) -> Result<PredictedCounts> {
    if l + u == 0 || l + u >= n {
        return Err(Error::InvalidParameter("counts need 0 < l + u < n".into()));
    }
    let big_n = n + d * n.div_ceil(l + u);
    let factor = (4 * d * d + 6 * d * l + 2 * d * u + 2 * l * l + 2 * l * u + 2 * d + 2 * l)
        * big_n
        - (d + l)
            * (13 * d * d
                + 14 * d * l
                + 12 * d * u
                + 4 * l * l
                + 6 * l * u
                + 3 * u * u
                + 9 * d
                + 6 * l
                + 3 * u
                + 2)
            / 3;
    let solve = (4 * d + 4 * l + 2 * u + 1) * big_n
        - (2 * d * d + 4 * d * l + 2 * d * u + 2 * l * l + 2 * l * u + u * u + 2 * d + 2 * l + u);
    Ok(PredictedCounts {
        order: big_n,
        factor,
        solve,
    })
}

/// Solve operations spent on the dense columns outside the band: two per
/// entry of U lying above the filled band in the last `d` columns.
pub fn dense_column_solve_ops(n: u64, l: u64, u: u64, d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    let big_n = n + d * n.div_ceil(l + u);
    d * (2 * big_n - 3 * d - 2 * l - 2 * u - 1)
}

/// A stretched arrow with its factorization, ready for repeated solves.
#[derive(Debug, Clone)]
pub struct StretchedSolver {
    pub stretched: StretchedArrow,
    pub lu: CountingLU,
}

impl StretchedSolver {
    pub fn new(a: &ArrowMatrix, p: Norm) -> Result<Self> {
        let glue = arrow_glue(a, p)?;
        let stretched = stretch_arrow(a, &glue)?;
        let lu = stretched_lu(&stretched)?;
        Ok(Self { stretched, lu })
    }

    pub fn solve(&self, y: &[f64]) -> Result<(Vec<f64>, OpCounts)> {
        let ys = self.stretched.map.scatter_rhs(y)?;
        let (z, c) = self.lu.solve(&ys)?;
        Ok((self.stretched.map.gather_solution(&z)?, c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrowSolve {
    pub x: Vec<f64>,
    pub order: usize,
    pub sigma: f64,
    pub factor_counts: OpCounts,
    pub solve_counts: OpCounts,
    /// Fill relative to the original order squared.
    pub fill: FillStats,
    /// `||A x - y||_2 / ||y||_2`.
    pub residual: f64,
}

pub fn solve_arrow_via_stretching(a: &ArrowMatrix, y: &[f64], p: Norm) -> Result<ArrowSolve> {
    let s = StretchedSolver::new(a, p)?;
    let (x, solve_counts) = s.solve(y)?;
    let ax = a.matvec(&x)?;
    let diff: Vec<f64> = ax.iter().zip(y).map(|(p, q)| p - q).collect();
    let ny = norm2(y);
    Ok(ArrowSolve {
        order: s.stretched.order(),
        sigma: s.stretched.glue.sigma,
        factor_counts: s.lu.counts(),
        solve_counts,
        fill: s.lu.fill_stats(a.order()),
        residual: if ny == 0.0 {
            norm2(&diff)
        } else {
            norm2(&diff) / ny
        },
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_examples() {
        let p = partition_banded(5, 1, 1).unwrap();
        assert_eq!((p.m, p.a, p.c), (3, 1, 0));
        assert_eq!(p.col_blocks, vec![2, 2, 1]);
        assert_eq!(p.nonempty_row_blocks(), vec![1, 2, 2]);
        let q = partition_banded(4, 1, 2).unwrap();
        assert_eq!(q.col_blocks, vec![3, 1]);
        let big = partition_banded(50, 1, 1).unwrap();
        assert_eq!(big.m, 25);
        assert_eq!(big.col_blocks.len(), 25);
        assert_eq!(big.row_blocks, [vec![1], vec![2; 24], vec![1]].concat());
        assert!(partition_banded(3, 2, 1).is_err());
    }

    #[test]
    fn worked_instance_counts() {
        let p = predicted_counts(50, 1, 1, 1).unwrap();
        assert_eq!((p.order, p.factor, p.solve), (75, 1452, 807));
        assert_eq!(dense_column_solve_ops(50, 1, 1, 1), 142);
    }

    #[test]
    fn zero_border_reduces_to_band_formulas() {
        use crate::lu::{banded_factor_ops, banded_solve_ops};
        for (n, l, u) in [(10, 1, 1), (9, 2, 3), (20, 3, 0)] {
            let p = predicted_counts(n, l, u, 0).unwrap();
            assert_eq!(p.order, n);
            assert_eq!(p.factor, banded_factor_ops(n, l, u));
            assert_eq!(p.solve, banded_solve_ops(n, l, u));
        }
    }
}
