//! Block elimination baselines for arrow matrices with a border of depth 1.
//!
//! Both methods factor only the band core `B` and reach the border through
//! solves with it. Plain block elimination (BE) forms the Schur complement
//! `alpha0 - r^T B^-1 c`; the deflated variant (DBE) first removes an
//! approximate left null vector of `B` so that an ill-conditioned core does
//! not contaminate the solution.

use crate::error::{Error, Result};
use crate::lu::{banded_lu, CountingLU, OpCounts};
use crate::matrix::{dot, norm2, ArrowMatrix};

/// One named step with the operations it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub name: &'static str,
    pub counts: OpCounts,
}

fn vec_ops(mults: u64, divs: u64, subs: u64) -> OpCounts {
    OpCounts {
        comparisons: 0,
        divisions: divs,
        multiplications: mults,
        subtractions: subs,
    }
}

struct Border {
    c: Vec<f64>,
    r: Vec<f64>,
    alpha0: f64,
}

fn border_of(a: &ArrowMatrix) -> Result<Border> {
    if a.border() != 1 {
        return Err(Error::BorderDepth { depth: a.border() });
    }
    Ok(Border {
        c: a.border_cols().column(0),
        r: a.border_rows().row(0).to_vec(),
        alpha0: a.corner()[(0, 0)],
    })
}

fn split_rhs(n: usize, y: &[f64]) -> Result<(&[f64], f64)> {
    if y.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            context: "arrow right-hand side",
            expected: n + 1,
            found: y.len(),
        });
    }
    Ok((&y[..n], y[n]))
}

#[derive(Debug, Clone)]
pub struct BEFactors {
    pub lu: CountingLU,
    pub r: Vec<f64>,
    pub u1: Vec<f64>,
    pub alpha1: f64,
    pub steps: Vec<Step>,
}

/// BE factorization: `u1 = B^-1 c`, `alpha1 = alpha0 - r^T u1`.
pub fn be_factor(a: &ArrowMatrix) -> Result<BEFactors> {
    let bd = border_of(a)?;
    let n = a.core_order() as u64;
    let lu = banded_lu(a.core())?;
    let mut steps = vec![Step {
        name: "factor B",
        counts: lu.counts(),
    }];
    let (u1, c1) = lu.solve(&bd.c)?;
    steps.push(Step {
        name: "u1",
        counts: c1,
    });
    let alpha1 = bd.alpha0 - dot(&bd.r, &u1);
    steps.push(Step {
        name: "alpha1",
        counts: vec_ops(n, 0, n),
    });
    if alpha1 == 0.0 {
        return Err(Error::Breakdown("Schur complement alpha1 is zero"));
    }
    Ok(BEFactors {
        lu,
        r: bd.r,
        u1,
        alpha1,
        steps,
    })
}

/// Solution with its per-step operation log.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSolve {
    pub x: Vec<f64>,
    pub steps: Vec<Step>,
}

impl BlockSolve {
    pub fn total(&self) -> OpCounts {
        self.steps
            .iter()
            .fold(OpCounts::default(), |acc, s| acc + s.counts)
    }
}

pub fn be_solve(f: &BEFactors, y: &[f64]) -> Result<BlockSolve> {
    let n = f.u1.len();
    let nn = n as u64;
    let (v0, beta0) = split_rhs(n, y)?;
    let mut steps = Vec::new();
    let (v1, c) = f.lu.solve(v0)?;
    steps.push(Step {
        name: "v1",
        counts: c,
    });
    let beta1 = beta0 - dot(&f.r, &v1);
    steps.push(Step {
        name: "beta1",
        counts: vec_ops(nn, 0, nn),
    });
    let beta = beta1 / f.alpha1;
    steps.push(Step {
        name: "beta*",
        counts: vec_ops(0, 1, 0),
    });
    let mut x: Vec<f64> = v1.iter().zip(&f.u1).map(|(v, u)| v - u * beta).collect();
    steps.push(Step {
        name: "v*",
        counts: vec_ops(nn, 0, nn),
    });
    x.push(beta);
    Ok(BlockSolve { x, steps })
}

#[derive(Debug, Clone)]
pub struct DBEFactors {
    pub lu: CountingLU,
    pub r: Vec<f64>,
    /// Position of the smallest pivot of `B`.
    pub k: usize,
    pub u1: Vec<f64>,
    pub u3: Vec<f64>,
    pub u4: Vec<f64>,
    pub alpha: [f64; 5],
    pub steps: Vec<Step>,
}

/// DBE factorization. `alpha[0..5]` hold `alpha1..alpha5`.
pub fn dbe_factor(a: &ArrowMatrix) -> Result<DBEFactors> {
    let bd = border_of(a)?;
    let n = a.core_order();
    let nn = n as u64;
    let lu = banded_lu(a.core())?;
    let mut steps = vec![Step {
        name: "factor B",
        counts: lu.counts(),
    }];
    let (k, _) = lu.smallest_pivot();
    steps.push(Step {
        name: "k",
        counts: OpCounts {
            comparisons: nn - 1,
            ..OpCounts::default()
        },
    });
    let mut ek = vec![0.0; n];
    ek[k] = 1.0;
    let (mut u1, c) = lu.transpose_solve(&ek)?;
    let nu = norm2(&u1);
    for v in &mut u1 {
        *v /= nu;
    }
    steps.push(Step {
        name: "u1",
        counts: c + vec_ops(nn, nn, nn - 1),
    });
    let (u2, c) = lu.solve(&u1)?;
    steps.push(Step {
        name: "u2",
        counts: c,
    });
    let alpha1 = 1.0 / norm2(&u2);
    steps.push(Step {
        name: "alpha1",
        counts: vec_ops(nn, 1, nn - 1),
    });
    let u3: Vec<f64> = u2.iter().map(|v| v * alpha1).collect();
    steps.push(Step {
        name: "u3",
        counts: vec_ops(nn, 0, 0),
    });
    let alpha2 = dot(&u1, &bd.c);
    steps.push(Step {
        name: "alpha2",
        counts: vec_ops(nn, 0, nn - 1),
    });
    let deflated: Vec<f64> = bd.c.iter().zip(&u1).map(|(c, u)| c - u * alpha2).collect();
    let (u4, c) = lu.solve(&deflated)?;
    steps.push(Step {
        name: "u4",
        counts: c + vec_ops(nn, 0, nn),
    });
    let alpha3 = bd.alpha0 - dot(&bd.r, &u4);
    steps.push(Step {
        name: "alpha3",
        counts: vec_ops(nn, 0, nn),
    });
    let alpha4 = dot(&bd.r, &u3);
    steps.push(Step {
        name: "alpha4",
        counts: vec_ops(nn, 0, nn - 1),
    });
    let alpha5 = alpha2 * alpha4 - alpha1 * alpha3;
    steps.push(Step {
        name: "alpha5",
        counts: vec_ops(2, 0, 1),
    });
    if alpha5 == 0.0 {
        return Err(Error::Breakdown("deflated determinant alpha5 is zero"));
    }
    Ok(DBEFactors {
        lu,
        r: bd.r,
        k,
        u1,
        u3,
        u4,
        alpha: [alpha1, alpha2, alpha3, alpha4, alpha5],
        steps,
    })
}

pub fn dbe_solve(f: &DBEFactors, y: &[f64]) -> Result<BlockSolve> {
    let n = f.u1.len();
    let nn = n as u64;
    let (v0, beta0) = split_rhs(n, y)?;
    let [alpha1, alpha2, alpha3, alpha4, alpha5] = f.alpha;
    let mut steps = Vec::new();
    let beta1 = dot(&f.u1, v0);
    steps.push(Step {
        name: "beta1",
        counts: vec_ops(nn, 0, nn - 1),
    });
    let deflated: Vec<f64> = v0.iter().zip(&f.u1).map(|(v, u)| v - u * beta1).collect();
    let (v1, c) = f.lu.solve(&deflated)?;
    steps.push(Step {
        name: "v1",
        counts: c + vec_ops(nn, 0, nn),
    });
    let beta2 = beta0 - dot(&f.r, &v1);
    steps.push(Step {
        name: "beta2",
        counts: vec_ops(nn, 0, nn),
    });
    let beta3 = alpha2 * beta2 - alpha3 * beta1;
    let beta4 = alpha4 * beta1 - alpha1 * beta2;
    steps.push(Step {
        name: "beta3, beta4",
        counts: vec_ops(4, 0, 2),
    });
    let (g3, g4) = (beta3 / alpha5, beta4 / alpha5);
    let mut x: Vec<f64> = (0..n)
        .map(|i| v1[i] + f.u3[i] * g3 - f.u4[i] * g4)
        .collect();
    steps.push(Step {
        name: "v*",
        counts: vec_ops(2 * nn, 2, 2 * nn),
    });
    x.push(g4);
    Ok(BlockSolve { x, steps })
}
