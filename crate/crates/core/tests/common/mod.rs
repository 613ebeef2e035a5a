#![allow(dead_code)]

use matstretch::matrix::{ArrowMatrix, BandedMatrix, DenseMatrix, Norm};
use matstretch::stretch::{
    glue_sigma, stretch_cols, stretch_rows, Blocks, StretchMode, StretchOutput,
};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.data())
}

pub fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

/// 2-norm condition number from nalgebra's SVD.
pub fn kappa2(a: &DenseMatrix) -> f64 {
    let sv = to_na(a).singular_values();
    sv.max() / sv.min()
}

pub fn random_dense(rng: &mut StdRng, n: usize) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

/// Random matrix with a dominant diagonal.
pub fn random_well_conditioned(rng: &mut StdRng, n: usize) -> DenseMatrix {
    let mut a = random_dense(rng, n);
    for i in 0..n {
        a[(i, i)] += if rng.gen_bool(0.5) {
            n as f64
        } else {
            -(n as f64)
        };
    }
    a
}

/// Random arrow matrix with a single border; the core is diagonally
/// dominant so its condition stays moderate.
pub fn random_arrow(rng: &mut StdRng, n: usize, l: usize, u: usize, d: usize) -> ArrowMatrix {
    let mut core = BandedMatrix::new(n, l, u).unwrap();
    for i in 0..n {
        for j in core.stored_cols(i) {
            let v = if i == j {
                let s = (l + u + 2) as f64 + rng.gen_range(0.0..1.0);
                if rng.gen_bool(0.5) {
                    s
                } else {
                    -s
                }
            } else {
                rng.gen_range(-1.0..1.0)
            };
            core.set(i, j, v).unwrap();
        }
    }
    let mut r = DenseMatrix::zeros(d, n);
    let mut c = DenseMatrix::zeros(n, d);
    for t in 0..d {
        for j in 0..n {
            r[(t, j)] = rng.gen_range(-1.0..1.0);
            c[(j, t)] = rng.gen_range(-1.0..1.0);
        }
    }
    let mut e = DenseMatrix::zeros(d, d);
    for s in 0..d {
        for t in 0..d {
            e[(s, t)] = rng.gen_range(-1.0..1.0);
        }
        e[(s, s)] += 2.0 * n as f64;
    }
    ArrowMatrix::new(core, r, c, e).unwrap()
}

/// Random partition of `0..len` into `m` nonempty sets.
pub fn random_blocks(rng: &mut StdRng, len: usize, m: usize) -> Blocks {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(rng);
    let mut sets: Vec<Vec<usize>> = idx[..m].iter().map(|&i| vec![i]).collect();
    for &i in &idx[m..] {
        let k = rng.gen_range(0..m);
        sets[k].push(i);
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    Blocks::from_sets(sets, len).unwrap()
}

pub struct RandomStretch {
    pub a: DenseMatrix,
    pub out: StretchOutput,
    pub selected: usize,
    pub pieces: usize,
}

/// A random simple row or column stretching of a random matrix of order
/// 3 to `max_n`.
pub fn random_stretch(rng: &mut StdRng, max_n: usize, well_conditioned: bool) -> RandomStretch {
    let n = rng.gen_range(3..=max_n);
    let a = if well_conditioned {
        random_well_conditioned(rng, n)
    } else {
        random_dense(rng, n)
    };
    let mode = if rng.gen_bool(0.5) {
        StretchMode::Row
    } else {
        StretchMode::Column
    };
    let p = if rng.gen_bool(0.5) {
        Norm::One
    } else {
        Norm::Inf
    };
    let k = rng.gen_range(1..=n);
    let mut sel: Vec<usize> = (0..n).collect();
    sel.shuffle(rng);
    sel.truncate(k);
    let m = rng.gen_range(2..=n);
    let blocks = random_blocks(rng, n, m);
    let glue = glue_sigma(&a, mode, p).unwrap();
    let out = match mode {
        StretchMode::Row => stretch_rows(&a, &sel, &blocks, &glue),
        StretchMode::Column => stretch_cols(&a, &sel, &blocks, &glue),
    }
    .unwrap();
    RandomStretch {
        a,
        out,
        selected: k,
        pieces: m,
    }
}
