use super::DenseMatrix;
use crate::error::{Error, Result};

/// A permutation stored as a gather map: applying it to `x` yields
/// `y[i] = x[source(i)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &s in &map {
            if s >= n || seen[s] {
                return Err(Error::InvalidParameter(format!(
                    "not a permutation of 0..{n}: {s} repeated or out of range"
                )));
            }
            seen[s] = true;
        }
        Ok(Self { map })
    }

    /// Replays LINPACK-style transpositions: step `k` swaps `k` and `piv[k]`.
    pub fn from_transpositions(n: usize, piv: &[usize]) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        for (k, &p) in piv.iter().enumerate() {
            map.swap(k, p);
        }
        Self { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn source(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &s) in self.map.iter().enumerate() {
            inv[s] = i;
        }
        Self { map: inv }
    }

    /// Permutation equivalent to applying `inner` first and then `self`.
    pub fn compose(&self, inner: &Permutation) -> Self {
        Self {
            map: self.map.iter().map(|&i| inner.map[i]).collect(),
        }
    }

    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.map.iter().map(|&s| x[s]).collect()
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut sign = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Matrix `P` with `P x = apply(x)`.
    pub fn to_matrix(&self) -> DenseMatrix {
        let n = self.map.len();
        let mut p = DenseMatrix::zeros(n, n);
        for (i, &s) in self.map.iter().enumerate() {
            p[(i, s)] = 1.0;
        }
        p
    }
}
