//! Matrix containers: dense, band, arrow, and permutations.

mod banded;
mod bordered;
mod dense;
mod permutation;
pub mod text;

use std::fmt;
use std::str::FromStr;

pub use banded::BandedMatrix;
pub use bordered::ArrowMatrix;
pub use dense::DenseMatrix;
pub use permutation::Permutation;

use crate::error::Error;

/// Induced operator norm used for glue scaling and condition numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    One,
    Inf,
}

impl Norm {
    pub fn dual(self) -> Norm {
        match self {
            Norm::One => Norm::Inf,
            Norm::Inf => Norm::One,
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "one" => Ok(Norm::One),
            "inf" | "infinity" | "oo" => Ok(Norm::Inf),
            other => Err(Error::InvalidParameter(format!(
                "unsupported norm '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::One => "1",
            Norm::Inf => "inf",
        })
    }
}

/// Euclidean norm of a vector.
pub fn norm2(x: &[f64]) -> f64 {
    // Scaled accumulation keeps tiny and huge entries from under/overflowing.
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
