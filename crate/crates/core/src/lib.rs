//! Matrix stretching for arrow matrices, with the banded LU kernels and
//! block-elimination baselines it is compared against.

pub mod arrow;
pub mod bench;
pub mod blockelim;
pub mod error;
pub mod lu;
pub mod matrix;
pub mod spectral;
pub mod stretch;

pub use error::{Error, Result};
