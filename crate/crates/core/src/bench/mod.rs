//! Experiment harness: test matrices, the parameter sweep, figure recipes and
//! self-verification.

pub mod gen;
pub mod plot;
pub mod rng;
pub mod sweep;
pub mod verify;

pub use gen::{figure6_matrix, rhs_set, toeplitz_arrow};
pub use rng::SeededRng;
pub use sweep::{read_csv, run_sweep, write_csv, MethodSet, SweepConfig, SweepRow, CSV_HEADER};
