//! Based spaces, sparse vectors and maps, and exact row reduction.

mod map;
mod reduce;
mod space;
pub mod tensor;
mod vector;

pub use map::LinMap;
pub use reduce::{image, invert, kernel, quotient, rank, solve_affine, Quotient, Rref, Subspace};
pub use space::BasedSpace;
pub use vector::SparseVec;

/// Largest chain-space dimension any routine will materialize as a matrix.
pub const DIM_GUARDRAIL: usize = 5000;
