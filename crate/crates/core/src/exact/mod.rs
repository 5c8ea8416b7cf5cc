//! Exact rational arithmetic, linear algebra, linear programming and
//! polyhedral norms.

pub mod echelon;
pub mod lp;
pub mod matrix;
pub mod norm;
pub mod rational;

pub use matrix::{RationalMatrix, SparseMatrix};
pub use rational::{q, qi, Q};
pub use norm::{NormError, PolyhedralNorm};
