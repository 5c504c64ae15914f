//! Exact rational arithmetic, matrices, sparse polynomials and a feasibility LP.

pub mod lp;
pub mod matrix;
pub mod poly;
pub mod rat;

pub use lp::{convex_weights, feasible_point, lp_is_extreme};
pub use matrix::{solve_linear, QMatrix};
pub use poly::{indexed_names, poly_arith, PolyOp, SparsePoly};
pub use rat::{rats, Rat};
