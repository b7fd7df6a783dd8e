//! Pencil realizations of polynomial matrices and the staircase reduction
//! with tolerance-based rank decisions.

pub mod linalg;
mod realize;
mod staircase;

pub use linalg::{col_compress, row_compress, DEFAULT_TOL, LARGE_TOL};
pub use realize::{build_s_lambda, build_s_p, Pencil, SystemMatrix};
pub use staircase::{staircase, staircase_system, StaircaseForm, SystemStaircase, Tolerance};
