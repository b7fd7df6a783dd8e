//! Exact arithmetic over ℚ: normal forms with unimodular witnesses, right
//! division, and the Hermite-based GCRD used as a reference for the
//! floating-point engine.

mod divide;
mod gcrd;
mod grid;
mod hermite;
mod linsolve;
mod poly;
mod smith;

pub use divide::right_divide;
pub use gcrd::{gcrd_exact, ExactGcrd};
pub use grid::{is_unimodular, PolyGrid};
pub use hermite::{hermite_form, is_hermite, HermiteResult};
pub use linsolve::solve;
pub use poly::Poly;
pub use smith::{column_compress, smith_form, SmithResult};
