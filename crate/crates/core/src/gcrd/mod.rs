//! Floating-point greatest common right divisor of stacked polynomial
//! matrices.

mod charpoly;
mod embed;
mod extract;
mod feedback;

pub use charpoly::gcrd_characteristic_poly;
pub use embed::{embedded_determinants, unimodular_embed};
pub use extract::{extract_gcrd, ExtractOptions, GcrdResult};
pub use feedback::{build_feedback, gcrd_from_feedback, left_factor};
