//! Greatest common right divisors of polynomial matrices.
//!
//! Two engines share the [`polymat`] representation: an exact engine over ℚ
//! ([`exact`]) built on Hermite and Smith forms, and a floating-point engine
//! ([`gcrd`]) that reads the divisor off a staircase reduction of a
//! state-space pencil ([`pencil`]) and returns `P = N_r · G_c`.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod gcrd;
pub mod io;
pub mod pencil;
pub mod polymat;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
