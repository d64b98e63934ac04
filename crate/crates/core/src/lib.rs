//! Characteristic ideals of finitely presented modules over
//! `Z_p[[t1, ..., td]]`, descent along the last variable, and
//! pro-characteristic ideals of towers.

pub mod arith;
pub mod error;
pub mod grobner;
pub mod modules;
pub mod charideal;
pub mod descent;
pub mod tower;
pub mod oracle;
pub mod sample;
pub mod suites;

pub use error::{Error, Result};
