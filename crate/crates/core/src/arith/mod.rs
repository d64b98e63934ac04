//! Scalars, polynomials and truncated power series.

pub mod factor;
pub mod intpoly;
pub mod monomial;
pub mod padic;
pub mod parse;
pub mod ring;
pub mod series;
pub mod weierstrass;

pub use intpoly::IntPoly;
pub use monomial::Monomial;
pub use padic::{padic_invert, PadicScalar, Zpn};
pub use parse::{parse_poly, parse_series};
pub use ring::{RingDescriptor, RingJson};
pub use series::{is_unit, project, series_mul, PolySeries};
pub use weierstrass::{series_divides, weierstrass_prepare, Divisibility, WeierstrassForm};
