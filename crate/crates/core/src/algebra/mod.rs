//! Exact arithmetic foundations: the prime field F_p and the polynomial
//! ring F_p[t].

mod field;
mod poly;

pub use field::{FieldElement, PrimeField};
pub use poly::{parse_rational, Poly};
