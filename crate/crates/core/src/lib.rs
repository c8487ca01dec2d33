//! Exact arithmetic for continued fractions of formal Laurent series over
//! prime fields F_p, with Hankel determinant profiles and two sumset
//! decomposition procedures plus their verification machinery.

pub mod algebra;
pub mod contfrac;
pub mod error;
pub mod fuzz;
pub mod hall;
pub mod hankel;
pub mod laurent;
pub mod report;
pub mod rng;
pub mod shulga;

pub use algebra::{FieldElement, Poly, PrimeField};
pub use contfrac::{ClassFlags, ContinuedFraction, Convergent, ConvergentTable};
pub use error::{Error, Result};
pub use hankel::{delta_profile, f_class_check, hankel_delta, p_h_eval, q_h_eval, DeltaProfile};
pub use laurent::{LaurentSeries, SeriesDegree};
pub use report::{CheckRecord, DecompositionReport};
