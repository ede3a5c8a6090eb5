//! Diophantine approximation over function fields.
//!
//! Vectors in `F_q((1/X))^n`, lattices in `K^(n+1)`, diagonal flows and the
//! quantitative nondivergence machinery used to count and measure
//! approximable points.

pub mod calculus;
pub mod cfrac_witness;
pub mod cli;
pub mod error;
pub mod exact;
pub mod field_arith;
pub mod flows;
pub mod goodfn;
pub mod laurent;
pub mod nondiv;
pub mod parse;
pub mod polylattice;

pub use error::{Error, Result};
pub use field_arith::{make_field, Field, Fq, Poly};
pub use laurent::{LaurentBall, NormExp, VecK};
