//! Exact arithmetic: rationals, number fields, polynomials, factoring, real embeddings.

pub(crate) mod absolute;
pub mod factor;
pub mod field;
pub mod integer;
pub(crate) mod modp;
pub mod poly;
pub mod real;

pub use factor::{factor, factor_rational, find_root, is_irreducible, roots};
pub use field::{Elem, Field};
pub use integer::{rat, rat_frac, Rat};
pub use poly::Poly;
pub use real::RealRoot;
