//! Exact computation with Grothendieck-Witt rings, Milnor-Witt K-theory and
//! framed correspondences over number fields.
//!
//! ```
//! use framed_mw::lang::{run_batch, DEFAULT_BUDGET};
//!
//! let (out, _) = run_batch("equal([4], h*[2])", false, DEFAULT_BUDGET);
//! assert_eq!(out, "Equal\n");
//! ```

pub mod algebra;
pub mod bridge;
pub mod corr;
pub mod error;
pub mod gw;
pub mod lang;
pub mod mw;
pub mod quadform;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub struct Overview;
    #[doc = include_str!("../../../book/src/fields.md")]
    pub struct Fields;
    #[doc = include_str!("../../../book/src/forms.md")]
    pub struct Forms;
    #[doc = include_str!("../../../book/src/milnor-witt.md")]
    pub struct MilnorWitt;
    #[doc = include_str!("../../../book/src/correspondences.md")]
    pub struct Correspondences;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../book/src/limits.md")]
    pub struct Limits;
}
