//! Finite quantum event algebras, their Boolean charts, and the counit test
//! that decides whether a family of charts is a localization system.
//!
//! The guide in `book/` walks through the layers; every code block in it is
//! compiled and run as a doc-test.

pub mod boolean_algebra;
pub mod dot;
pub mod error;
pub mod localization;
pub mod observables;
pub mod presheaf;
pub mod quantum_logic;
pub mod report;
pub mod schema;
pub mod union_find;

mod bits;

pub use error::{Error, Result};
pub use report::{Report, Violation};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/event-algebras.md")]
    mod event_algebras {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/presheaves.md")]
    mod presheaves {}
    #[doc = include_str!("../../../book/src/localization.md")]
    mod localization {}
    #[doc = include_str!("../../../book/src/documents.md")]
    mod documents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
