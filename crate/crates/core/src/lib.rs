//! Cotorsion triples over finite-dimensional algebras over prime fields:
//! exact linear algebra, modules, approximations, relative homology and
//! the two Hovey model structures a triple induces.

pub mod algebra;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod module;
pub mod registry;
pub mod relative;
pub mod resolution;
pub mod triple;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/triples.md")]
    mod triples {}
    #[doc = include_str!("../../../book/src/relative.md")]
    mod relative {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
