#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod centers;
pub mod error;
pub mod poly;
pub mod preimage;
mod solve1d;
pub mod walshmap;

pub use error::{Error, Result};
pub use poly::ComplexPoly;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/preimages.md")]
    mod preimages {}
    #[doc = include_str!("../../../book/src/centers.md")]
    mod centers {}
    #[doc = include_str!("../../../book/src/map.md")]
    mod map {}
    #[doc = include_str!("../../../book/src/boundary.md")]
    mod boundary {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
