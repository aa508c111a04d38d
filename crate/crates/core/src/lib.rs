//! Definable bijections over `Q_p` and `F_q((t))`, checked ball by ball, and
//! a symbolic ledger for their classes.

pub mod cosets;
pub mod defset;
pub mod error;
pub mod field;
pub mod fieldspec;
pub mod fq;
pub mod laurent;
pub mod ledger;
pub mod maps;
pub mod padic;
pub mod parse;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Prec, Tri, ValuedField};

// The guide in book/ is compiled here so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/jets.md")]
    mod jets {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/sets.md")]
    mod sets {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/ledger.md")]
    mod ledger {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
