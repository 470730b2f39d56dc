//! Threshold group testing with gap: measurement matrices, decoders and
//! row-count bounds.
//!
//! A test on a pool of items is positive when the pool holds at least `u`
//! defectives, negative when it holds at most `ell`, and arbitrary in
//! between. Decoding relies on `(n, d - ell, u; z]`-disjunct matrices.

pub mod analysis;
pub mod bits;
pub mod combin;
pub mod decode;
pub mod disjunct;
pub mod encode;
pub mod error;
pub mod fixtures;
pub mod items;
pub mod matrix;
pub mod params;
pub mod sim;

pub use error::{Error, Result};
pub use items::ItemSet;
pub use matrix::{BinaryMatrix, OutcomeVector};
pub use params::TgtParams;
