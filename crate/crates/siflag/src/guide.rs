//! The narrative guide, one module per chapter of the rendered book
//! (`book/` in the repository root, built with `mdbook`).
//!
//! Each module's documentation *is* the chapter source, included
//! verbatim — so every Rust snippet in the book is compiled and run by
//! `cargo test` and cannot drift out of sync with the crate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/root-data.md")]
pub mod root_data {}

#[doc = include_str!("../../../book/src/extended-weyl.md")]
pub mod extended_weyl {}

#[doc = include_str!("../../../book/src/orders-alcoves.md")]
pub mod orders_alcoves {}

#[doc = include_str!("../../../book/src/kostant.md")]
pub mod kostant {}

#[doc = include_str!("../../../book/src/sheaf-numerics.md")]
pub mod sheaf_numerics {}

#[doc = include_str!("../../../book/src/hecke.md")]
pub mod hecke {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
