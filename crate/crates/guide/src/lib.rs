//! The book's chapters, one module each, so `cargo test --doc` runs every
//! Rust listing in them. A failing doctest names the module, which tells
//! you which chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/case-language.md")]
pub mod case_language {}
#[doc = include_str!("../../../book/src/engine.md")]
pub mod engine {}
#[doc = include_str!("../../../book/src/rules.md")]
pub mod rules {}
#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
#[doc = include_str!("../../../book/src/service.md")]
pub mod service {}
