//! The book chapters as rustdoc, so `cargo test` runs their listings.
//!
//! mdbook cannot link listings against workspace crates, rustdoc can. One
//! module per chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/liouville.md")]
pub mod liouville {}

#[doc = include_str!("../../../book/src/case-studies.md")]
pub mod case_studies {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
