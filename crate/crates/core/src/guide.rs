//! The user guide, included chapter by chapter so that every code snippet
//! in the book compiles and runs under `cargo test --doc`.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/stallings.md")]
pub mod stallings {}

#[doc = include_str!("../../../book/src/monoid.md")]
pub mod monoid {}

#[doc = include_str!("../../../book/src/endomorphisms.md")]
pub mod endomorphisms {}

#[doc = include_str!("../../../book/src/conjugacy.md")]
pub mod conjugacy {}

#[doc = include_str!("../../../book/src/pseudovarieties.md")]
pub mod pseudovarieties {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
