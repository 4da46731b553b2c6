//! The guide lives in `book/` (mdbook format). Including the chapters here
//! turns every fenced code block into a doctest, so `cargo test --doc`
//! keeps the book in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-linear-algebra.md")]
pub mod exact_linear_algebra {}

#[doc = include_str!("../../../book/src/finite-abelian-groups.md")]
pub mod finite_abelian_groups {}

#[doc = include_str!("../../../book/src/representations.md")]
pub mod representations {}

#[doc = include_str!("../../../book/src/cayley-hypergraphs.md")]
pub mod cayley_hypergraphs {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_guide {}
