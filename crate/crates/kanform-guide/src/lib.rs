//! The guide's chapters as doc-tests: every `rust` listing in `book/src`
//! compiles and runs under `cargo test --doc`. One module per chapter keeps
//! failures traceable to their page.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/kan-groups.md")]
pub mod kan_groups {}
#[doc = include_str!("../../../book/src/bar-chains.md")]
pub mod bar_chains {}
#[doc = include_str!("../../../book/src/cycles.md")]
pub mod cycles {}
#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}
#[doc = include_str!("../../../book/src/pairing.md")]
pub mod pairing {}
#[doc = include_str!("../../../book/src/moduli.md")]
pub mod moduli {}
#[doc = include_str!("../../../book/src/chern-simons.md")]
pub mod chern_simons {}
#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
