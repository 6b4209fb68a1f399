// mdbook cannot run listings that depend on workspace crates, so each
// chapter is pulled in as the docs of an empty module and `cargo test --doc`
// runs its code blocks. One module per chapter keeps failures traceable.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/products.md")]
pub mod products {}
#[doc = include_str!("src/precision.md")]
pub mod precision {}
#[doc = include_str!("src/closed-forms.md")]
pub mod closed_forms {}
#[doc = include_str!("src/transforms.md")]
pub mod transforms {}
#[doc = include_str!("src/pte.md")]
pub mod pte {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
