//! The `whlab` guide. Each chapter of `book/` is included here so that its
//! code blocks run as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/whitehead.md")]
pub mod whitehead {}

#[doc = include_str!("../../../book/src/antipode.md")]
pub mod antipode {}

#[doc = include_str!("../../../book/src/subgroups.md")]
pub mod subgroups {}

#[doc = include_str!("../../../book/src/factor-graph.md")]
pub mod factor_graph {}

#[doc = include_str!("../../../book/src/apartments.md")]
pub mod apartments {}

#[doc = include_str!("../../../book/src/products.md")]
pub mod products {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
