//! The guide in `book/`, compiled as doc tests so that every code sample
//! keeps building and running against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/tangle.md")]
pub mod tangle {}
#[doc = include_str!("../../../book/src/graph-test.md")]
pub mod graph_test {}
#[doc = include_str!("../../../book/src/ensembles.md")]
pub mod ensembles {}
#[doc = include_str!("../../../book/src/localizable.md")]
pub mod localizable {}
#[doc = include_str!("../../../book/src/cluster.md")]
pub mod cluster {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
