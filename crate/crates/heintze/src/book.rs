//! Compile-time bridge to the guide in `book/`: each chapter is attached as
//! a doc comment here, so `cargo test --doc` runs every fenced Rust block
//! and the prose can never drift from the API it demonstrates.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/nilpotent-lie-algebras.md")]
pub mod nilpotent_lie_algebras {}

#[doc = include_str!("../../../book/src/derivations-and-spectra.md")]
pub mod derivations_and_spectra {}

#[doc = include_str!("../../../book/src/expanding-data.md")]
pub mod expanding_data {}

#[doc = include_str!("../../../book/src/comparing-data.md")]
pub mod comparing_data {}

#[doc = include_str!("../../../book/src/graph-constructions.md")]
pub mod graph_constructions {}

#[doc = include_str!("../../../book/src/group-law-and-metrics.md")]
pub mod group_law_and_metrics {}

#[doc = include_str!("../../../book/src/numeric-experiments.md")]
pub mod numeric_experiments {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
