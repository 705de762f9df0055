//! The chapters of the guide in `book/`, compiled as doc comments so that
//! `cargo test` runs every code listing in them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/metric-spaces.md")]
pub mod metric_spaces {}

#[doc = include_str!("../../../book/src/gauges.md")]
pub mod gauges {}

#[doc = include_str!("../../../book/src/cantor-space.md")]
pub mod cantor_space {}

#[doc = include_str!("../../../book/src/content-and-measure.md")]
pub mod content_and_measure {}

#[doc = include_str!("../../../book/src/integration.md")]
pub mod integration {}

#[doc = include_str!("../../../book/src/lipschitz.md")]
pub mod lipschitz {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
