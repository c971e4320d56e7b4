//! Bicoloured noncrossing configurations, the operad of bubbles and its
//! enveloping operad, rewrite systems on syntax trees, and generating series.

pub mod bubbles;
pub mod envelope;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod presentations;
pub mod rewrite;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
