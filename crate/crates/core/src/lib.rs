//! Foundational-layer UCCA passages.
//!
//! A [`Passage`] is a tree of units over a token sequence (the primary
//! edges) with extra reentrant remote edges on top. This crate builds and
//! queries passages, reads and writes the plain-text bracket notation,
//! checks passages against the structural annotation restrictions, and
//! serializes them to a canonical JSON interchange format. A yield-based
//! edge scorer compares two annotations of the same text.
//!
//! ```
//! use ucca_core::notation::{parse_passage, render, LabelSide};
//! use ucca_core::validate::{validate, Config};
//!
//! let passage = parse_passage("[H [A John] [P kicked] [A [F the] [C ball]]]").unwrap();
//! assert!(validate(&passage, &Config::default()).is_empty());
//! assert_eq!(
//!     render(&passage, LabelSide::Right),
//!     "[[John A] [kicked P] [[the F] [ball C] A] H]"
//! );
//! ```

pub mod category;
pub mod graph;
pub mod interchange;
mod json;
pub mod notation;
pub mod score;
pub mod stats;
pub mod validate;

pub use category::{Category, CategoryError, CategorySet};
pub use graph::{
    build_passage, BuildError, BuildOptions, Edge, EdgeSpec, GraphError, Passage, Token, Unit,
    UnitId, UnitKind, UnitSpec,
};
pub use json::canonical_json;
pub use stats::{stats, CategoryCounts};
