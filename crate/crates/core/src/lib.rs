//! Dimension and spherical dimension of graphs under unit-distance embeddings.
//!
//! * [`graph`], [`canon`], [`family`], [`minors`]: graphs, canonical labels,
//!   named families, minor closure and join decomposition.
//! * [`geometry`]: closed-form sphere and polygon radii.
//! * [`embedder`]: numerical realization and certificate validation.
//! * [`engine`]: rule-based bounds with certificates.
//! * [`minimality`]: exhaustive minor-minimality checks.
//! * [`tables`]: regenerated wheel and polygon tables.

pub mod canon;
pub mod embedder;
pub mod engine;
pub mod error;
pub mod family;
pub mod geometry;
pub mod graph;
pub mod minimality;
pub mod minors;
pub mod profile;
pub mod tables;

pub use error::{EmbedError, EngineError, GeometryError, GraphError};
pub use family::FamilySpec;
pub use graph::{Graph, MinorOp};

/// Fixed 12-digit decimal rendering used for all numeric output.
pub fn format_number(x: f64) -> String {
    format!("{x:.12}")
}
