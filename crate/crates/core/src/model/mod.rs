//! Shared domain types: relation graphs, DS-trees, LGT networks, reconciliations.

mod dstree;
mod error;
pub mod ids;
mod network;
mod reconciliation;
mod relation;
mod validate;

pub use dstree::{DsKind, DsNode, DsShape, DsTree, Label};
pub use error::ModelError;
pub use network::{Arc, ArcKind, LgtNetwork, NetworkBuilder};
pub use reconciliation::{Event, Reconciliation};
pub use relation::RelationGraph;
pub use validate::{validate_network, NetworkRule, ValidationReport, Violation};
