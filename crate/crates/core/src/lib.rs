//! Orthology/paralogy relation graphs reconciled with LGT species networks.
//!
//! The crate covers the whole pipeline: relation graphs and their
//! least-resolved DS-trees ([`relations`]), structural and time-consistency
//! checks on networks ([`model::validate_network`], [`paths`], [`timing`]),
//! the exact minimum-transfer dynamic program with witness extraction
//! ([`reconcile`]), an independent verifier ([`verify`]), transfer highways
//! on bare species trees ([`highways`]) and instance generators with
//! brute-force oracles for the hardness reductions ([`reductions`]).

pub mod cost;
pub mod formats;
pub mod generate;
pub mod highways;
pub mod model;
pub mod par;
pub mod paths;
pub mod reconcile;
pub mod reductions;
pub mod relations;
pub mod timing;
pub mod verify;

pub use cost::Cost;
pub use model::{
    validate_network, Arc, ArcKind, DsShape, DsTree, Event, Label, LgtNetwork, NetworkBuilder, Reconciliation,
    RelationGraph,
};
pub use par::Parallelism;
