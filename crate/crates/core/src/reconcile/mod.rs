//! Exact minimum-transfer reconciliation of DS-trees with LGT networks.
//!
//! For every DS-tree node `g` and network node `s`, `f(g, s)` is the fewest
//! transfers needed to reconcile the subtree at `g` with `α_last(g) = s`.
//! Multifurcations are resolved by trying every local binary refinement.

mod dp;
pub mod lbr;
mod witness;

pub use dp::{min_transfer_cost, min_transfer_cost_with, reconcile_lbr, run_dp, DpConfig, DpTable, ReconcileError};
pub use lbr::{enumerate_lbrs, lbr_count, Lbr, LbrNode};
pub use witness::{extract_witness, extract_witness_with, step_event, Witness};
