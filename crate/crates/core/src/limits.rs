use serde::{Deserialize, Serialize};

/// Resource caps shared by every search in the crate.
///
/// Hitting a cap is always reported as [`crate::Error::Resource`]; no search
/// returns a silently truncated answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Longest atom the enumerator may be asked to look for.
    pub max_atom_len: u64,
    /// Largest ground set (after removing 0) accepted by atom enumeration.
    pub max_ground: usize,
    /// Node budget for the exponent-vector search of one ground set.
    pub max_nodes: u64,
    /// Groups above this order get only the `D*` lower bound.
    pub davenport_order_cap: usize,
    /// Node budget for the zero-sum-free search.
    pub davenport_node_budget: u64,
    /// Automorphisms are only enumerated for groups up to this order.
    pub automorphism_order_cap: usize,
    pub automorphism_count_cap: usize,
    /// Exhaustive Δ* sweeps are only run for groups up to this order.
    pub sweep_max_order: usize,
    /// Largest `k` accepted by the local elasticity computation.
    pub rho_cap: u32,
    /// Maximal number of factorizations materialized for one element.
    pub factorization_cap: usize,
    /// Entries kept by the residual-vector memo tables before they are flushed.
    pub memo_cap: usize,
    /// Enables the exact pruning rules; turning it off is the debug mode.
    pub prune: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atom_len: 20,
            max_ground: 16,
            max_nodes: 20_000_000,
            davenport_order_cap: 64,
            davenport_node_budget: 50_000_000,
            automorphism_order_cap: 32,
            automorphism_count_cap: 200_000,
            sweep_max_order: 10,
            rho_cap: 3,
            factorization_cap: 200_000,
            memo_cap: 1 << 20,
            prune: true,
        }
    }
}

impl Limits {
    /// Complete sweeps up to order 32.
    pub fn generous() -> Self {
        Limits {
            sweep_max_order: 32,
            ..Limits::default()
        }
    }
}
