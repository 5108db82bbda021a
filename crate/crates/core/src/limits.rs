//! Enumeration budgets shared by the exhaustive searches.

use crate::error::{Error, Result};

/// Environment variable that overrides [`Limits::node_limit`] in the CLI.
pub const BUDGET_ENV: &str = "QBS_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of search-node expansions for a single enumeration.
    pub node_limit: u64,
    /// Largest dimension-vector entry accepted by decomposition enumeration.
    pub max_decomposition_entry: u64,
    /// Largest vertex count accepted by decomposition enumeration.
    pub max_decomposition_vertices: usize,
    /// Largest arrow count for which arrow subsets are enumerated.
    pub max_subset_arrows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_limit: 1_000_000,
            max_decomposition_entry: 6,
            max_decomposition_vertices: 8,
            max_subset_arrows: 22,
        }
    }
}

impl Limits {
    pub fn with_node_limit(node_limit: u64) -> Self {
        Limits { node_limit, ..Limits::default() }
    }

    /// Default limits, with the node limit taken from `QBS_BUDGET` when set.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            Some(n) => Limits::with_node_limit(n),
            None => Limits::default(),
        }
    }

    pub(crate) fn counter(&self, what: &'static str) -> Counter {
        Counter { used: 0, limit: self.node_limit, what }
    }
}

/// Counts node expansions against a limit.
#[derive(Debug)]
pub(crate) struct Counter {
    used: u64,
    limit: u64,
    what: &'static str,
}

impl Counter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { what: self.what, limit: self.limit })
        } else {
            Ok(())
        }
    }
}
