//! Work-budget accounting shared by every potentially expensive operation.
//!
//! Counting, enumeration, coloring searches and function iteration are all
//! exact; the only way they are allowed to give up is by running out of
//! budget, reported as a hard error. No operation ever degrades to an
//! approximation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Default number of elementary steps an operation may spend.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// The budget ran out before the operation finished.
///
/// `spent` is the tally at the moment of failure (it includes the charge
/// that pushed it over), `limit` the configured ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("work budget exceeded: {spent} steps spent, limit {limit}")]
pub struct BudgetExceeded {
    pub spent: u64,
    pub limit: u64,
}

/// A shared counter of elementary steps with a hard ceiling.
///
/// Clones share the same counter, so charges made by nested calls all draw
/// from one allowance. A `Budget` is cheap to clone and safe to share
/// across threads.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: Arc<AtomicU64>,
}

impl Budget {
    /// A budget allowing `limit` elementary steps.
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: Arc::new(AtomicU64::new(0)),
        }
    }

    /// The default allowance of [`DEFAULT_BUDGET`] steps.
    pub fn standard() -> Self {
        Self::new(DEFAULT_BUDGET)
    }

    /// An effectively unlimited budget, for callers that have already
    /// bounded their own work.
    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Record `steps` units of work, failing once the ceiling is crossed.
    pub fn charge(&self, steps: u64) -> Result<(), BudgetExceeded> {
        let before = self.used.fetch_add(steps, Ordering::Relaxed);
        let spent = before.saturating_add(steps);
        if spent > self.limit {
            Err(BudgetExceeded {
                spent,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Steps recorded so far.
    pub fn spent(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// The configured ceiling.
    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::standard()
    }
}
