use std::time::{Duration, Instant};

/// Node/time limits for the exact solvers. Hitting a limit surfaces as a
/// first-class Timeout result, never as a wrong decision.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_time: Duration::from_secs(60) }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes, ..Default::default() }
    }

    pub(crate) fn start(&self) -> Meter {
        Meter { nodes: 0, started: Instant::now(), budget: *self }
    }
}

pub(crate) struct Meter {
    pub nodes: u64,
    started: Instant,
    budget: Budget,
}

impl Meter {
    /// Counts one search node; false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return false;
        }
        // Clock checks are comparatively expensive; sample them.
        if self.nodes.is_multiple_of(1024) && self.started.elapsed() > self.budget.max_time {
            return false;
        }
        true
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}
