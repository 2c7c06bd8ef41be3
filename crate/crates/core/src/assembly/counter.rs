use serde::{Deserialize, Serialize};

/// Counts integrand evaluations: one tick per quadrature point per
/// (weight function, operator term) pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCounter {
    evals: u64,
}

impl QuadCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tick(&mut self, n: u64) {
        self.evals += n;
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn merge(&mut self, other: &QuadCounter) {
        self.evals += other.evals;
    }

    /// Returns the count and starts a new phase at zero.
    pub fn take(&mut self) -> u64 {
        std::mem::take(&mut self.evals)
    }
}
