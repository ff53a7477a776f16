//! Constructive machinery: extensions, gap evaluators, parameter searches,
//! catalyst search, witness assembly, and the coin-count comparison.

pub mod catalyst;
pub mod ctrump;
pub mod delta;
pub mod extension;
pub mod lambda;
pub mod search;

use crate::real::Precision;

/// Knobs shared by the search stages.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub precision: Precision,
    /// Minimal gap (nats) a check must clear to count as strictly positive.
    pub margin_tol: f64,
    /// Iteration budget for halving/widening loops.
    pub budget: u64,
    /// Cap on tail lengths reached by doubling.
    pub n_max: u64,
    /// Seed for the randomized catalyst search.
    pub seed: u64,
    /// Largest catalyst dimension tried.
    pub max_catalyst_dim: usize,
    /// Resolution of the compactified order grids.
    pub grid_points: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            precision: Precision::default(),
            margin_tol: 1e-9,
            budget: 64,
            n_max: 1 << 20,
            seed: 0,
            max_catalyst_dim: 6,
            grid_points: 33,
        }
    }
}
