//! Search bounds and seeded randomness shared by every decision procedure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Bounds for searches over infinite fields. Exhaustive searches over
/// finite fields ignore the height and degree bounds but still respect
/// `max_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest `max(|num|, den)` of rational search coordinates.
    pub max_height: u32,
    /// Largest polynomial degree of function-field search coordinates.
    pub max_degree: u32,
    /// Visited search nodes before giving up.
    pub max_nodes: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_height: 20, max_degree: 3, max_nodes: 1_000_000 }
    }
}

impl Bounds {
    pub fn with_nodes(self, max_nodes: u64) -> Self {
        Bounds { max_nodes, ..self }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
