//! Small-instance laboratory for the General Assignment Problem (GAP, a
//! complete directed graph with arbitrary edge costs) and its Euclidean
//! special case.
//!
//! Every result is grounded in exhaustive enumeration of complete cycles:
//! exact optima, unique-solution constructions, triangle reduction through
//! planar triangulations, sorted cost matrices, uniform random search and
//! block compositions that break metric structure.
//!
//! Randomness always comes from [`seeded_rng`] (ChaCha8 keyed by a `u64`
//! seed), so every experiment is reproducible bit for bit. Parallel work is
//! spread with rayon over partitions whose merge is order independent, so
//! thread count never changes a numeric result.

macro_rules! with_weights {
    ($cm:expr, |$w:ident| $body:expr) => {
        match $cm.weights() {
            $crate::instances::Weights::Exact($w) => $body,
            $crate::instances::Weights::Float($w) => $body,
        }
    };
}

pub mod compose;
pub mod cost;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod instances;
pub mod reduction;
pub mod render;
pub mod scm;
pub mod stochastic;

pub use cost::{Cost, Weight};
pub use error::{Error, ParseError, Result};
pub use instances::{CostMatrix, EdgeMask, InstanceFile, Point, PointSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every stochastic operation.
pub type LabRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for stream `stream` of `seed`, so one user seed can
/// drive several generators without their draws overlapping.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    use rand::RngCore;
    let mut rng = seeded_rng(seed);
    rng.set_stream(stream);
    rng.next_u64()
}
