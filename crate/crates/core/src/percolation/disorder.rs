use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::LatticePatch;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` in an ensemble. Depends only on the pair, so
/// adding trials never reshuffles earlier ones.
pub fn trial_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}

/// Number of edges removed at fraction `f`: `round(f·|E|)`, ties to even.
pub fn removal_count(f: f64, total: usize) -> usize {
    ((f * total as f64).round_ties_even() as usize).min(total)
}

/// A quenched set of removed edges.
#[derive(Clone, Debug, PartialEq)]
pub struct DisorderRealization {
    pub fraction: f64,
    pub seed: u64,
    pub total_edges: usize,
    /// Indices into the patch edge list, ascending.
    pub removed: Vec<usize>,
}

/// Removes `round(f·|E|)` edges drawn uniformly without replacement from the
/// whole patch, using a ChaCha8 stream keyed by `seed`. No random numbers
/// are drawn when nothing (or everything) is removed.
pub fn remove_edges(patch: &LatticePatch, f: f64, seed: u64) -> Result<DisorderRealization> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::invalid(
            "fraction",
            format!("must lie in [0, 1], got {f}"),
        ));
    }
    let total = patch.edges().len();
    let k = removal_count(f, total);
    let removed = if k == 0 {
        Vec::new()
    } else if k == total {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = rand::seq::index::sample(&mut rng, total, k).into_vec();
        picked.sort_unstable();
        picked
    };
    Ok(DisorderRealization {
        fraction: f,
        seed,
        total_edges: total,
        removed,
    })
}

impl DisorderRealization {
    pub fn removed_edges<'p>(
        &'p self,
        patch: &'p LatticePatch,
    ) -> impl Iterator<Item = (usize, usize)> + 'p {
        self.removed.iter().map(|&i| patch.edges()[i])
    }

    /// Edges that survive, in patch order.
    pub fn remaining_edges(&self, patch: &LatticePatch) -> Vec<(usize, usize)> {
        let mut gone = self.removed.iter().peekable();
        patch
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                if gone.peek() == Some(&i) {
                    gone.next();
                    false
                } else {
                    true
                }
            })
            .map(|(_, &e)| e)
            .collect()
    }
}
