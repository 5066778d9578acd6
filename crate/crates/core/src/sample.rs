//! Seeded random sparse cochains for property tests and benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hochschild::{elementary_basis, Cochain};
use crate::kgraph::Graph;
use crate::scalar::Scalar;

/// Deterministic generator of sparse homogeneous cochains.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A small nonzero rational `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3`.
    pub fn scalar(&mut self) -> Scalar {
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-3..=3);
        }
        Scalar::ratio(p, self.rng.gen_range(1..=3)).expect("nonzero denominator")
    }

    /// Up to `terms` random elementary components of the given degree with
    /// weights in `[lo, hi]`. May be zero when the space is empty.
    pub fn cochain(
        &mut self,
        g: &Arc<Graph>,
        degree: i64,
        lo: usize,
        hi: usize,
        terms: usize,
        cutoff: usize,
    ) -> Cochain {
        let basis: Vec<_> = (lo..=hi).flat_map(|w| elementary_basis(g, degree, w)).collect();
        let mut c = Cochain::zero(g, degree, cutoff);
        for _ in 0..terms {
            let Some((w, b)) = basis.choose(&mut self.rng) else { break };
            let x = self.scalar();
            let e = Cochain::elementary(g, w.clone(), *b, x, cutoff).expect("basis element");
            c = &c + &e;
        }
        c
    }

    /// A random degree with a nonempty elementary basis in `[lo, hi]`,
    /// drawn from `degrees`.
    pub fn degree(&mut self, g: &Graph, degrees: &[i64], lo: usize, hi: usize) -> Option<i64> {
        let live: Vec<i64> =
            degrees.iter().copied().filter(|&d| (lo..=hi).any(|w| !elementary_basis(g, d, w).is_empty())).collect();
        live.choose(&mut self.rng).copied()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
