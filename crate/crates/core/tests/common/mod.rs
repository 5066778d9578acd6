#![allow(dead_code)]

use std::sync::Arc;

use ainfty::hochschild::Cochain;
use ainfty::kgraph::Graph;
use ainfty::Scalar;

/// `e_m` on `Λ`: `ε^{⊗(m+1)} ↦ ε`.
pub fn e(g: &Arc<Graph>, m: usize, cutoff: usize) -> Cochain {
    Cochain::from_ids(g, &vec!["eps"; m + 1], "eps", Scalar::one(), cutoff).unwrap()
}

pub fn q(p: i64, d: i64) -> Scalar {
    Scalar::ratio(p, d).unwrap()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}
