//! Small named categories used throughout the tests and shipped with the CLI.
//! Their structure maps are finite, so they carry no weight cutoff.

use std::sync::Arc;

use crate::ainfinity::AStructure;
use crate::error::Result;
use crate::graded_core::{add_term, Terms};
use crate::hochschild::{Components, UNBOUNDED};
use crate::kgraph::{Graph, GraphSpec, Word};
use crate::scalar::Scalar;

/// One m-convention structure constant: `m(inputs) ∋ coeff · output`, inputs
/// in composition order.
pub struct Entry<'a> {
    pub inputs: &'a [&'a str],
    pub output: &'a str,
    pub coeff: Scalar,
}

impl<'a> Entry<'a> {
    pub fn new(inputs: &'a [&'a str], output: &'a str) -> Self {
        Entry { inputs, output, coeff: Scalar::one() }
    }
}

/// Builds a structure from m-convention entries. When the graph has units,
/// the strict unit laws `m(1, x) = x = m(x, 1)` are added.
pub fn from_entries(spec: &GraphSpec, entries: &[Entry<'_>], cutoff: usize) -> Result<Arc<AStructure>> {
    let g = Arc::new(Graph::new(spec)?);
    let mut m = Components::new();
    let mut put = |inputs: Vec<usize>, out: usize, c: Scalar| -> Result<()> {
        let w = Word::new(&g, inputs)?;
        add_term(m.entry(w).or_default(), out, c);
        Ok(())
    };
    for e in entries {
        let inputs = e.inputs.iter().map(|id| g.basis_index(id)).collect::<Result<Vec<_>>>()?;
        put(inputs, g.basis_index(e.output)?, e.coeff.clone())?;
    }
    if let Some(units) = g.units() {
        let units = units.to_vec();
        for (x, b) in g.basis().iter().enumerate() {
            put(vec![units[b.target], x], x, Scalar::one())?;
            if !g.is_unit(x) {
                put(vec![x, units[b.source]], x, Scalar::one())?;
            }
        }
    }
    m.retain(|_, t: &mut Terms| !t.is_empty());
    Ok(Arc::new(AStructure::from_m_table(&g, &m, cutoff)?))
}

/// The Kronecker algebra: two objects, two degree-0 arrows `a, b: x → y`.
pub fn kronecker() -> Arc<AStructure> {
    let spec =
        GraphSpec::new(["x", "y"]).unit("ex", "x").unit("ey", "y").arrow("a", "x", "y", 0).arrow("b", "x", "y", 0);
    from_entries(&spec, &[], UNBOUNDED).expect("fixture")
}

/// The graded gentle algebra: `α: 1 → 2` of degree 0, `β: 2 → 1` of degree 1,
/// the only relation `βα = 0`, so the paths are `e1, e2, α, β, αβ`.
pub fn gentle() -> Arc<AStructure> {
    let spec = GraphSpec::new(["1", "2"])
        .unit("e1", "1")
        .unit("e2", "2")
        .arrow("alpha", "1", "2", 0)
        .arrow("beta", "2", "1", 1)
        .arrow("alphabeta", "2", "2", 1);
    from_entries(&spec, &[Entry::new(&["alpha", "beta"], "alphabeta")], UNBOUNDED).expect("fixture")
}

/// `Λ = k[ε]/(ε²)` with `|ε| = 1`.
pub fn exterior() -> Arc<AStructure> {
    let spec = GraphSpec::new(["*"]).unit("1", "*").arrow("eps", "*", "*", 1);
    from_entries(&spec, &[], UNBOUNDED).expect("fixture")
}

/// Dual numbers `k[t]/(t²)` with `|t| = 0`.
pub fn dual_numbers() -> Arc<AStructure> {
    let spec = GraphSpec::new(["*"]).unit("1", "*").arrow("t", "*", "*", 0);
    from_entries(&spec, &[], UNBOUNDED).expect("fixture")
}

/// A strictly unital dg category on `X, Y, Z`: `f: X → Y`, `g: Y → Z`, their
/// composite `gf`, and `h: X → Z` of degree −1 with `dh = gf`.
pub fn dg_triangle() -> Arc<AStructure> {
    let spec = GraphSpec::new(["X", "Y", "Z"])
        .unit("1X", "X")
        .unit("1Y", "Y")
        .unit("1Z", "Z")
        .arrow("f", "X", "Y", 0)
        .arrow("g", "Y", "Z", 0)
        .arrow("gf", "X", "Z", 0)
        .arrow("h", "X", "Z", -1);
    let entries = [Entry::new(&["g", "f"], "gf"), Entry::new(&["h"], "gf")];
    from_entries(&spec, &entries, UNBOUNDED).expect("fixture")
}

/// Every fixture with its name.
pub fn all() -> Vec<(&'static str, Arc<AStructure>)> {
    vec![
        ("kronecker", kronecker()),
        ("gentle", gentle()),
        ("exterior", exterior()),
        ("dual_numbers", dual_numbers()),
        ("dg_triangle", dg_triangle()),
    ]
}
