use std::sync::Arc;

use ainfty::ainfinity::{glue, strict_copy_functor};
use ainfty::fixtures;
use ainfty::hochschild::{restrict, UNBOUNDED};
use ainfty::kgraph::*;
use ainfty::Scalar;

#[test]
fn fixture_graphs_are_valid() {
    for (name, a) in fixtures::all() {
        assert!(validate_graph(&a.graph().spec()).is_empty(), "{name}");
    }
}

#[test]
fn gentle_degrees() {
    let g = fixtures::gentle().graph().clone();
    assert_eq!(g.elem(g.basis_index("alpha").unwrap()).degree, 0);
    assert_eq!(g.elem(g.basis_index("beta").unwrap()).degree, 1);
}

#[test]
fn diagnostics_per_violation() {
    let mut spec = fixtures::kronecker().graph().spec();
    spec.homs.get_mut(&("x".into(), "y".into())).unwrap()[0].source = "y".into();
    assert_eq!(validate_graph(&spec).len(), 1);
    let bad = GraphSpec::new(["p", "p"]).arrow("u", "p", "q", 0).arrow("u", "p", "p", 0);
    let d = validate_graph(&bad);
    assert!(d.contains(&Diagnostic::DuplicateObject("p".into())));
    assert!(d.contains(&Diagnostic::DuplicateBasisId("u".into())));
    assert!(d.contains(&Diagnostic::UnknownObject("q".into())));
    let mut unit = GraphSpec::new(["p"]).arrow("one", "p", "p", 2);
    unit.units = Some([("p".to_string(), "one".to_string())].into());
    assert_eq!(validate_graph(&unit), vec![Diagnostic::UnitNonzeroDegree("one".into())]);
    assert!(Graph::new(&bad).is_err());
}

#[test]
fn full_subgraph_identity_and_endomorphisms() {
    let g = fixtures::gentle().graph().clone();
    let (all, idx) = include_full_subgraph(&g, &["1", "2"]).unwrap();
    assert_eq!(all, *g);
    assert!(idx.basis.iter().enumerate().all(|(i, b)| *b == Some(i)));
    let (again, _) = include_full_subgraph(&all, &["1", "2"]).unwrap();
    assert_eq!(again, all);
    let (end, _) = include_full_subgraph(&g, &["2"]).unwrap();
    let ids: Vec<&str> = end.basis().iter().map(|b| b.id.as_str()).collect();
    assert_eq!(ids, ["e2", "alphabeta"]);
    assert!(include_full_subgraph(&g, &["3"]).is_err());
}

#[test]
fn glued_graph_restricts_to_its_parts() {
    let k = fixtures::kronecker();
    let k2 = Arc::new(k.renamed("'").unwrap());
    let f = strict_copy_functor(&k, &k2, &Scalar::one(), UNBOUNDED).unwrap();
    let d = glue(&f, 6).unwrap();
    let (a, ia) = include_full_subgraph(d.graph(), &["x", "y"]).unwrap();
    assert_eq!(a, **k.graph());
    assert_eq!(restrict(d.mu(), &ia).unwrap(), *k.mu());
    let (b, ib) = include_full_subgraph(d.graph(), &["x'", "y'"]).unwrap();
    assert_eq!(b, **k2.graph());
    assert_eq!(restrict(d.mu(), &ib).unwrap(), *k2.mu());
}

#[test]
fn category_algebra_blocks() {
    for (name, a) in fixtures::all() {
        let g = a.graph();
        let view = CategoryAlgebraView::new(g);
        let total: usize = g.homs().values().map(Vec::len).sum();
        assert_eq!(view.dim(), total, "{name}");
        assert_eq!(view.dim(), g.dim(), "{name}");
        for (b, blk) in view.block_of.iter().enumerate() {
            assert_eq!(view.blocks[blk].iter().filter(|&&x| x == b).count(), 1, "{name}");
        }
    }
}
