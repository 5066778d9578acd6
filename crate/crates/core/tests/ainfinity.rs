mod common;

use std::sync::Arc;

use ainfty::ainfinity::*;
use ainfty::cohomology::{differential, hh1_plus};
use ainfty::fixtures;
use ainfty::graded_core::Terms;
use ainfty::hochschild::{restrict, Cochain, Components, UNBOUNDED};
use ainfty::kgraph::{include_full_subgraph, GraphSpec, Word};
use ainfty::prelie::{exp, odot_group};
use ainfty::sample::Sampler;
use ainfty::Scalar;
use common::{e, int};
use proptest::prelude::*;

const W: usize = 5;

fn pack(a: &Arc<AStructure>, v: &Cochain, cutoff: usize) -> AFunctor {
    AFunctor::from_group_like(a, exp(v, cutoff).unwrap().plus()).unwrap()
}

/// A nontrivial isotopy of the gentle algebra from its `HH¹₊` class.
fn gentle_isotopy(cutoff: usize) -> AFunctor {
    let b = fixtures::gentle();
    let v = hh1_plus(&b, 6).unwrap().representatives(0).remove(0);
    pack(&b, &v.with_cutoff(cutoff), cutoff)
}

/// `u = (αβ, αβ ↦ e2)`, degree −1 with `d u ≠ 0` of weight 3.
fn gentle_parameter(cutoff: usize) -> Cochain {
    Cochain::from_ids(fixtures::gentle().graph(), &["alphabeta", "alphabeta"], "e2", Scalar::one(), cutoff).unwrap()
}

fn swap(k: &Arc<AStructure>) -> AFunctor {
    let g = k.graph();
    let id = |s: &str| g.basis_index(s).unwrap();
    let mut comps = Components::new();
    for (x, y) in [("ex", "ex"), ("ey", "ey"), ("a", "b"), ("b", "a")] {
        comps.insert(Word::new(g, vec![id(x)]).unwrap(), Terms::from([(id(y), Scalar::one())]));
    }
    AFunctor::new(k, k, vec![0, 1], comps, UNBOUNDED).unwrap()
}

#[test]
fn fixtures_are_ainfinity() {
    for (name, a) in fixtures::all() {
        let r = validate_astructure(a.mu(), 6).unwrap();
        assert!(r.is_zero(), "{name}: {r:?}");
        assert!(r.is_exact(), "{name}");
        assert!(a.is_strictly_unital(), "{name}");
    }
}

#[test]
fn perturbed_structure_detected() {
    let k = fixtures::kronecker();
    let g = k.graph();
    let word = Word::new(g, vec![g.basis_index("ey").unwrap(), g.basis_index("a").unwrap()]).unwrap();
    let mut comps = k.mu().components().clone();
    for c in comps.get_mut(&word).unwrap().values_mut() {
        *c = &*c * &int(2);
    }
    let bad = Cochain::from_components(g, 1, comps, UNBOUNDED).unwrap();
    let r = validate_astructure(&bad, 6).unwrap();
    assert!(!r.is_zero());
    assert_eq!(r.min_weight(), Some(3));
    assert!(validate_astructure(&Cochain::identity(g, 3), 3).is_err());
}

#[test]
fn convention_signs() {
    let b = fixtures::gentle();
    let g = b.graph();
    for w in 1..=4 {
        for word in g.words(w) {
            // inputs[k] is a_{w-k}
            let exp: i64 = word.inputs.iter().enumerate().map(|(k, &x)| (w - k - 1) as i64 * g.shifted(x)).sum();
            assert_eq!(convention_sign(g, &word), Scalar::sign(exp % 2 != 0));
        }
    }
    let k = fixtures::kronecker();
    for word in k.graph().words(2) {
        // every unshifted degree is even, so the shifted degrees are all -1
        assert_eq!(convention_sign(k.graph(), &word), int(-1));
    }
    let m = convert_convention(g, b.mu().components());
    assert_eq!(convert_convention(g, &m), *b.mu().components());
    let ab = Word::new(g, vec![g.basis_index("alpha").unwrap(), g.basis_index("beta").unwrap()]).unwrap();
    let out = g.basis_index("alphabeta").unwrap();
    assert_eq!(m[&ab][&out], int(1));
    assert_eq!(b.mu().coefficient(&ab, out), int(-1));
}

#[test]
fn functor_residual_examples() {
    let k = fixtures::kronecker();
    for (name, a) in fixtures::all() {
        let id = AFunctor::identity(&a, W);
        assert!(functor_residual(&id, W).unwrap().is_zero(), "{name}");
    }
    assert!(functor_residual(&swap(&k), W).unwrap().is_zero());
    // doubling the identity on x is not multiplicative
    let g = k.graph();
    let mut comps = Cochain::identity(g, W).components().clone();
    let ex = g.basis_index("ex").unwrap();
    comps.insert(Word::new(g, vec![ex]).unwrap(), Terms::from([(ex, int(2))]));
    let bad = AFunctor::new(&k, &k, vec![0, 1], comps, W).unwrap();
    assert!(!functor_residual(&bad, W).unwrap().is_zero());
    let lam = fixtures::exterior();
    let f = pack(&lam, &e(lam.graph(), 1, 6), 6);
    assert!(functor_residual(&f, 6).unwrap().is_zero());
    assert!(functor_residual(&gentle_isotopy(6), 6).unwrap().is_zero());
}

#[test]
fn composition_examples() {
    let lam = fixtures::exterior();
    let g = lam.graph();
    let f = pack(&lam, &e(g, 1, 6), 6);
    let id = AFunctor::identity(&lam, 6);
    assert_eq!(compose_functors(&id, &f, 6).unwrap(), f);
    assert_eq!(compose_functors(&f, &id, 6).unwrap(), f);
    // strict G: (G∘F)^n = G¹Fⁿ
    let copy = Arc::new(lam.renamed("'").unwrap());
    let strict = strict_copy_functor(&lam, &copy, &Scalar::one(), 6).unwrap();
    let gf = compose_functors(&strict, &f, 6).unwrap();
    assert_eq!(gf.taylor.comps, f.taylor.comps);
    assert!(functor_residual(&gf, 6).unwrap().is_zero());
    for (u, v) in [(e(g, 1, 6), e(g, 2, 6)), (e(g, 2, 6).scale(&int(3)), e(g, 1, 6))] {
        let (eu, ev) = (exp(&u, 6).unwrap(), exp(&v, 6).unwrap());
        let composed = compose_functors(&pack(&lam, &u, 6), &pack(&lam, &v, 6), 6).unwrap();
        let product = odot_group(&eu, &ev, 6).unwrap();
        assert_eq!(composed.plus_part().unwrap(), *product.plus());
    }
    assert!(compose_functors(&strict, &strict, 6).is_err());
}

#[test]
fn composition_matches_odot_on_gentle() {
    let b = fixtures::gentle();
    let f = gentle_isotopy(6);
    let g = pack(&b, &differential(&gentle_parameter(6), &b, 6).unwrap(), 6);
    let composed = compose_functors(&f, &g, 6).unwrap();
    let fg = odot_group(
        &ainfty::prelie::GroupLike::new(f.plus_part().unwrap()).unwrap(),
        &ainfty::prelie::GroupLike::new(g.plus_part().unwrap()).unwrap(),
        6,
    )
    .unwrap();
    assert_eq!(composed.plus_part().unwrap(), *fg.plus());
    let h = gentle_isotopy(6);
    let left = compose_functors(&compose_functors(&h, &f, 6).unwrap(), &g, 6).unwrap();
    let right = compose_functors(&h, &compose_functors(&f, &g, 6).unwrap(), 6).unwrap();
    assert_eq!(left, right);
}

#[test]
fn fun_differential_examples() {
    let k = fixtures::kronecker();
    let units = Cochain::units(k.graph(), W).unwrap();
    let eta = Prenatural::of_cochain(&k, &units).unwrap();
    assert!(fun_differential(&eta, W).unwrap().comps.is_zero());
    let mut s = Sampler::new(7);
    for (name, a) in fixtures::all() {
        for _ in 0..4 {
            let d = s.degree(a.graph(), &[-1, 0, 1], 0, 3).unwrap();
            let c = s.cochain(a.graph(), d, 0, 3, 4, W);
            let eta = Prenatural::of_cochain(&a, &c).unwrap();
            let d1 = fun_differential(&eta, W).unwrap();
            assert_eq!(d1.comps.to_cochain().unwrap(), differential(&c, &a, W).unwrap(), "{name}");
            assert!(fun_differential(&d1, W).unwrap().comps.is_zero(), "{name}");
        }
    }
}

#[test]
fn fun_differential_squares_to_zero_between_isotopies() {
    let b = fixtures::gentle();
    let (f, g) = (gentle_isotopy(5), AFunctor::identity(&b, 5));
    let mut s = Sampler::new(8);
    for d in [-1, 0, 1] {
        let c = s.cochain(b.graph(), d, 0, 3, 5, 5);
        let eta = Prenatural::new(&f, &g, d, c.components().clone(), 5).unwrap();
        let d1 = fun_differential(&eta, 5).unwrap();
        assert!(fun_differential(&d1, 5).unwrap().comps.is_zero());
    }
}

#[test]
fn fun_product_examples() {
    let k = fixtures::kronecker();
    let g = k.graph();
    let id = AFunctor::identity(&k, W);
    let strict = |ids: &[&str]| {
        let mut comps = Components::new();
        for x in ids {
            let b = g.basis_index(x).unwrap();
            comps.insert(Word::empty(g.elem(b).source), Terms::from([(b, Scalar::one())]));
        }
        Prenatural::new(&id, &id, -1, comps, W).unwrap()
    };
    let (eta, eps) = (strict(&["ex", "ey"]), strict(&["ey"]));
    let prod = fun_product(&[&eta, &eps], W).unwrap();
    let pointwise =
        ainfty::hochschild::cup(k.mu(), &eta.comps.to_cochain().unwrap(), &eps.comps.to_cochain().unwrap(), W).unwrap();
    assert_eq!(prod.comps.to_cochain().unwrap(), pointwise);
    assert!(fun_product(&[&eta, &eps, &eta], W).unwrap().comps.is_zero());
    assert!(fun_product(&[&eta], W).is_err());
}

#[test]
fn homotopy_examples() {
    let b = fixtures::gentle();
    let f = gentle_isotopy(6);
    let h = homotopy_solve(&f, &f, 6).unwrap().unwrap();
    assert!(h.comps.is_zero());
    let du = differential(&gentle_parameter(6), &b, 6).unwrap();
    assert!(!du.is_zero());
    let exact = pack(&b, &du, 6);
    let id = AFunctor::identity(&b, 6);
    let h = homotopy_solve(&exact, &id, 6).unwrap().expect("coboundary integrates to a homotopic isotopy");
    let check = fun_differential(&h, 6).unwrap().comps;
    assert_eq!(check, id.taylor.sub(&exact.taylor));
    let lam = fixtures::exterior();
    for c in 2..=6 {
        let f = pack(&lam, &e(lam.graph(), 1, c), c);
        assert!(homotopy_solve(&f, &AFunctor::identity(&lam, c), c).unwrap().is_none(), "window {c}");
    }
    assert!(homotopy_solve(&swap(&fixtures::kronecker()), &AFunctor::identity(&fixtures::kronecker(), 3), 3)
        .unwrap()
        .is_none());
}

#[test]
fn opposite_examples() {
    for (name, a) in fixtures::all() {
        let op = opposite(&a).unwrap();
        assert!(validate_astructure(op.mu(), 6).unwrap().is_zero(), "{name}");
        assert_eq!(opposite(&op).unwrap(), *a, "{name}");
    }
    // a commutative even algebra is isomorphic to its opposite through -Id
    let d = fixtures::dual_numbers();
    let op = Arc::new(opposite(&d).unwrap());
    assert_eq!(op.mu().components(), (-d.mu()).components());
    let f = strict_copy_functor(&d, &op, &int(-1), W).unwrap();
    assert!(functor_residual(&f, W).unwrap().is_zero());
    // Kronecker: the reversed quiver
    let spec =
        GraphSpec::new(["x", "y"]).unit("ex", "x").unit("ey", "y").arrow("a", "y", "x", 0).arrow("b", "y", "x", 0);
    let reversed = fixtures::from_entries(&spec, &[], UNBOUNDED).unwrap();
    let op = opposite(&fixtures::kronecker()).unwrap();
    assert_eq!(**op.graph(), **reversed.graph());
    assert_eq!(op.mu().components(), (-reversed.mu()).components());
}

#[test]
fn gluing_examples() {
    let k = fixtures::kronecker();
    let k2 = Arc::new(k.renamed("'").unwrap());
    let d = glue(&strict_copy_functor(&k, &k2, &Scalar::one(), UNBOUNDED).unwrap(), 6).unwrap();
    assert_eq!(d.graph().dim(), 3 * k.graph().dim());
    let g = d.graph();
    for (x, y) in [("x", "x'"), ("x", "y'"), ("y", "y'")] {
        let (x, y) = (g.object_index(x).unwrap(), g.object_index(y).unwrap());
        assert_eq!(g.hom(x, y).len(), k.graph().hom(x, y - 2).len());
        assert!(g.hom(y, x).is_empty());
    }
    assert!(validate_astructure(d.mu(), 6).unwrap().is_zero());

    let b = fixtures::gentle();
    let b2 = Arc::new(b.renamed("'").unwrap());
    let copy = strict_copy_functor(&b, &b2, &Scalar::one(), 6).unwrap();
    for f in [copy.clone(), compose_functors(&copy, &gentle_isotopy(6), 6).unwrap()] {
        let d = glue(&f, 6).unwrap();
        assert!(validate_astructure(d.mu(), 6).unwrap().is_zero());
        let (_, ia) = include_full_subgraph(d.graph(), &["1", "2"]).unwrap();
        let (_, ib) = include_full_subgraph(d.graph(), &["1'", "2'"]).unwrap();
        assert_eq!(restrict(d.mu(), &ia).unwrap(), *b.mu());
        assert_eq!(restrict(d.mu(), &ib).unwrap(), *b2.mu());
    }
    let g = b.graph();
    let mut comps = Cochain::identity(g, 6).components().clone();
    let alpha = g.basis_index("alpha").unwrap();
    comps.insert(Word::new(g, vec![alpha]).unwrap(), Terms::from([(alpha, int(2))]));
    let broken = AFunctor::new(&b, &b2, vec![0, 1], comps, 6).unwrap();
    assert!(glue(&broken, 6).is_err());
}

#[test]
fn isotopy_construction() {
    let b = fixtures::gentle();
    let v = hh1_plus(&b, 6).unwrap().representatives(0).remove(0);
    let iso = Isotopy::new(&b, exp(&v, 6).unwrap().plus().clone()).unwrap();
    assert_eq!(iso.functor().unwrap(), gentle_isotopy(6));
    let w = Cochain::from_ids(b.graph(), &["beta", "alpha"], "e1", Scalar::one(), 6).unwrap();
    assert!(!differential(&w, &b, 6).unwrap().is_zero());
    assert!(Isotopy::new(&b, exp(&w, 6).unwrap().plus().clone()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn leibniz_at_arity_two(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for (name, a) in fixtures::all() {
            let g = a.graph();
            let mk = |s: &mut Sampler| {
                let d = s.degree(g, &[-1, 0, 1], 0, 2).unwrap();
                Prenatural::of_cochain(&a, &s.cochain(g, d, 0, 2, 3, W)).unwrap()
            };
            let (x1, x2) = (mk(&mut s), mk(&mut s));
            let d = |x: &Prenatural| fun_differential(x, W).unwrap();
            let m2 = |y: &Prenatural, x: &Prenatural| fun_product(&[x, y], W).unwrap().comps;
            // inputs in written order x2, x1
            let total = d(&fun_product(&[&x1, &x2], W).unwrap()).comps
                .add(&m2(&d(&x2), &x1))
                .add(&m2(&x2, &d(&x1)).scale(&Scalar::sign(x2.degree() % 2 != 0)));
            prop_assert!(total.is_zero(), "{}", name);
        }
    }
}
