mod common;

use std::sync::Arc;

use ainfty::ainfinity::{compose_functors, glue, homotopy_solve, strict_copy_functor, AFunctor, AStructure};
use ainfty::cohomology::*;
use ainfty::fixtures::{self, from_entries};
use ainfty::hochschild::{elementary_basis, Cochain, Window, UNBOUNDED};
use ainfty::kgraph::{include_full_subgraph, GraphSpec};
use ainfty::prelie::{bch, exp, odot_group, odot_inverse};
use ainfty::sample::Sampler;
use ainfty::{Error, Scalar};
use common::{e, int};
use proptest::prelude::*;

/// Rank of a list of rows by plain Gaussian elimination.
fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].checked_div(&pivot).unwrap();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= y * &f;
                }
            }
        }
        r += 1;
    }
    r
}

/// Matrix of `d` from degree-`n` cochains of weight in `[lo, hi]`, one row
/// per source basis element, columns over the target basis up to `hi + 1`.
fn matrix(a: &AStructure, n: i64, lo: usize, hi: usize) -> Vec<Vec<Scalar>> {
    let g = a.graph();
    let src: Vec<_> = (lo..=hi).flat_map(|w| elementary_basis(g, n, w)).collect();
    let tgt: Vec<_> = (lo..=hi + 1).flat_map(|w| elementary_basis(g, n + 1, w)).collect();
    src.into_iter()
        .map(|(w, b)| {
            let c = Cochain::elementary(g, w, b, Scalar::one(), hi + 1).unwrap();
            let d = differential(&c, a, hi + 1).unwrap();
            tgt.iter().map(|(tw, tb)| d.coefficient(tw, *tb)).collect()
        })
        .collect()
}

/// Brute-force dimension of `H⁰` of the total complex of a graded algebra
/// over weights `[lo, hi]`.
fn brute_h0(a: &AStructure, lo: usize, hi: usize) -> usize {
    let d0 = matrix(a, 0, lo, hi);
    let kernel = d0.len() - rank(d0);
    kernel - rank(matrix(a, -1, lo - 1, hi - 1))
}

fn two_points() -> Arc<AStructure> {
    let spec = GraphSpec::new(["p", "q"]).unit("1p", "p").unit("1q", "q");
    from_entries(&spec, &[], UNBOUNDED).unwrap()
}

fn gentle_class() -> Cochain {
    hh1_plus(&fixtures::gentle(), 6).unwrap().representatives(0).remove(0)
}

fn gentle_parameter(cutoff: usize) -> Cochain {
    Cochain::from_ids(fixtures::gentle().graph(), &["alphabeta", "alphabeta"], "e2", Scalar::one(), cutoff).unwrap()
}

#[test]
fn differential_examples() {
    for (name, a) in fixtures::all() {
        assert!(differential(a.mu(), &a, 6).unwrap().is_zero(), "{name}");
    }
    let lam = fixtures::exterior();
    let g = lam.graph();
    for m in 1..=5 {
        assert!(differential(&e(g, m, 8), &lam, 8).unwrap().is_zero(), "e{m}");
    }
    let w = Cochain::from_ids(g, &["1", "eps"], "1", Scalar::one(), 6).unwrap();
    assert_eq!(w.degree(), 0);
    assert!(!differential(&w, &lam, 6).unwrap().is_zero());
}

#[test]
fn kronecker_has_no_positive_classes() {
    let k = hh1_plus(&fixtures::kronecker(), 6).unwrap();
    assert_eq!(k.total(0), 0);
    assert!(k.complete[&0]);
    assert_eq!(brute_h0(&fixtures::kronecker(), 2, 6), 0);
}

#[test]
fn gentle_classes_by_weight() {
    let b = fixtures::gentle();
    let plus = hh1_plus(&b, 6).unwrap();
    assert_eq!(plus.total(0), 1);
    assert_eq!(brute_h0(&b, 2, 6), 1);
    for l in &plus.lines {
        assert_eq!(l.dim, usize::from(l.weights.0 == 2), "weight {}", l.weights.0);
        assert_eq!(l.dim, l.kernel - l.image);
        for r in &l.representatives {
            assert!(differential(r, &b, 7).unwrap().is_zero());
        }
    }
    // all of HH¹ sits in weights 0, 1 and 2, one class each
    let all = hochschild(&b, &[0], Window::upto(6)).unwrap();
    let dims: Vec<(usize, usize)> = all.lines.iter().map(|l| (l.weights.0, l.dim)).collect();
    assert_eq!(dims, [(0, 1), (1, 1), (2, 1), (3, 0), (4, 0), (5, 0), (6, 0)]);
    assert_eq!(all.total(0), 3);
    assert_eq!(hochschild(&fixtures::kronecker(), &[0], Window::upto(6)).unwrap().total(0), 3);
}

#[test]
fn lambda_witt_classes() {
    let lam = fixtures::exterior();
    let g = lam.graph();
    let plus = hh1_plus(&lam, 6).unwrap();
    for l in &plus.lines {
        let m = l.weights.0 - 1;
        assert!(l.dim >= 1, "weight {}", l.weights.0);
        let coords = l.classify(&e(g, m, 7)).unwrap();
        assert!(coords.iter().any(|x| !x.is_zero()), "e{m} is a coboundary");
    }
}

#[test]
fn per_line_matches_brute_force() {
    for (name, a) in fixtures::all() {
        if !a.is_graded_algebra() {
            continue;
        }
        let report = hh1_plus(&a, 4).unwrap();
        assert_eq!(report.total(0), brute_h0(&a, 2, 4), "{name}");
    }
}

#[test]
fn empty_request() {
    let r = hochschild(&fixtures::kronecker(), &[], Window::upto(3)).unwrap();
    assert!(r.lines.is_empty());
}

#[test]
fn centers() {
    let dims = |a: &AStructure| graded_center(a).unwrap().dim();
    assert_eq!(dims(&fixtures::kronecker()), 1);
    assert_eq!(dims(&fixtures::gentle()), 1);
    assert_eq!(dims(&two_points()), 2);
    assert_eq!(dims(&fixtures::dual_numbers()), 2);
    let c = graded_center(&two_points()).unwrap();
    let id = c.identity.clone().unwrap();
    assert!(c.is_unit(&id));
    // a single idempotent of k × k is not invertible
    assert!(!c.is_unit(&[int(1), int(0)]));
    assert!(c.is_unit(&[int(2), int(-3)]));
}

#[test]
fn characteristic_morphism_examples() {
    let k = fixtures::kronecker();
    let (center, ch) = injectivity_condition(&k, 4).unwrap();
    assert_eq!(center.dim(), 1);
    assert!(ch.units_in_image);
    for (name, a) in [("gentle", fixtures::gentle()), ("two points", two_points()), ("dual", fixtures::dual_numbers())]
    {
        let (center, ch) = injectivity_condition(&a, 4).unwrap();
        let split = ch.split.expect("graded input splits");
        assert_eq!(split.len(), center.dim(), "{name}");
        let back = characteristic_morphism(&a, &split, &center).unwrap();
        assert_eq!(back.image_rank, center.dim(), "{name}");
        assert!(back.units_in_image, "{name}");
    }
    // a class of weight one has no weight-0 part
    let lam = fixtures::exterior();
    let hh0 = hochschild(&lam, &[-1], Window::new(1, 4).unwrap()).unwrap();
    let center = graded_center(&lam).unwrap();
    let ch = characteristic_morphism(&lam, &hh0.representatives(-1), &center).unwrap();
    assert!(ch.images.iter().all(|v| v.iter().all(Scalar::is_zero)));
    let k = fixtures::kronecker();
    let bad = Cochain::from_ids(k.graph(), &[], "ex", Scalar::one(), 4).unwrap();
    let center = graded_center(&k).unwrap();
    assert!(matches!(characteristic_morphism(&k, &[bad], &center), Err(Error::NotCocycle(_))));
}

#[test]
fn induced_maps() {
    let b = fixtures::gentle();
    let plus = hh1_plus(&b, 5).unwrap();
    let (_, all) = include_full_subgraph(b.graph(), &["1", "2"]).unwrap();
    let id = induced_map_on_hh(&all, &plus, &plus).unwrap();
    assert_eq!(id.columns, vec![vec![int(1)]]);
    assert!(id.injective);

    let b2 = Arc::new(b.renamed("'").unwrap());
    let d = Arc::new(glue(&strict_copy_functor(&b, &b2, &Scalar::one(), UNBOUNDED).unwrap(), 6).unwrap());
    assert!(hh1_plus(&d, 6).is_err());
    let parent = hh1_plus(&d, 4).unwrap();
    let (sub, index) = ainfty::ainfinity::full_subcategory(&d, &["1'", "2'"]).map(|(s, _, i)| (s, i)).unwrap();
    let sub_report = hh1_plus(&sub, 4).unwrap();
    let map = induced_map_on_hh(&index, &parent, &sub_report).unwrap();
    assert_eq!(parent.total(0), sub_report.total(0));
    assert!(map.injective);
    assert_eq!(map.rank, sub_report.total(0));

    // a class living on the other copy restricts to zero
    let (_, index_a) = include_full_subgraph(d.graph(), &["1", "2"]).unwrap();
    let on_b = ainfty::hochschild::restrict(
        &Cochain::from_ids(d.graph(), &["alphabeta'", "alphabeta'"], "e2'", Scalar::one(), 4).unwrap(),
        &index_a,
    )
    .unwrap();
    assert!(on_b.is_zero());
    assert!(induced_map_on_hh(&index, &parent, &hh1_plus(&sub, 3).unwrap()).is_err());
}

#[test]
fn integration_examples() {
    let lam = fixtures::exterior();
    let g = lam.graph();
    let zero = integrate_class(&lam, &Cochain::zero(g, 0, 6), 6).unwrap();
    assert_eq!(zero.functor().unwrap(), AFunctor::identity(&lam, 6));
    let iso = integrate_class(&lam, &e(g, 1, 6), 6).unwrap();
    let mut want = Cochain::zero(g, 0, 6);
    for m in 1..6 {
        want = &want + &e(g, m, 6);
    }
    assert_eq!(iso.plus, want);
    let b = fixtures::gentle();
    let v = gentle_class().with_cutoff(6);
    let du = differential(&gentle_parameter(6), &b, 6).unwrap();
    let f = integrate_class(&b, &v, 6).unwrap().functor().unwrap();
    let g2 = integrate_class(&b, &(&v + &du), 6).unwrap().functor().unwrap();
    assert!(homotopy_solve(&f, &g2, 6).unwrap().is_some());
    let w = Cochain::from_ids(b.graph(), &["beta", "alpha"], "e1", Scalar::one(), 6).unwrap();
    assert!(matches!(integrate_class(&b, &w, 6), Err(Error::NotCocycle(_))));
}

#[test]
fn bch_respects_classes() {
    let b = fixtures::gentle();
    let c = 6;
    let v = gentle_class().with_cutoff(c);
    let du = differential(&gentle_parameter(c), &b, c).unwrap();
    let plus = hh1_plus(&b, c).unwrap();
    let uv = bch(&v, &v, c).unwrap();
    assert!(differential(&uv, &b, c).unwrap().is_zero());
    let perturbed = bch(&(&v + &du), &v, c).unwrap();
    assert!(differential(&perturbed, &b, c).unwrap().is_zero());
    assert_eq!(plus.classify(&uv).unwrap(), plus.classify(&perturbed).unwrap());
    assert_eq!(plus.classify(&uv).unwrap(), vec![int(2)]);
}

#[test]
fn integration_is_a_homomorphism() {
    let lam = fixtures::exterior();
    let g = lam.graph();
    let c = 6;
    let (u, v) = (e(g, 1, c), e(g, 2, c).scale(&int(-2)));
    let whole = integrate_class(&lam, &bch(&u, &v, c).unwrap(), c).unwrap().functor().unwrap();
    let parts = compose_functors(
        &integrate_class(&lam, &u, c).unwrap().functor().unwrap(),
        &integrate_class(&lam, &v, c).unwrap().functor().unwrap(),
        c,
    )
    .unwrap();
    assert_eq!(whole, parts);
}

#[test]
fn distinct_classes_give_non_homotopic_isotopies() {
    let c = 5;
    let lam = fixtures::exterior();
    let g = lam.graph();
    let b = fixtures::gentle();
    let v = gentle_class().with_cutoff(c);
    let cases: Vec<(Arc<AStructure>, Cochain, Cochain)> = vec![
        (lam.clone(), e(g, 1, c), e(g, 2, c)),
        (lam.clone(), e(g, 1, c), e(g, 1, c).scale(&int(2))),
        (b.clone(), v.clone(), v.scale(&int(3))),
    ];
    for (a, x, y) in cases {
        assert!(injectivity_condition(&a, 3).unwrap().1.units_in_image);
        let f = exp(&x, c).unwrap();
        let h = exp(&y, c).unwrap();
        let quotient = odot_group(&f, &odot_inverse(&h, c).unwrap(), c).unwrap();
        let fq = AFunctor::from_group_like(&a, quotient.plus()).unwrap();
        assert!(homotopy_solve(&fq, &AFunctor::identity(&a, c), c).unwrap().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for (name, a) in fixtures::all() {
            let d = s.degree(a.graph(), &[-1, 0, 1], 0, 3).unwrap();
            let f = s.cochain(a.graph(), d, 0, 3, 4, 6);
            let df = differential(&f, &a, 6).unwrap();
            prop_assert!(differential(&df, &a, 6).unwrap().is_zero(), "{}", name);
        }
    }
}
