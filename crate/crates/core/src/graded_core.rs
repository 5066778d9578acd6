//! Koszul signs, the suspension shift and multilinear evaluation on basis words.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kgraph::{Graph, Word};
use crate::scalar::Scalar;

/// A nonzero multiple of one basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTerm {
    pub coefficient: Scalar,
    pub basis: usize,
}

impl SignedTerm {
    pub fn new(coefficient: Scalar, basis: usize) -> Self {
        SignedTerm { coefficient, basis }
    }
}

/// `(-1)^(passed * Σ passing)`: the sign picked up when an element of degree
/// `passed` moves past elements of the given degrees.
pub fn koszul_sign(passing: &[i64], passed: i64) -> Scalar {
    Scalar::sign(koszul_odd(passing.iter().sum(), passed))
}

/// Parity of `a * b`.
pub fn koszul_odd(a: i64, b: i64) -> bool {
    (a * b).rem_euclid(2) == 1
}

/// Degree inside the Hochschild space of a weight-`weight` map of internal
/// degree `map_degree`.
pub fn shifted_degree(weight: usize, map_degree: i64) -> i64 {
    weight as i64 - 1 + map_degree
}

/// Koszul sign of permuting homogeneous elements: `perm[k]` is the original
/// position of the element that ends up in slot `k`.
pub fn permutation_sign(degrees: &[i64], perm: &[usize]) -> Scalar {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && koszul_odd(degrees[perm[i]], degrees[perm[j]]) {
                odd = !odd;
            }
        }
    }
    Scalar::sign(odd)
}

/// Sorted, zero-free linear combination of basis elements.
pub type Terms = BTreeMap<usize, Scalar>;

pub fn add_term(t: &mut Terms, b: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&b) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                t.remove(&b);
            }
        }
        None => {
            t.insert(b, c);
        }
    }
}

pub fn terms_of(list: &[SignedTerm]) -> Terms {
    let mut t = Terms::new();
    for s in list {
        add_term(&mut t, s.basis, s.coefficient.clone());
    }
    t
}

pub fn signed_terms(t: &Terms) -> Vec<SignedTerm> {
    t.iter().map(|(&b, c)| SignedTerm::new(c.clone(), b)).collect()
}

/// Evaluates a multilinear map given on basis words at a tensor of linear
/// combinations, written in composition order. Every argument must be
/// homogeneous (one degree, one hom block) and the blocks must compose.
pub fn evaluate_graded_map<F>(g: &Graph, map: F, args: &[Vec<SignedTerm>]) -> Result<Vec<SignedTerm>>
where
    F: Fn(&Word) -> Terms,
{
    let mut blocks = Vec::with_capacity(args.len());
    for arg in args {
        let mut kind = None;
        for t in arg.iter().filter(|t| !t.coefficient.is_zero()) {
            let e = g.elem(t.basis);
            let k = (e.source, e.target, e.degree);
            match kind {
                None => kind = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::Degree("inhomogeneous argument".into()));
                }
                _ => {}
            }
        }
        match kind {
            Some(k) => blocks.push(k),
            None => return Ok(Vec::new()),
        }
    }
    for pair in blocks.windows(2) {
        if pair[0].0 != pair[1].1 {
            return Err(Error::NotComposable("argument blocks do not compose".into()));
        }
    }
    let mut out = Terms::new();
    let mut choice = Vec::with_capacity(args.len());
    expand(g, &map, args, &mut choice, Scalar::one(), &mut out);
    Ok(signed_terms(&out))
}

fn expand<F>(g: &Graph, map: &F, args: &[Vec<SignedTerm>], choice: &mut Vec<usize>, coeff: Scalar, out: &mut Terms)
where
    F: Fn(&Word) -> Terms,
{
    if choice.len() == args.len() {
        if let Ok(w) = Word::new(g, choice.clone()) {
            for (b, c) in map(&w) {
                add_term(out, b, &coeff * &c);
            }
        }
        return;
    }
    for t in &args[choice.len()] {
        if t.coefficient.is_zero() {
            continue;
        }
        choice.push(t.basis);
        expand(g, map, args, choice, &coeff * &t.coefficient, out);
        choice.pop();
    }
}
