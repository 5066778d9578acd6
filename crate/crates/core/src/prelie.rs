//! Integration in the complete pre-Lie algebra `C(G)`: exponential,
//! logarithm, the ⊙-product of group-like elements and the BCH product.
//!
//! The BCH product here satisfies `exp(u) ⊙ exp(v) = exp(bch(u, v))` with
//! leading terms `u + v + ½[u, v]`, where `[u, v] = u ⋆ v − v ⋆ u`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hochschild::{brace, gerstenhaber_bracket, star, symmetric_brace, Cochain};
use crate::kgraph::Graph;
use crate::scalar::Scalar;

/// A group-like element `1 + plus` with `plus ∈ W₂C⁰`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLike {
    plus: Cochain,
}

impl GroupLike {
    pub fn new(plus: Cochain) -> Result<GroupLike> {
        check_plus(&plus)?;
        let plus = plus.with_degree(0)?;
        Ok(GroupLike { plus })
    }

    pub fn one(graph: &Arc<Graph>, cutoff: usize) -> GroupLike {
        GroupLike { plus: Cochain::zero(graph, 0, cutoff) }
    }

    pub fn plus(&self) -> &Cochain {
        &self.plus
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.plus.graph()
    }

    pub fn cutoff(&self) -> usize {
        self.plus.cutoff()
    }

    /// `1 + plus` as a cochain.
    pub fn full(&self) -> Cochain {
        &Cochain::identity(self.graph(), self.cutoff()) + &self.plus
    }

    pub fn is_one(&self) -> bool {
        self.plus.is_zero()
    }
}

fn check_plus(v: &Cochain) -> Result<()> {
    if v.is_zero() {
        return Ok(());
    }
    if v.degree() != 0 {
        return Err(Error::Degree(format!("expected degree 0, got {}", v.degree())));
    }
    if v.min_weight() < Some(2) {
        return Err(Error::Weight("expected weight >= 2".into()));
    }
    Ok(())
}

/// `exp(v) = Σ vʳ / r!` with right-normed powers `v^{j+1} = v^j ⋆ v`.
pub fn exp(v: &Cochain, cutoff: usize) -> Result<GroupLike> {
    check_plus(v)?;
    let v = v.clone().with_degree(0)?.with_cutoff(cutoff);
    let mut total = Cochain::zero(v.graph(), 0, cutoff);
    let mut power = v.clone();
    let mut r = 1;
    while !power.is_zero() {
        total = &total + &power.scale(&Scalar::inv_factorial(r));
        power = star(&power, &v, cutoff)?;
        r += 1;
    }
    GroupLike::new(total)
}

/// The inverse of [`exp`], solved by fixed-point iteration
/// `v ← w − (exp(v) − 1 − v)`; each step fixes one more weight.
pub fn log(g: &GroupLike, cutoff: usize) -> Result<Cochain> {
    let w = g.plus.clone().with_cutoff(cutoff);
    let mut v = w.clone();
    for _ in 0..=cutoff {
        let higher = &exp(&v, cutoff)?.plus - &v;
        let next = &w - &higher;
        if next == v {
            return Ok(v);
        }
        v = next;
    }
    Err(Error::Invalid("logarithm did not stabilise".into()))
}

/// `u ⊙ (1 + v) = Σₙ u{v, ..., v}ₙ`.
pub fn odot(u: &Cochain, g: &GroupLike, cutoff: usize) -> Result<Cochain> {
    if u.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    let mut total = u.clone().with_cutoff(cutoff.min(u.cutoff()));
    if g.is_one() || u.is_zero() {
        return Ok(total);
    }
    let v = &g.plus;
    let base = u.min_weight().unwrap_or(0);
    let step = v.min_weight().unwrap_or(2) - 1;
    let mut n = 1;
    while base + n * step <= cutoff {
        let args = vec![v; n];
        total = &total + &brace(u, &args, cutoff)?;
        n += 1;
    }
    Ok(total)
}

/// The symmetric form `u ⊙ (1 + v) = Σₙ u⟨v, ..., v⟩ₙ / n!`.
pub fn odot_symmetric(u: &Cochain, g: &GroupLike, cutoff: usize) -> Result<Cochain> {
    if u.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    let mut total = u.clone().with_cutoff(cutoff.min(u.cutoff()));
    if g.is_one() || u.is_zero() {
        return Ok(total);
    }
    let v = &g.plus;
    let base = u.min_weight().unwrap_or(0);
    let step = v.min_weight().unwrap_or(2) - 1;
    let mut n = 1;
    while base + n * step <= cutoff {
        let args = vec![v; n];
        total = &total + &symmetric_brace(u, &args, cutoff)?.scale(&Scalar::inv_factorial(n));
        n += 1;
    }
    Ok(total)
}

/// The group product `f ⊙ g` of group-like elements.
pub fn odot_group(f: &GroupLike, g: &GroupLike, cutoff: usize) -> Result<GroupLike> {
    // (1 + f₊) ⊙ g = g + f₊ ⊙ g, since 1{v} = v and 1{v, ..., v} = 0
    let plus = &g.plus.clone().with_cutoff(cutoff) + &odot(&f.plus, g, cutoff)?;
    GroupLike::new(plus)
}

/// `g⁻¹ = exp(−log g)`.
pub fn odot_inverse(g: &GroupLike, cutoff: usize) -> Result<GroupLike> {
    exp(&-log(g, cutoff)?, cutoff)
}

/// Dynkin's form of the BCH series, summed over bracket words of length at
/// most `cutoff − 1`: a bracket of `L` elements of weight `≥ 2` has weight
/// `≥ L + 1`.
pub fn bch(u: &Cochain, v: &Cochain, cutoff: usize) -> Result<Cochain> {
    check_plus(u)?;
    check_plus(v)?;
    if u.graph() != v.graph() {
        return Err(Error::GraphMismatch);
    }
    let letters = [u.clone().with_degree(0)?.with_cutoff(cutoff), v.clone().with_degree(0)?.with_cutoff(cutoff)];
    let mut memo: HashMap<Vec<usize>, Cochain> = HashMap::new();
    let mut total = Cochain::zero(u.graph(), 0, cutoff);
    let max_len = cutoff.saturating_sub(1);
    for len in 1..=max_len {
        // blocks (r_i, s_i) with r_i + s_i ≥ 1 summing to len
        for blocks in block_sequences(len) {
            let n = blocks.len();
            let mut denom = Scalar::from_int(len as i64);
            let mut word = Vec::with_capacity(len);
            for &(r, s) in &blocks {
                denom = denom * Scalar::inv_factorial(r).inv()? * Scalar::inv_factorial(s).inv()?;
                word.extend(std::iter::repeat_n(0, r));
                word.extend(std::iter::repeat_n(1, s));
            }
            let value = nested(&word, &letters, &mut memo, cutoff)?;
            if value.is_zero() {
                continue;
            }
            let sign = Scalar::sign(n % 2 == 0);
            let coeff = sign * Scalar::from_int(n as i64).inv()? * denom.inv()?;
            total = &total + &value.scale(&coeff);
        }
    }
    Ok(total)
}

/// Right-nested bracket `[w₁, [w₂, ..., [w_{L−1}, w_L]]]`.
fn nested(
    word: &[usize],
    letters: &[Cochain; 2],
    memo: &mut HashMap<Vec<usize>, Cochain>,
    cutoff: usize,
) -> Result<Cochain> {
    if word.len() == 1 {
        return Ok(letters[word[0]].clone());
    }
    if let Some(c) = memo.get(word) {
        return Ok(c.clone());
    }
    let inner = nested(&word[1..], letters, memo, cutoff)?;
    let value = if inner.is_zero() { inner } else { gerstenhaber_bracket(&letters[word[0]], &inner, cutoff)? };
    memo.insert(word.to_vec(), value.clone());
    Ok(value)
}

fn block_sequences(len: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    blocks_rec(len, &mut acc, &mut out);
    out
}

fn blocks_rec(left: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if left == 0 {
        out.push(acc.clone());
        return;
    }
    for size in 1..=left {
        for r in 0..=size {
            acc.push((r, size - r));
            blocks_rec(left - size, acc, out);
            acc.pop();
        }
    }
}

/// `exp(ad_v)(w) − (exp(v) ⋆ w) ⊙ exp(−v)`, which vanishes identically.
pub fn exp_ad_check(v: &Cochain, w: &Cochain, cutoff: usize) -> Result<Cochain> {
    check_plus(v)?;
    let v = v.clone().with_degree(0)?;
    let mut lhs = w.clone().with_cutoff(cutoff);
    let mut term = lhs.clone();
    let mut n = 1;
    while !term.is_zero() && n <= cutoff {
        term = gerstenhaber_bracket(&v, &term, cutoff)?.scale(&Scalar::from_int(n as i64).inv()?);
        lhs = &lhs + &term;
        n += 1;
    }
    // inserting a weight-0 part of w lowers weight by one, so exp(v) is
    // needed one weight past the cutoff
    let reach = if w.min_weight() == Some(0) { cutoff + 1 } else { cutoff };
    let ev = exp(&v, reach)?;
    let ev_star_w = &w.clone().with_cutoff(cutoff) + &star(ev.plus(), w, cutoff)?;
    let rhs = odot(&ev_star_w, &exp(&-v, cutoff)?, cutoff)?;
    Ok(&lhs - &rhs)
}

/// The ⋆-words of the pre-Magnus expansion of `log(1 + w)` through weight
/// three in `w`: `w`, `w⋆w`, `(w⋆w)⋆w`, `w⋆(w⋆w)`.
pub fn premagnus_words(w: &Cochain, cutoff: usize) -> Result<[Cochain; 4]> {
    let ww = star(w, w, cutoff)?;
    Ok([w.clone(), ww.clone(), star(&ww, w, cutoff)?, star(w, &ww, cutoff)?])
}
