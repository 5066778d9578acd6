//! Maurer-Cartan elements of the Hochschild A∞-algebra `V = C(A)`: curvature,
//! twisted algebras and modules, gauge equivalence in the unshifted dg
//! algebra `U`, Quillen homotopies over polynomial paths, and push/pull maps
//! between relative Hochschild complexes.
//!
//! The filtration is `F_p V = W_{p+1} V`, so Maurer-Cartan elements and gauge
//! parameters have weight at least two and every series below is finite in a
//! weight window.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::ainfinity::{AFunctor, AStructure, Prenatural, Table};
use crate::error::{Error, Result};
use crate::hochschild::{brace, gerstenhaber_bracket, insert, star, Cochain, Components, Filler, Inner};
use crate::kgraph::{Graph, Word};
use crate::prelie::{odot, GroupLike};
use crate::scalar::Scalar;

/// An A∞-algebra whose elements are Hochschild cochains, in the shifted
/// convention: every `μ^i` has degree one.
pub trait AInfAlgebra {
    fn graph(&self) -> &Arc<Graph>;

    /// Arity above which every operation vanishes.
    fn max_arity(&self) -> usize;

    /// `μ^i(args)` for `i = args.len() ≥ 1`.
    fn mu(&self, args: &[&Cochain], cutoff: usize) -> Result<Cochain>;
}

/// `V = C(A)` with `μ¹ = [μ, −]` and `μ^i = μ{−, ..., −}` for `i ≥ 2`.
#[derive(Clone, Debug)]
pub struct HochschildAlgebra {
    a: Arc<AStructure>,
}

impl HochschildAlgebra {
    pub fn new(a: &Arc<AStructure>) -> HochschildAlgebra {
        HochschildAlgebra { a: a.clone() }
    }

    pub fn structure(&self) -> &Arc<AStructure> {
        &self.a
    }
}

impl AInfAlgebra for HochschildAlgebra {
    fn graph(&self) -> &Arc<Graph> {
        self.a.graph()
    }

    fn max_arity(&self) -> usize {
        self.a.mu().max_weight().unwrap_or(0)
    }

    fn mu(&self, args: &[&Cochain], cutoff: usize) -> Result<Cochain> {
        match args {
            [] => Err(Error::EmptyBrace),
            [x] => gerstenhaber_bracket(self.a.mu(), x, cutoff),
            _ => brace(self.a.mu(), args, cutoff),
        }
    }
}

fn check_filtered(x: &Cochain, degree: i64, what: &str) -> Result<()> {
    if x.is_zero() {
        return Ok(());
    }
    if x.degree() != degree {
        return Err(Error::Degree(format!("{what} has degree {}, expected {degree}", x.degree())));
    }
    if x.min_weight() < Some(2) {
        return Err(Error::Weight(format!("{what} must have weight >= 2")));
    }
    Ok(())
}

fn zero_like(g: &Arc<Graph>, degree: i64, cutoff: usize) -> Cochain {
    Cochain::zero(g, degree, cutoff)
}

/// `κ(ζ) = Σ_{i ≥ 1} μ^i(ζ, ..., ζ)`.
pub fn curvature(alg: &dyn AInfAlgebra, zeta: &Cochain, cutoff: usize) -> Result<Cochain> {
    check_filtered(zeta, 0, "a Maurer-Cartan element")?;
    let zeta = zeta.clone().with_degree(0)?;
    let mut total = zero_like(alg.graph(), 1, cutoff);
    for i in 1..=alg.max_arity() {
        let args = vec![&zeta; i];
        total = &total + &alg.mu(&args, cutoff)?;
    }
    Ok(total)
}

/// `κ(f₊) − (μ ⊙ f − f ⋆ μ)` for a group-like `f`; vanishes identically.
pub fn curvature_identity_residual(a: &Arc<AStructure>, f: &GroupLike, cutoff: usize) -> Result<Cochain> {
    let v = HochschildAlgebra::new(a);
    let kappa = curvature(&v, f.plus(), cutoff)?;
    let mu = a.mu().clone().with_cutoff(cutoff);
    let rhs = &odot(&mu, f, cutoff)? - &star(&f.full(), &mu, cutoff)?;
    Ok(&kappa - &rhs)
}

/// A verified Maurer-Cartan element.
#[derive(Clone, Debug, PartialEq)]
pub struct MCElement {
    zeta: Cochain,
}

impl MCElement {
    pub fn new(alg: &dyn AInfAlgebra, zeta: Cochain, cutoff: usize) -> Result<MCElement> {
        if !curvature(alg, &zeta, cutoff)?.is_zero() {
            return Err(Error::NotMaurerCartan("curvature is nonzero".into()));
        }
        Ok(MCElement { zeta: zeta.with_degree(0)? })
    }

    pub fn zeta(&self) -> &Cochain {
        &self.zeta
    }
}

// ---------------------------------------------------------------------------
// shuffles and twisting

/// `sh(u, v)`: every interleaving keeping the internal orders of `u` and `v`,
/// with the Koszul sign `(−1)^{|a||b|}` for each `b ∈ v` moved in front of an
/// `a ∈ u`.
pub fn shuffle<T: Clone>(u: &[T], v: &[T], degree: impl Fn(&T) -> i64) -> Vec<(Scalar, Vec<T>)> {
    let n = u.len() + v.len();
    (0..n)
        .combinations(u.len())
        .map(|upos| {
            let mut word = Vec::with_capacity(n);
            let mut odd = false;
            let (mut iu, mut iv) = (0, 0);
            for slot in 0..n {
                if iu < u.len() && upos[iu] == slot {
                    word.push(u[iu].clone());
                    iu += 1;
                } else {
                    // v[iv] passes the u's not yet placed
                    let dv = degree(&v[iv]);
                    odd ^= u[iu..].iter().map(|a| degree(a) * dv).sum::<i64>().rem_euclid(2) == 1;
                    word.push(v[iv].clone());
                    iv += 1;
                }
            }
            (Scalar::sign(odd), word)
        })
        .collect()
}

/// `A^ζ`: `μ^i_ζ = Σ_j μ^{i+j}(sh(ζ^{⊗j}, Id))`.
pub struct Twisted<'a> {
    base: &'a dyn AInfAlgebra,
    zeta: Cochain,
}

impl<'a> Twisted<'a> {
    pub fn new(base: &'a dyn AInfAlgebra, zeta: &MCElement) -> Twisted<'a> {
        Twisted { base, zeta: zeta.zeta.clone() }
    }
}

impl AInfAlgebra for Twisted<'_> {
    fn graph(&self) -> &Arc<Graph> {
        self.base.graph()
    }

    fn max_arity(&self) -> usize {
        self.base.max_arity()
    }

    fn mu(&self, args: &[&Cochain], cutoff: usize) -> Result<Cochain> {
        if args.is_empty() {
            return Err(Error::EmptyBrace);
        }
        let degree = 1 + args.iter().map(|x| x.degree()).sum::<i64>();
        let mut total = zero_like(self.graph(), degree, cutoff);
        let top = self.base.max_arity().saturating_sub(args.len());
        for j in 0..=top {
            if j > 0 && self.zeta.is_zero() {
                break;
            }
            let zs = vec![&self.zeta; j];
            for (sign, word) in shuffle(&zs, args, |c| c.degree()) {
                total = &total + &self.base.mu(&word, cutoff)?.scale(&sign);
            }
        }
        Ok(total)
    }
}

/// The right `A`-module `A^[ζ]`: `μ^i = Σ_j μ^{i+j}(ζ, ..., ζ, Id)`.
pub struct TwistedModule<'a> {
    base: &'a dyn AInfAlgebra,
    zeta: Cochain,
}

impl<'a> TwistedModule<'a> {
    pub fn new(base: &'a dyn AInfAlgebra, zeta: &MCElement) -> TwistedModule<'a> {
        TwistedModule { base, zeta: zeta.zeta.clone() }
    }

    /// `μ^i(m, a_2, ..., a_i)`.
    pub fn mu(&self, args: &[&Cochain], cutoff: usize) -> Result<Cochain> {
        if args.is_empty() {
            return Err(Error::EmptyBrace);
        }
        let degree = 1 + args.iter().map(|x| x.degree()).sum::<i64>();
        let mut total = zero_like(self.base.graph(), degree, cutoff);
        let top = self.base.max_arity().saturating_sub(args.len());
        for j in 0..=top {
            if j > 0 && self.zeta.is_zero() {
                break;
            }
            let mut word = vec![&self.zeta; j];
            word.extend_from_slice(args);
            total = &total + &self.base.mu(&word, cutoff)?;
        }
        Ok(total)
    }
}

fn koszul_prefix(args: &[&Cochain]) -> Scalar {
    Scalar::sign(args.iter().map(|x| x.degree()).sum::<i64>().rem_euclid(2) == 1)
}

/// `Σ (−1)^{|x_1| + ... + |x_r|} μ(x_1, ..., x_r, μ(x_{r+1}, ...), ...)`.
pub fn ainf_relation_residual(alg: &dyn AInfAlgebra, args: &[&Cochain], cutoff: usize) -> Result<Cochain> {
    let n = args.len();
    let degree = 2 + args.iter().map(|x| x.degree()).sum::<i64>();
    let mut total = zero_like(alg.graph(), degree, cutoff);
    for r in 0..n {
        for s in 1..=n - r {
            let inner = alg.mu(&args[r..r + s], cutoff)?;
            let mut outer: Vec<&Cochain> = args[..r].to_vec();
            outer.push(&inner);
            outer.extend_from_slice(&args[r + s..]);
            total = &total + &alg.mu(&outer, cutoff)?.scale(&koszul_prefix(&args[..r]));
        }
    }
    Ok(total)
}

/// The right-module equations of `A^[ζ]` on `(m, a_2, ..., a_n)`: blocks
/// starting at `m` use the module maps, the others the untwisted `μ_A`.
pub fn module_relation_residual(module: &TwistedModule<'_>, args: &[&Cochain], cutoff: usize) -> Result<Cochain> {
    let n = args.len();
    let degree = 2 + args.iter().map(|x| x.degree()).sum::<i64>();
    let mut total = zero_like(module.base.graph(), degree, cutoff);
    for r in 0..n {
        for s in 1..=n - r {
            let inner =
                if r == 0 { module.mu(&args[..s], cutoff)? } else { module.base.mu(&args[r..r + s], cutoff)? };
            let mut outer: Vec<&Cochain> = args[..r].to_vec();
            outer.push(&inner);
            outer.extend_from_slice(&args[r + s..]);
            total = &total + &module.mu(&outer, cutoff)?.scale(&koszul_prefix(&args[..r]));
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// the unshifted dg algebra U

/// `V = C(A)` read as an unshifted algebra `U` when `A` is a dg category:
/// `|x|_U = |x|_V + 1`, `x · y = (−1)^{|x|_V} μ{x, y}`, `d_U = [μ, −]` and
/// unit the weight-0 identities.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    a: Arc<AStructure>,
}

impl DgAlgebra {
    pub fn new(a: &Arc<AStructure>) -> Result<DgAlgebra> {
        if a.mu().max_weight() > Some(2) {
            return Err(Error::Invalid("higher products present: not a dg category".into()));
        }
        a.graph().units().ok_or(Error::MissingUnits)?;
        Ok(DgAlgebra { a: a.clone() })
    }

    pub fn structure(&self) -> &Arc<AStructure> {
        &self.a
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.a.graph()
    }

    pub fn one(&self, cutoff: usize) -> Cochain {
        Cochain::units(self.graph(), cutoff).expect("checked in new")
    }

    pub fn product(&self, x: &Cochain, y: &Cochain, cutoff: usize) -> Result<Cochain> {
        let p = brace(self.a.mu(), &[x, y], cutoff)?;
        Ok(p.scale(&Scalar::sign(x.degree().rem_euclid(2) == 1)))
    }

    pub fn differential(&self, x: &Cochain, cutoff: usize) -> Result<Cochain> {
        gerstenhaber_bracket(self.a.mu(), x, cutoff)
    }

    /// Graded commutator `[x, y] = x·y − (−1)^{|x|_U |y|_U} y·x`.
    pub fn bracket(&self, x: &Cochain, y: &Cochain, cutoff: usize) -> Result<Cochain> {
        let xy = self.product(x, y, cutoff)?;
        let yx = self.product(y, x, cutoff)?;
        let odd = ((x.degree() + 1) * (y.degree() + 1)).rem_euclid(2) == 1;
        Ok(&xy - &yx.scale(&Scalar::sign(odd)))
    }

    /// `Σ_{n ≥ 0} uⁿ / n!` for `u` of weight at least one in `U⁰`.
    pub fn exp(&self, u: &Cochain, cutoff: usize) -> Result<Cochain> {
        if !u.is_zero() && (u.degree() != -1 || u.min_weight() < Some(1)) {
            return Err(Error::Weight("exponent must lie in U⁰ with weight >= 1".into()));
        }
        let mut total = self.one(cutoff);
        let mut power = total.clone();
        for n in 1.. {
            power = self.product(&power, u, cutoff)?;
            if power.is_zero() {
                break;
            }
            total = &total + &power.scale(&Scalar::inv_factorial(n));
        }
        Ok(total)
    }

    /// Inverse of `c = Σ_X λ_X 1_X + n` with every `λ_X ≠ 0` and `n` of
    /// weight at least one.
    pub fn inverse(&self, c: &Cochain, cutoff: usize) -> Result<Cochain> {
        let g = self.graph();
        let units = g.units().expect("checked in new");
        let mut lambda_inv = Components::new();
        for (o, &u) in units.iter().enumerate() {
            let w = Word::empty(o);
            let l = c.coefficient(&w, u);
            if l.is_zero() {
                return Err(Error::NotInvertible);
            }
            lambda_inv.insert(w, BTreeMap::from([(u, l.inv()?)]));
        }
        let head = c.weights(0, 0);
        let diag = head.components().iter().all(|(w, t)| t.len() == 1 && t.contains_key(&units[w.source()]));
        if !diag {
            return Err(Error::NotInvertible);
        }
        let linv = Cochain::from_components(g, -1, lambda_inv, cutoff)?;
        // c = λ(1 + λ⁻¹n), so c⁻¹ = Σ (−λ⁻¹n)^k λ⁻¹
        let n = c.weights(1, cutoff);
        let q = self.product(&linv, &n, cutoff)?.scale(&-Scalar::one());
        let mut sum = self.one(cutoff);
        let mut power = sum.clone();
        loop {
            power = self.product(&power, &q, cutoff)?;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        self.product(&sum, &linv, cutoff)
    }

    /// `d_U ζ + ζ · ζ`, equal to the curvature of `ζ` in `V`.
    pub fn curvature(&self, zeta: &Cochain, cutoff: usize) -> Result<Cochain> {
        Ok(&self.differential(zeta, cutoff)? + &self.product(zeta, zeta, cutoff)?)
    }
}

/// `e^u.ξ = ξ + Σ_{n ≥ 1} ad_u^{n−1}(ad_u ξ − d_U u) / n!`.
pub fn gauge_action(u_alg: &DgAlgebra, u: &Cochain, xi: &MCElement, cutoff: usize) -> Result<MCElement> {
    check_filtered(u, -1, "a gauge parameter")?;
    let u = u.clone().with_degree(-1)?;
    let xi = xi.zeta();
    let mut term = &u_alg.bracket(&u, xi, cutoff)? - &u_alg.differential(&u, cutoff)?;
    let mut total = xi.clone().with_cutoff(cutoff);
    let mut n = 1;
    while !term.is_zero() {
        total = &total + &term.scale(&Scalar::inv_factorial(n));
        term = u_alg.bracket(&u, &term, cutoff)?;
        n += 1;
    }
    let zeta = total.with_degree(0)?;
    if !u_alg.curvature(&zeta, cutoff)?.is_zero() {
        return Err(Error::NotMaurerCartan("gauge action left the Maurer-Cartan locus".into()));
    }
    Ok(MCElement { zeta })
}

/// `c, d ∈ U⁰` and homotopies `u, v ∈ U⁻¹` between the modules of `ζ` and `ξ`.
#[derive(Clone, Debug)]
pub struct GaugeWitness {
    pub c: Cochain,
    pub d: Cochain,
    pub u: Cochain,
    pub v: Cochain,
}

/// The four residuals of a strict homotopy gauge equivalence, in order:
///
/// ```text
/// d_U c + ζ·c − c·ξ
/// d_U d + ξ·d − d·ζ
/// 1 + d_U u + [ξ, u] − d·c
/// 1 + d_U v + [ζ, v] − c·d
/// ```
#[derive(Clone, Debug)]
pub struct GaugeResiduals {
    pub residuals: [Cochain; 4],
}

impl GaugeResiduals {
    pub fn is_zero(&self) -> bool {
        self.residuals.iter().all(Cochain::is_zero)
    }

    /// Index of the first failing equation.
    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().position(|r| !r.is_zero())
    }
}

pub fn gauge_check_dg(
    u_alg: &DgAlgebra,
    zeta: &Cochain,
    xi: &Cochain,
    w: &GaugeWitness,
    cutoff: usize,
) -> Result<GaugeResiduals> {
    let dg = |x: &Cochain| u_alg.differential(x, cutoff);
    let mul = |x: &Cochain, y: &Cochain| u_alg.product(x, y, cutoff);
    let one = u_alg.one(cutoff);
    let r1 = &(&dg(&w.c)? + &mul(zeta, &w.c)?) - &mul(&w.c, xi)?;
    let r2 = &(&dg(&w.d)? + &mul(xi, &w.d)?) - &mul(&w.d, zeta)?;
    let r3 = &(&(&one + &dg(&w.u)?) + &u_alg.bracket(xi, &w.u, cutoff)?) - &mul(&w.d, &w.c)?;
    let r4 = &(&(&one + &dg(&w.v)?) + &u_alg.bracket(zeta, &w.v, cutoff)?) - &mul(&w.c, &w.d)?;
    Ok(GaugeResiduals { residuals: [r1, r2, r3, r4] })
}

/// Dg gauge equivalence through an invertible `c`: the witness
/// `(c, c⁻¹, 0, 0)` checked against all four equations.
pub fn dg_gauge_check(
    u_alg: &DgAlgebra,
    zeta: &Cochain,
    xi: &Cochain,
    c: &Cochain,
    cutoff: usize,
) -> Result<GaugeResiduals> {
    let d = u_alg.inverse(c, cutoff)?;
    let zero = Cochain::zero(u_alg.graph(), -2, cutoff);
    let w = GaugeWitness { c: c.clone(), d, u: zero.clone(), v: zero };
    gauge_check_dg(u_alg, zeta, xi, &w, cutoff)
}

// ---------------------------------------------------------------------------
// polynomial paths and Quillen homotopies

/// `Σ_k tᵏ a_k + Σ_k tᵏ b_k dt`, stored for powers `k < t_cutoff`. The
/// `dt`-coefficients have degree one less than the `t`-coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialPath {
    graph: Arc<Graph>,
    degree: i64,
    coeffs: BTreeMap<(usize, bool), Cochain>,
    t_cutoff: usize,
}

impl PolynomialPath {
    pub fn zero(graph: &Arc<Graph>, degree: i64, t_cutoff: usize) -> PolynomialPath {
        PolynomialPath { graph: graph.clone(), degree, coeffs: BTreeMap::new(), t_cutoff }
    }

    /// The path `Σ tᵏ a_k` without `dt` part.
    pub fn from_t_coeffs(
        graph: &Arc<Graph>,
        degree: i64,
        coeffs: Vec<Cochain>,
        t_cutoff: usize,
    ) -> Result<PolynomialPath> {
        let mut p = PolynomialPath::zero(graph, degree, t_cutoff);
        for (k, c) in coeffs.into_iter().enumerate() {
            p.set(k, false, c)?;
        }
        Ok(p)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn t_cutoff(&self) -> usize {
        self.t_cutoff
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, bool), Cochain> {
        &self.coeffs
    }

    /// Sets the coefficient of `tᵏ` (or `tᵏ dt`); powers at or above the
    /// cutoff are dropped.
    pub fn set(&mut self, k: usize, dt: bool, c: Cochain) -> Result<()> {
        if c.graph() != &self.graph {
            return Err(Error::GraphMismatch);
        }
        let want = if dt { self.degree - 1 } else { self.degree };
        let c = c.with_degree(want)?;
        if k >= self.t_cutoff || c.is_zero() {
            self.coeffs.remove(&(k, dt));
        } else {
            self.coeffs.insert((k, dt), c);
        }
        Ok(())
    }

    pub fn coefficient(&self, k: usize, dt: bool, cutoff: usize) -> Cochain {
        let d = if dt { self.degree - 1 } else { self.degree };
        self.coeffs.get(&(k, dt)).cloned().unwrap_or_else(|| Cochain::zero(&self.graph, d, cutoff))
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(k, _)| k).max()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest power carrying a nonzero coefficient.
    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(k, _)| k).min()
    }

    /// `t ↦ s`, `dt ↦ 0`.
    pub fn evaluate(&self, s: &Scalar, cutoff: usize) -> Cochain {
        let mut total = Cochain::zero(&self.graph, self.degree, cutoff);
        let mut power = Scalar::one();
        let mut last = 0;
        for (&(k, dt), c) in &self.coeffs {
            if dt {
                continue;
            }
            while last < k {
                power *= s.clone();
                last += 1;
            }
            total = &total + &c.scale(&power);
        }
        total
    }

    fn t_part(&self) -> Vec<(usize, &Cochain)> {
        self.coeffs.iter().filter(|((_, dt), _)| !dt).map(|(&(k, _), c)| (k, c)).collect()
    }
}

/// `Σ_{k_1 + ... + k_i = k} op(p_1[k_1], ..., p_i[k_i])` for each `k`.
fn multilinear<F>(paths: &[&PolynomialPath], t_cutoff: usize, mut op: F) -> Result<BTreeMap<usize, Cochain>>
where
    F: FnMut(&[&Cochain]) -> Result<Cochain>,
{
    let parts: Vec<Vec<(usize, &Cochain)>> = paths.iter().map(|p| p.t_part()).collect();
    let mut out: BTreeMap<usize, Cochain> = BTreeMap::new();
    for choice in parts.iter().map(|p| p.iter()).multi_cartesian_product() {
        let k: usize = choice.iter().map(|(k, _)| k).sum();
        if k >= t_cutoff {
            continue;
        }
        let args: Vec<&Cochain> = choice.iter().map(|(_, c)| *c).collect();
        let value = op(&args)?;
        if value.is_zero() {
            continue;
        }
        let slot = out.remove(&k);
        out.insert(
            k,
            match slot {
                Some(s) => &s + &value,
                None => value,
            },
        );
    }
    Ok(out)
}

fn from_map(graph: &Arc<Graph>, degree: i64, map: BTreeMap<usize, Cochain>, t_cutoff: usize) -> Result<PolynomialPath> {
    let mut p = PolynomialPath::zero(graph, degree, t_cutoff);
    for (k, c) in map {
        p.set(k, false, c)?;
    }
    Ok(p)
}

/// The homotopy from the proof that cohomologous cocycles give homotopic
/// Maurer-Cartan elements: `f = d g`, `x = exp(f) − 1`, `λ = (1 + x) ⋆ ∂ₜg`.
/// The `t`-cutoff is chosen so that `x` and `λ` are exact polynomials within
/// the weight window. Returns `(x, λ)`.
pub fn quillen_homotopy_build(
    a: &Arc<AStructure>,
    g: &PolynomialPath,
    cutoff: usize,
) -> Result<(PolynomialPath, PolynomialPath)> {
    let graph = a.graph();
    if g.graph() != graph {
        return Err(Error::GraphMismatch);
    }
    if !g.is_zero() && g.degree() != -1 {
        return Err(Error::Degree(format!("g has degree {}, expected -1", g.degree())));
    }
    if g.coeffs.keys().any(|&(k, dt)| dt || k == 0) {
        return Err(Error::Invalid("g must be a polynomial in t without constant term".into()));
    }
    let n = g.t_degree().unwrap_or(0);
    // powers f^{⋆r} have weight > r, so r < cutoff and deg_t ≤ r·n
    let t_cutoff = cutoff * n + 1;
    let mut f = PolynomialPath::zero(graph, 0, t_cutoff);
    for (&(k, _), c) in &g.coeffs {
        let dc = gerstenhaber_bracket(a.mu(), c, cutoff)?;
        check_filtered(&dc, 0, "d(g)").map_err(|_| Error::Weight("d(g) escapes weight >= 2".into()))?;
        f.set(k, false, dc)?;
    }
    let g = PolynomialPath { t_cutoff, ..g.clone() };
    let mut x = PolynomialPath::zero(graph, 0, t_cutoff);
    let mut power = f.clone();
    let mut r = 1;
    while !power.is_zero() {
        for (&(k, _), c) in &power.coeffs {
            let prev = x.coefficient(k, false, cutoff);
            x.set(k, false, &prev + &c.scale(&Scalar::inv_factorial(r)))?;
        }
        let next = multilinear(&[&power, &f], t_cutoff, |args| star(args[0], args[1], cutoff))?;
        power = from_map(graph, 0, next, t_cutoff)?;
        r += 1;
    }
    // ∂ₜg, the direction the homotopy moves in
    let mut dg = PolynomialPath::zero(graph, -1, t_cutoff);
    for (&(k, _), c) in &g.coeffs {
        dg.set(k - 1, false, c.scale(&Scalar::from_int(k as i64)).with_cutoff(cutoff))?;
    }
    let xg = multilinear(&[&x, &dg], t_cutoff, |args| star(args[0], args[1], cutoff))?;
    let mut lambda = from_map(graph, -1, xg, t_cutoff)?;
    for (&(k, _), c) in &dg.coeffs {
        let prev = lambda.coefficient(k, false, cutoff);
        lambda.set(k, false, &prev + c)?;
    }
    Ok((x, lambda))
}

/// Residuals of a homotopy `(x, λ)`: the differential equation
/// `∂ₜx = μ¹(λ) + Σ_{i ≥ 2} μ^i(sh(x^{⊗(i−1)}, λ))` for every power below
/// `t_cutoff − 1`, and the curvature of `x(0)` and `x(1)`.
#[derive(Clone, Debug)]
pub struct QuillenResidual {
    pub ode: PolynomialPath,
    pub start: Cochain,
    pub end: Cochain,
}

impl QuillenResidual {
    pub fn is_zero(&self) -> bool {
        self.ode.is_zero() && self.start.is_zero() && self.end.is_zero()
    }
}

pub fn quillen_verify(
    alg: &dyn AInfAlgebra,
    x: &PolynomialPath,
    lambda: &PolynomialPath,
    cutoff: usize,
) -> Result<QuillenResidual> {
    let graph = alg.graph();
    if x.graph() != graph || lambda.graph() != graph {
        return Err(Error::GraphMismatch);
    }
    for (_, c) in x.t_part() {
        check_filtered(c, 0, "x(t)")?;
    }
    let t_cutoff = x.t_cutoff.min(lambda.t_cutoff);
    let top = t_cutoff.saturating_sub(1);
    // right-hand side, as a map from t-power to coefficient
    let mut rhs = multilinear(&[lambda], top, |args| alg.mu(args, cutoff))?;
    for i in 2..=alg.max_arity() {
        for p in 0..i {
            let mut paths = vec![x; i];
            paths[p] = lambda;
            let term = multilinear(&paths, top, |args| alg.mu(args, cutoff))?;
            for (k, c) in term {
                let slot = rhs.remove(&k);
                rhs.insert(
                    k,
                    match slot {
                        Some(s) => &s + &c,
                        None => c,
                    },
                );
            }
        }
    }
    let mut ode = PolynomialPath::zero(graph, 0, top);
    for k in 0..top {
        let dx = x.coefficient(k + 1, false, cutoff).scale(&Scalar::from_int(k as i64 + 1));
        let r = rhs.remove(&k).unwrap_or_else(|| Cochain::zero(graph, 0, cutoff));
        ode.set(k, false, &dx - &r)?;
    }
    let start = curvature(alg, &x.evaluate(&Scalar::zero(), cutoff), cutoff)?;
    let end = curvature(alg, &x.evaluate(&Scalar::one(), cutoff), cutoff)?;
    Ok(QuillenResidual { ode, start, end })
}

// ---------------------------------------------------------------------------
// relative Hochschild complexes

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Postcomposition `V_*: η ↦ V(Φ, ..., Φ, η, Φ, ..., Φ)` along `V: B → B'`.
    Push,
    /// Precomposition `U^*: η ↦ η{U, ..., U}` along `U: A' → A`.
    Pull,
}

/// A map between relative complexes `Fun(A, B)(Φ, Φ)` induced by a functor.
#[derive(Clone, Debug)]
pub struct RelativeComplexMap {
    pub direction: Direction,
    pub functor: AFunctor,
}

pub fn relative_pushpull(functor: &AFunctor, direction: Direction) -> RelativeComplexMap {
    RelativeComplexMap { direction, functor: functor.clone() }
}

impl RelativeComplexMap {
    pub fn apply(&self, eta: &Prenatural, cutoff: usize) -> Result<Prenatural> {
        match self.direction {
            Direction::Push => self.push(eta, cutoff),
            Direction::Pull => self.pull(eta, cutoff),
        }
    }

    fn push(&self, eta: &Prenatural, cutoff: usize) -> Result<Prenatural> {
        let v = &self.functor;
        if eta.from.target != v.source {
            return Err(Error::FunctorMismatch("transformation does not land in the functor's source".into()));
        }
        let cutoff = cutoff.min(eta.comps.cutoff).min(v.cutoff());
        let s = eta.from.source.graph();
        let fill = [
            Filler::Map(Inner::new(&eta.to.taylor.comps, 0)),
            Filler::Map(Inner::new(&eta.comps.comps, eta.degree())),
            Filler::Map(Inner::new(&eta.from.taylor.comps, 0)),
        ];
        let pattern = |l: usize| {
            (0..l)
                .map(|p| {
                    (0..l)
                        .map(|j| {
                            if j < p {
                                0
                            } else if j == p {
                                1
                            } else {
                                2
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let (comps, _) = insert(&v.taylor.comps, s, &fill, pattern, cutoff);
        let from = crate::ainfinity::compose_functors(v, &eta.from, cutoff)?;
        let to = crate::ainfinity::compose_functors(v, &eta.to, cutoff)?;
        Prenatural::new(&from, &to, eta.degree(), comps, cutoff)
    }

    fn pull(&self, eta: &Prenatural, cutoff: usize) -> Result<Prenatural> {
        let u = &self.functor;
        if u.target != eta.from.source {
            return Err(Error::FunctorMismatch("functor does not land in the transformation's source".into()));
        }
        let cutoff = cutoff.min(eta.comps.cutoff).min(u.cutoff());
        let s = u.source.graph();
        let positive: Components =
            eta.comps.comps.iter().filter(|(w, _)| w.weight() > 0).map(|(w, t)| (w.clone(), t.clone())).collect();
        let fill = [Filler::Map(Inner::new(&u.taylor.comps, 0))];
        let (mut comps, _) = insert(&positive, s, &fill, |l| vec![vec![0; l]], cutoff);
        // weight 0: η⁰ at the image object
        for (o, &image) in u.object_map.iter().enumerate() {
            if let Some(t) = eta.comps.comps.get(&Word::empty(image)) {
                comps.insert(Word::empty(o), t.clone());
            }
        }
        let from = crate::ainfinity::compose_functors(&eta.from, u, cutoff)?;
        let to = crate::ainfinity::compose_functors(&eta.to, u, cutoff)?;
        Prenatural::new(&from, &to, eta.degree(), comps, cutoff)
    }
}

/// `η ↦ d_Fun(map η) − map(d_Fun η)`; vanishes for a chain map.
pub fn chain_map_residual(map: &RelativeComplexMap, eta: &Prenatural, cutoff: usize) -> Result<Table> {
    let lhs = crate::ainfinity::fun_differential(&map.apply(eta, cutoff)?, cutoff)?;
    let rhs = map.apply(&crate::ainfinity::fun_differential(eta, cutoff)?, cutoff)?;
    Ok(lhs.comps.sub(&rhs.comps))
}
