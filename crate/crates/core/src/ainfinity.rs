//! A∞-structures as Maurer-Cartan elements of `C(G)`, functors given by
//! Taylor coefficients, prenatural transformations and the functor-category
//! operations, opposite categories and gluing along a functor.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graded_core::{add_term, permutation_sign, Terms};
use crate::hochschild::{brace_patterns, insert, restrict, star, Cochain, Components, Filler, Inner};
use crate::kgraph::{include_full_subgraph, Graph, GraphSpec, RestrictionIndex, Word};
use crate::linalg::{self, SparseVec};
use crate::scalar::Scalar;

/// Sign turning an m-convention component into the μ-convention one, and
/// back: `(-1)^{Σ (n-1)|a_n|}` for inputs `a_i, ..., a_1` (composition
/// order) with shifted degrees.
pub fn convention_sign(g: &Graph, word: &Word) -> Scalar {
    let i = word.weight();
    let mut exp = 0i64;
    for (k, &b) in word.inputs.iter().enumerate() {
        // inputs[k] is a_{i-k}
        exp += (i - k - 1) as i64 * g.shifted(b);
    }
    Scalar::sign(exp.rem_euclid(2) == 1)
}

/// Converts a table between the m- and μ-conventions. The map is an
/// involution, so the same call converts in both directions.
pub fn convert_convention(g: &Graph, comps: &Components) -> Components {
    comps
        .iter()
        .map(|(w, t)| {
            let s = convention_sign(g, w);
            (w.clone(), t.iter().map(|(&b, c)| (b, c * &s)).collect())
        })
        .collect()
}

/// An A∞-structure: `μ ∈ W₁C¹` with `μ ⋆ μ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AStructure {
    mu: Cochain,
    minimal: bool,
    strictly_unital: bool,
}

impl AStructure {
    /// Wraps `mu` after checking degree and weight. Does not check `μ⋆μ = 0`;
    /// use [`validate_astructure`] for that.
    pub fn new(mu: Cochain) -> Result<AStructure> {
        if !mu.is_zero() && mu.degree() != 1 {
            return Err(Error::Degree(format!("structure has degree {}, expected 1", mu.degree())));
        }
        let mu = mu.with_degree(1)?;
        if mu.min_weight() == Some(0) {
            return Err(Error::Weight("structure has a weight-0 (curvature) term".into()));
        }
        let minimal = mu.components().keys().all(|w| w.weight() != 1);
        let strictly_unital = strict_unit_laws(&mu);
        Ok(AStructure { mu, minimal, strictly_unital })
    }

    /// Builds from a table given in the m-convention.
    pub fn from_m_table(graph: &Arc<Graph>, m: &Components, cutoff: usize) -> Result<AStructure> {
        let mu = Cochain::from_components(graph, 1, convert_convention(graph, m), cutoff)?;
        AStructure::new(mu)
    }

    pub fn mu(&self) -> &Cochain {
        &self.mu
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.mu.graph()
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn is_strictly_unital(&self) -> bool {
        self.strictly_unital
    }

    /// Only the binary part is nonzero, so the Hochschild differential moves
    /// weight by exactly one.
    pub fn is_graded_algebra(&self) -> bool {
        self.mu.components().keys().all(|w| w.weight() == 2)
    }

    /// The same structure with every object and basis id suffixed.
    pub fn renamed(&self, suffix: &str) -> Result<AStructure> {
        let g = self.graph();
        let mut spec = GraphSpec::new(g.objects().iter().map(|o| format!("{o}{suffix}")));
        for b in g.basis() {
            spec = spec.arrow(
                &format!("{}{suffix}", b.id),
                &format!("{}{suffix}", g.objects()[b.source]),
                &format!("{}{suffix}", g.objects()[b.target]),
                b.degree,
            );
        }
        spec.units = g
            .spec()
            .units
            .map(|u| u.into_iter().map(|(o, b)| (format!("{o}{suffix}"), format!("{b}{suffix}"))).collect());
        let ng = Arc::new(Graph::new(&spec)?);
        // objects and hom blocks keep their order, so indices carry over
        let mu = Cochain::from_components(&ng, 1, self.mu.components().clone(), self.mu.cutoff())?;
        AStructure::new(mu)
    }
}

fn strict_unit_laws(mu: &Cochain) -> bool {
    let g = mu.graph();
    let Some(units) = g.units() else { return false };
    let units = units.to_vec();
    for w in mu.components().keys() {
        if w.inputs.iter().any(|b| units.contains(b)) && w.weight() != 2 {
            return false;
        }
    }
    for (x, e) in g.basis().iter().enumerate() {
        let left = Word::new(g, vec![units[e.target], x]).expect("unit composes");
        let right = Word::new(g, vec![x, units[e.source]]).expect("unit composes");
        // m(1, x) = x = m(x, 1), converted
        let want_left = Terms::from([(x, convention_sign(g, &left))]);
        let want_right = Terms::from([(x, convention_sign(g, &right))]);
        if mu.components().get(&left) != Some(&want_left) || mu.components().get(&right) != Some(&want_right) {
            return false;
        }
    }
    true
}

/// `μ ⋆ μ` up to `cutoff`. Zero means an A∞-structure up to the cutoff; the
/// residual's exactness flag certifies that nothing above it was skipped.
pub fn validate_astructure(mu: &Cochain, cutoff: usize) -> Result<Cochain> {
    if !mu.is_zero() && mu.degree() != 1 {
        return Err(Error::Degree(format!("structure has degree {}", mu.degree())));
    }
    if mu.min_weight() == Some(0) {
        return Err(Error::Weight("structure has a weight-0 term".into()));
    }
    star(mu, mu, cutoff)
}

// ---------------------------------------------------------------------------
// tables between two graphs

/// A family of multilinear maps from words of `source` to homs of `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub degree: i64,
    pub comps: Components,
    pub cutoff: usize,
}

impl Table {
    pub fn zero(source: &Arc<Graph>, target: &Arc<Graph>, degree: i64, cutoff: usize) -> Table {
        Table { source: source.clone(), target: target.clone(), degree, comps: Components::new(), cutoff }
    }

    pub fn from_cochain(c: &Cochain) -> Table {
        Table {
            source: c.graph().clone(),
            target: c.graph().clone(),
            degree: c.degree(),
            comps: c.components().clone(),
            cutoff: c.cutoff(),
        }
    }

    /// Back to a cochain when source and target coincide.
    pub fn to_cochain(&self) -> Result<Cochain> {
        if self.source != self.target {
            return Err(Error::GraphMismatch);
        }
        Cochain::from_components(&self.source, self.degree, self.comps.clone(), self.cutoff)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn combine(&self, other: &Table, sign: &Scalar) -> Table {
        let mut comps = self.comps.clone();
        for (w, t) in &other.comps {
            let e = comps.entry(w.clone()).or_default();
            for (&b, c) in t {
                add_term(e, b, sign * c);
            }
            if e.is_empty() {
                comps.remove(w);
            }
        }
        let cutoff = self.cutoff.min(other.cutoff);
        comps.retain(|w, _| w.weight() <= cutoff);
        let degree = if self.comps.is_empty() { other.degree } else { self.degree };
        Table { comps, cutoff, degree, ..self.clone() }
    }

    pub fn add(&self, other: &Table) -> Table {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Table) -> Table {
        self.combine(other, &-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Table {
        let comps = if c.is_zero() {
            Components::new()
        } else {
            self.comps.iter().map(|(w, t)| (w.clone(), t.iter().map(|(&b, x)| (b, x * c)).collect())).collect()
        };
        Table { comps, ..self.clone() }
    }

    pub fn truncate(&self, cutoff: usize) -> Table {
        let comps =
            self.comps.iter().filter(|(w, _)| w.weight() <= cutoff).map(|(w, t)| (w.clone(), t.clone())).collect();
        Table { comps, cutoff: cutoff.min(self.cutoff), ..self.clone() }
    }

    /// Components of one weight.
    pub fn weight(&self, w: usize) -> Table {
        let comps = self.comps.iter().filter(|(k, _)| k.weight() == w).map(|(k, t)| (k.clone(), t.clone())).collect();
        Table { comps, ..self.clone() }
    }
}

// ---------------------------------------------------------------------------
// functors

/// An A∞-functor given by its object map and Taylor coefficients `F^i`,
/// `i ≥ 1`, stored up to a cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct AFunctor {
    pub source: Arc<AStructure>,
    pub target: Arc<AStructure>,
    pub object_map: Vec<usize>,
    pub taylor: Table,
}

impl AFunctor {
    pub fn new(
        source: &Arc<AStructure>,
        target: &Arc<AStructure>,
        object_map: Vec<usize>,
        taylor: Components,
        cutoff: usize,
    ) -> Result<AFunctor> {
        let (s, t) = (source.graph(), target.graph());
        if object_map.len() != s.n_objects() || object_map.iter().any(|&o| o >= t.n_objects()) {
            return Err(Error::FunctorMismatch("object map has the wrong shape".into()));
        }
        for (w, terms) in &taylor {
            if w.weight() == 0 {
                return Err(Error::FunctorMismatch("functors have no weight-0 coefficient".into()));
            }
            if Word::new(s, w.inputs.clone())? != *w {
                return Err(Error::NotComposable(w.display(s)));
            }
            let sdeg: i64 = w.inputs.iter().map(|&b| s.elem(b).degree).sum();
            for &b in terms.keys() {
                let e = t.elem(b);
                if (e.source, e.target) != (object_map[w.source()], object_map[w.target()]) {
                    return Err(Error::FunctorMismatch(format!("F({}) leaves its hom block", w.display(s))));
                }
                if w.weight() as i64 - 1 + e.degree - sdeg != 0 {
                    return Err(Error::Degree(format!("F({}) is not of degree 0", w.display(s))));
                }
            }
        }
        let taylor = taylor.into_iter().filter(|(w, tm)| w.weight() <= cutoff && !tm.is_empty()).collect();
        Ok(AFunctor {
            source: source.clone(),
            target: target.clone(),
            object_map,
            taylor: Table { source: s.clone(), target: t.clone(), degree: 0, comps: taylor, cutoff },
        })
    }

    pub fn identity(a: &Arc<AStructure>, cutoff: usize) -> AFunctor {
        let one = Cochain::identity(a.graph(), cutoff);
        AFunctor {
            source: a.clone(),
            target: a.clone(),
            object_map: (0..a.graph().n_objects()).collect(),
            taylor: Table::from_cochain(&one),
        }
    }

    /// The endofunctor with identity object map and Taylor table `1 + plus`.
    pub fn from_group_like(a: &Arc<AStructure>, plus: &Cochain) -> Result<AFunctor> {
        if plus.graph() != a.graph() {
            return Err(Error::GraphMismatch);
        }
        if !plus.is_zero() && (plus.degree() != 0 || plus.min_weight() < Some(2)) {
            return Err(Error::Weight("group-like part must have degree 0 and weight >= 2".into()));
        }
        let f = &Cochain::identity(a.graph(), plus.cutoff()) + plus;
        Ok(AFunctor {
            source: a.clone(),
            target: a.clone(),
            object_map: (0..a.graph().n_objects()).collect(),
            taylor: Table::from_cochain(&f),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.taylor.cutoff
    }

    /// `F - 1` for an endofunctor with identity object map and `F^1 = Id`.
    pub fn plus_part(&self) -> Result<Cochain> {
        let g = self.source.graph();
        if self.source != self.target || self.object_map.iter().enumerate().any(|(i, &o)| i != o) {
            return Err(Error::FunctorMismatch("not an isotopy".into()));
        }
        let f = self.taylor.to_cochain()?;
        let plus = &f - &Cochain::identity(g, self.cutoff());
        if plus.min_weight() == Some(1) {
            return Err(Error::FunctorMismatch("first Taylor coefficient is not the identity".into()));
        }
        Ok(plus)
    }
}

/// All slots filled by one filler.
fn all_slots(filler: usize) -> impl Fn(usize) -> Vec<Vec<usize>> {
    move |l| vec![vec![filler; l]]
}

/// `Σ μ_B(F ⊗ ... ⊗ F) - Σ F(Id ⊗ μ_A ⊗ Id)` per weight.
pub fn functor_residual(f: &AFunctor, cutoff: usize) -> Result<Table> {
    let cutoff = cutoff.min(f.cutoff());
    let s = f.source.graph();
    let lhs_fill = [Filler::Map(Inner::new(&f.taylor.comps, 0))];
    let (lhs, _) = insert(f.target.mu().components(), s, &lhs_fill, all_slots(0), cutoff);
    let rhs_fill = [Filler::Id, Filler::Map(Inner::new(f.source.mu().components(), 1))];
    let (rhs, _) = insert(&f.taylor.comps, s, &rhs_fill, |l| brace_patterns(l, 1), cutoff);
    let mk = |comps| Table { source: s.clone(), target: f.target.graph().clone(), degree: 1, comps, cutoff };
    Ok(mk(lhs).sub(&mk(rhs)))
}

/// `(G∘F)^n = Σ G^l(F^{i_1} ⊗ ... ⊗ F^{i_l})`.
pub fn compose_functors(g: &AFunctor, f: &AFunctor, cutoff: usize) -> Result<AFunctor> {
    if f.target != g.source {
        return Err(Error::FunctorMismatch("target of F is not the source of G".into()));
    }
    let cutoff = cutoff.min(f.cutoff()).min(g.cutoff());
    let fill = [Filler::Map(Inner::new(&f.taylor.comps, 0))];
    let (comps, _) = insert(&g.taylor.comps, f.source.graph(), &fill, all_slots(0), cutoff);
    let object_map = f.object_map.iter().map(|&o| g.object_map[o]).collect();
    AFunctor::new(&f.source, &g.target, object_map, comps, cutoff)
}

// ---------------------------------------------------------------------------
// prenatural transformations

/// A morphism `η: F → G` of the functor category: components `η^i`, `i ≥ 0`,
/// with `η^0` a weight-0 component per object.
#[derive(Clone, Debug, PartialEq)]
pub struct Prenatural {
    pub from: AFunctor,
    pub to: AFunctor,
    pub comps: Table,
}

impl Prenatural {
    pub fn new(from: &AFunctor, to: &AFunctor, degree: i64, comps: Components, cutoff: usize) -> Result<Prenatural> {
        if from.source != to.source || from.target != to.target {
            return Err(Error::FunctorMismatch("transformation between functors with different ends".into()));
        }
        let (s, t) = (from.source.graph(), from.target.graph());
        for (w, terms) in &comps {
            if w.weight() > 0 && Word::new(s, w.inputs.clone())? != *w {
                return Err(Error::NotComposable(w.display(s)));
            }
            let sdeg: i64 = w.inputs.iter().map(|&b| s.elem(b).degree).sum();
            for &b in terms.keys() {
                let e = t.elem(b);
                if (e.source, e.target) != (from.object_map[w.source()], to.object_map[w.target()]) {
                    return Err(Error::FunctorMismatch(format!("η({}) leaves its hom block", w.display(s))));
                }
                if w.weight() as i64 - 1 + e.degree - sdeg != degree {
                    return Err(Error::Degree(format!("η({}) has the wrong degree", w.display(s))));
                }
            }
        }
        let comps = comps.into_iter().filter(|(w, tm)| w.weight() <= cutoff && !tm.is_empty()).collect();
        Ok(Prenatural {
            from: from.clone(),
            to: to.clone(),
            comps: Table { source: s.clone(), target: t.clone(), degree, comps, cutoff },
        })
    }

    pub fn degree(&self) -> i64 {
        self.comps.degree
    }

    /// A Hochschild cochain read as a transformation of the identity functor.
    pub fn of_cochain(a: &Arc<AStructure>, c: &Cochain) -> Result<Prenatural> {
        let id = AFunctor::identity(a, c.cutoff());
        Prenatural::new(&id, &id, c.degree(), c.components().clone(), c.cutoff())
    }
}

/// `μ¹` of the functor category:
/// `Σ μ_B(G ⊗ .. ⊗ G ⊗ η ⊗ F ⊗ .. ⊗ F) - (-1)^{|η|} Σ η(Id ⊗ μ_A ⊗ Id)`.
pub fn fun_differential(eta: &Prenatural, cutoff: usize) -> Result<Prenatural> {
    let cutoff = cutoff.min(eta.comps.cutoff).min(eta.from.cutoff()).min(eta.to.cutoff());
    let s = eta.from.source.graph();
    let d = eta.degree();
    let fill = [
        Filler::Map(Inner::new(&eta.to.taylor.comps, 0)),
        Filler::Map(Inner::new(&eta.comps.comps, d)),
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
    let (lhs, _) = insert(eta.from.target.mu().components(), s, &fill, pattern, cutoff);
    let rhs_fill = [Filler::Id, Filler::Map(Inner::new(eta.from.source.mu().components(), 1))];
    let (rhs, _) = insert(&eta.comps.comps, s, &rhs_fill, |l| brace_patterns(l, 1), cutoff);
    let t = eta.comps.target.clone();
    let mk = |comps| Table { source: s.clone(), target: t.clone(), degree: d + 1, comps, cutoff };
    let sign = Scalar::sign(d.rem_euclid(2) == 0);
    let total = mk(lhs).add(&mk(rhs).scale(&sign));
    Ok(Prenatural { from: eta.from.clone(), to: eta.to.clone(), comps: total })
}

/// Higher products `μ^i_Fun(η_i, ..., η_1)` for `i ≥ 2`; `etas` is given in
/// path order, `etas[0] = η_1: F_0 → F_1`.
pub fn fun_product(etas: &[&Prenatural], cutoff: usize) -> Result<Prenatural> {
    let i = etas.len();
    if i < 2 {
        return Err(Error::FunctorMismatch("use fun_differential for one argument".into()));
    }
    for pair in etas.windows(2) {
        if pair[0].to != pair[1].from {
            return Err(Error::FunctorMismatch("transformations do not compose".into()));
        }
    }
    let mut cutoff = cutoff;
    for e in etas {
        cutoff = cutoff.min(e.comps.cutoff).min(e.from.cutoff()).min(e.to.cutoff());
    }
    let s = etas[0].from.source.graph();
    // fillers in written order: F_i, η_i, F_{i-1}, ..., η_1, F_0
    let mut fill = Vec::with_capacity(2 * i + 1);
    for k in (1..=i).rev() {
        let eta = etas[k - 1];
        fill.push(Filler::Map(Inner::new(&eta.to.taylor.comps, 0)));
        fill.push(Filler::Map(Inner::new(&eta.comps.comps, eta.degree())));
    }
    fill.push(Filler::Map(Inner::new(&etas[0].from.taylor.comps, 0)));
    let pattern = |l: usize| {
        (0..l)
            .combinations(i)
            .map(|qs| {
                let mut pat = vec![0; l];
                let mut block = 0;
                let mut next = 0;
                for (slot, p) in pat.iter_mut().enumerate() {
                    if next < i && slot == qs[next] {
                        *p = 2 * next + 1;
                        next += 1;
                        block = 2 * next;
                    } else {
                        *p = block;
                    }
                }
                pat
            })
            .collect()
    };
    let (comps, _) = insert(etas[0].from.target.mu().components(), s, &fill, pattern, cutoff);
    let degree = etas.iter().map(|e| e.degree()).sum::<i64>() + 1;
    Ok(Prenatural {
        from: etas[0].from.clone(),
        to: etas[i - 1].to.clone(),
        comps: Table { source: s.clone(), target: etas[0].comps.target.clone(), degree, comps, cutoff },
    })
}

/// Elementary transformations `word -> b` from `F` to `G` of the given degree
/// and weight.
pub fn prenatural_basis(from: &AFunctor, to: &AFunctor, degree: i64, weight: usize) -> Vec<(Word, usize)> {
    let (s, t) = (from.source.graph(), from.target.graph());
    let mut out = Vec::new();
    for w in s.words(weight) {
        let sdeg: i64 = w.inputs.iter().map(|&b| s.elem(b).degree).sum();
        for &b in t.hom(from.object_map[w.source()], to.object_map[w.target()]) {
            if weight as i64 - 1 + t.elem(b).degree - sdeg == degree {
                out.push((w.clone(), b));
            }
        }
    }
    out
}

/// Coordinates of tables in a shared (word, output) index.
#[derive(Default)]
pub(crate) struct Coords {
    index: HashMap<(Word, usize), usize>,
    keys: Vec<(Word, usize)>,
}

impl Coords {
    pub(crate) fn vector(&mut self, comps: &Components) -> SparseVec {
        let mut v = SparseVec::new();
        for (w, t) in comps {
            for (&b, c) in t {
                let n = self.index.len();
                let i = *self.index.entry((w.clone(), b)).or_insert_with(|| {
                    self.keys.push((w.clone(), b));
                    n
                });
                v.insert(i, c.clone());
            }
        }
        v
    }
}

/// Searches for `h: F → G` of degree −1 with `h^0 = 0` and `μ¹_Fun(h) = G − F`
/// through weight `cutoff`. `None` means no such `h` exists within the window.
pub fn homotopy_solve(f: &AFunctor, g: &AFunctor, cutoff: usize) -> Result<Option<Prenatural>> {
    if f.object_map != g.object_map {
        return Err(Error::FunctorMismatch("object maps differ".into()));
    }
    if f.source != g.source || f.target != g.target {
        return Err(Error::FunctorMismatch("functors have different ends".into()));
    }
    let cutoff = cutoff.min(f.cutoff()).min(g.cutoff());
    let mut unknowns = Vec::new();
    for w in 1..=cutoff {
        unknowns.extend(prenatural_basis(f, g, -1, w));
    }
    let mut coords = Coords::default();
    let mut columns = Vec::with_capacity(unknowns.len());
    for (w, b) in &unknowns {
        let comps = Components::from([(w.clone(), Terms::from([(*b, Scalar::one())]))]);
        let h = Prenatural::new(f, g, -1, comps, cutoff)?;
        columns.push(coords.vector(&fun_differential(&h, cutoff)?.comps.comps));
    }
    let rhs = coords.vector(&g.taylor.truncate(cutoff).sub(&f.taylor.truncate(cutoff)).comps);
    let Some(x) = linalg::solve(&columns, &rhs) else { return Ok(None) };
    let mut comps = Components::new();
    for (j, c) in x {
        let (w, b) = &unknowns[j];
        add_term(comps.entry(w.clone()).or_default(), *b, c);
    }
    comps.retain(|_, t| !t.is_empty());
    let h = Prenatural::new(f, g, -1, comps, cutoff)?;
    // re-verify the witness
    let check = fun_differential(&h, cutoff)?.comps.sub(&g.taylor.truncate(cutoff).sub(&f.taylor.truncate(cutoff)));
    if !check.is_zero() {
        return Err(Error::Invalid("homotopy witness failed verification".into()));
    }
    Ok(Some(h))
}

// ---------------------------------------------------------------------------
// opposite and gluing

/// `μ^i_op(f_i ⊗ ... ⊗ f_1) = σ μ^i(f_1 ⊗ ... ⊗ f_i)` on the reversed graph,
/// `σ` the Koszul sign of the reversal.
pub fn opposite(a: &AStructure) -> Result<AStructure> {
    let g = a.graph();
    let op = Arc::new(g.opposite());
    let mut comps = Components::new();
    for (w, t) in a.mu().components() {
        let rev: Vec<usize> = w.inputs.iter().rev().map(|&b| op.basis_index(&g.elem(b).id)).collect::<Result<_>>()?;
        let degrees: Vec<i64> = w.inputs.iter().map(|&b| g.shifted(b)).collect();
        let perm: Vec<usize> = (0..degrees.len()).rev().collect();
        let sigma = permutation_sign(&degrees, &perm);
        let word = Word::new(&op, rev)?;
        let terms =
            t.iter().map(|(&b, c)| Ok((op.basis_index(&g.elem(b).id)?, c * &sigma))).collect::<Result<Terms>>()?;
        comps.insert(word, terms);
    }
    AStructure::new(Cochain::from_components(&op, 1, comps, a.mu().cutoff())?)
}

/// The glued category `A ∪_F B` for `F: A → B`. Objects of `A` come first.
/// Between an object `a` of `A` and `b` of `B` the only morphisms go from `a`
/// to `b` and are the elements of `B(F⁰a, b)`, with id `"<y>|<a>"`.
pub fn glue(f: &AFunctor, cutoff: usize) -> Result<AStructure> {
    let cutoff = cutoff.min(f.cutoff());
    if !functor_residual(f, cutoff)?.is_zero() {
        return Err(Error::Invalid("gluing functor does not satisfy the functor equation".into()));
    }
    let (ga, gb) = (f.source.graph(), f.target.graph());
    let names_a: Vec<&String> = ga.objects().iter().chain(ga.basis().iter().map(|b| &b.id)).collect();
    if names_a.iter().any(|n| gb.object_index(n).is_ok() || gb.basis_index(n).is_ok()) {
        return Err(Error::Invalid("glued categories must have disjoint names".into()));
    }
    let mut spec = GraphSpec::new(ga.objects().iter().chain(gb.objects()).cloned());
    for b in ga.basis() {
        spec = spec.arrow(&b.id, &ga.objects()[b.source], &ga.objects()[b.target], b.degree);
    }
    for b in gb.basis() {
        spec = spec.arrow(&b.id, &gb.objects()[b.source], &gb.objects()[b.target], b.degree);
    }
    for (a, aname) in ga.objects().iter().enumerate() {
        for (bo, bname) in gb.objects().iter().enumerate() {
            for &y in gb.hom(f.object_map[a], bo) {
                let e = gb.elem(y);
                spec = spec.arrow(&format!("{}|{aname}", e.id), aname, bname, e.degree);
            }
        }
    }
    if let (Some(ua), Some(ub)) = (ga.spec().units, gb.spec().units) {
        spec.units = Some(ua.into_iter().chain(ub).collect::<BTreeMap<_, _>>());
    }
    let d = Arc::new(Graph::new(&spec)?);
    let a_basis: Vec<usize> = ga.basis().iter().map(|b| d.basis_index(&b.id)).collect::<Result<_>>()?;
    let b_basis: Vec<usize> = gb.basis().iter().map(|b| d.basis_index(&b.id)).collect::<Result<_>>()?;
    let bimod = |y: usize, a: usize| d.basis_index(&format!("{}|{}", gb.elem(y).id, ga.objects()[a]));

    let mut comps = Components::new();
    let mut put = |inputs: Vec<usize>, out: usize, c: Scalar| -> Result<()> {
        let w = Word::new(&d, inputs)?;
        add_term(comps.entry(w).or_default(), out, c);
        Ok(())
    };
    for (w, t) in f.source.mu().components() {
        for (&b, c) in t {
            put(w.inputs.iter().map(|&x| a_basis[x]).collect(), a_basis[b], c.clone())?;
        }
    }
    for (w, t) in f.target.mu().components() {
        for (&b, c) in t {
            put(w.inputs.iter().map(|&x| b_basis[x]).collect(), b_basis[b], c.clone())?;
        }
    }
    // mixed words: μ_B(Id ⊗ ... ⊗ Id ⊗ F ⊗ ... ⊗ F)
    let by_out = {
        let mut m: HashMap<usize, Vec<(&Word, &Scalar)>> = HashMap::new();
        for (w, t) in &f.taylor.comps {
            for (b, c) in t {
                m.entry(*b).or_default().push((w, c));
            }
        }
        m
    };
    for (w, t) in f.target.mu().components() {
        let l = w.weight();
        for p in 0..l {
            let y = w.inputs[p];
            for a in 0..ga.n_objects() {
                if f.object_map[a] != gb.elem(y).source {
                    continue;
                }
                let mut tails = Vec::new();
                fill_tails(&w.inputs[p + 1..], &by_out, a, p + 1, cutoff, &mut Vec::new(), Scalar::one(), &mut tails);
                for (a_word, a0, coeff) in tails {
                    let mut inputs: Vec<usize> = w.inputs[..p].iter().map(|&x| b_basis[x]).collect();
                    inputs.push(bimod(y, a)?);
                    inputs.extend(a_word.iter().map(|&x| a_basis[x]));
                    for (&out, c) in t {
                        put(inputs.clone(), bimod(out, a0)?, &coeff * c)?;
                    }
                }
            }
        }
    }
    comps.retain(|_, t| !t.is_empty());
    AStructure::new(Cochain::from_components(&d, 1, comps, cutoff)?)
}

/// Fills `slots` (outputs in `B`) with Taylor coefficients of `F`, the first
/// part ending at object `at` of `A`. Collects (A-inputs, path start, coeff).
#[allow(clippy::too_many_arguments)]
fn fill_tails(
    slots: &[usize],
    by_out: &HashMap<usize, Vec<(&Word, &Scalar)>>,
    at: usize,
    weight: usize,
    cutoff: usize,
    acc: &mut Vec<usize>,
    coeff: Scalar,
    out: &mut Vec<(Vec<usize>, usize, Scalar)>,
) {
    let Some((&y, rest)) = slots.split_first() else {
        out.push((acc.clone(), at, coeff));
        return;
    };
    let Some(cands) = by_out.get(&y) else { return };
    for &(w, c) in cands {
        if w.target() != at || weight + w.weight() + rest.len() > cutoff {
            continue;
        }
        let n = acc.len();
        acc.extend_from_slice(&w.inputs);
        fill_tails(rest, by_out, w.source(), weight + w.weight(), cutoff, acc, &coeff * c, out);
        acc.truncate(n);
    }
}

/// Strict functor with identity-like first coefficient between a structure
/// and a copy with the same basis order (e.g. from [`AStructure::renamed`]),
/// scaled by `c`.
pub fn strict_copy_functor(
    source: &Arc<AStructure>,
    target: &Arc<AStructure>,
    c: &Scalar,
    cutoff: usize,
) -> Result<AFunctor> {
    let s = source.graph();
    if s.dim() != target.graph().dim() || s.n_objects() != target.graph().n_objects() {
        return Err(Error::FunctorMismatch("graphs have different shapes".into()));
    }
    let mut comps = Components::new();
    for b in 0..s.dim() {
        comps.insert(Word::new(s, vec![b])?, Terms::from([(b, c.clone())]));
    }
    AFunctor::new(source, target, (0..s.n_objects()).collect(), comps, cutoff)
}

/// The full subcategory on `objects` and its strict inclusion functor.
pub fn full_subcategory(
    parent: &Arc<AStructure>,
    objects: &[&str],
) -> Result<(Arc<AStructure>, AFunctor, RestrictionIndex)> {
    let (_, index) = include_full_subgraph(parent.graph(), objects)?;
    let sub = Arc::new(AStructure::new(restrict(parent.mu(), &index)?)?);
    let s = sub.graph();
    let mut comps = Components::new();
    for b in 0..s.dim() {
        comps.insert(Word::new(s, vec![b])?, Terms::from([(index.sub_to_parent_basis(b), Scalar::one())]));
    }
    let iota = AFunctor::new(&sub, parent, index.objects.clone(), comps, parent.mu().cutoff())?;
    Ok((sub, iota, index))
}

/// An isotopy of `base`: identity on objects, `F¹ = Id`, higher Taylor
/// coefficients `plus ∈ W₂C⁰`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isotopy {
    pub base: Arc<AStructure>,
    pub plus: Cochain,
}

impl Isotopy {
    /// Checks the isotopy equation within the cutoff of `plus`.
    pub fn new(base: &Arc<AStructure>, plus: Cochain) -> Result<Isotopy> {
        let iso = Isotopy { base: base.clone(), plus };
        let f = iso.functor()?;
        if !functor_residual(&f, f.cutoff())?.is_zero() {
            return Err(Error::FunctorMismatch("not an isotopy within the window".into()));
        }
        Ok(iso)
    }

    pub fn identity(base: &Arc<AStructure>, cutoff: usize) -> Isotopy {
        Isotopy { base: base.clone(), plus: Cochain::zero(base.graph(), 0, cutoff) }
    }

    pub fn functor(&self) -> Result<AFunctor> {
        AFunctor::from_group_like(&self.base, &self.plus)
    }
}
