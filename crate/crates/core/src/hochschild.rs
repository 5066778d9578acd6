//! The Hochschild space `C(G)` as a brace algebra: sparse cochains and the
//! insertion engine behind braces, compositions and functor formulas.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graded_core::{add_term, koszul_odd, permutation_sign, Terms};
use crate::kgraph::{Graph, RestrictionIndex, Word};
use crate::scalar::Scalar;

/// Weight window `[min_weight, cutoff]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub min_weight: usize,
    pub cutoff: usize,
}

impl Window {
    pub fn new(min_weight: usize, cutoff: usize) -> Result<Window> {
        if min_weight > cutoff {
            return Err(Error::Weight(format!("empty window [{min_weight}, {cutoff}]")));
        }
        Ok(Window { min_weight, cutoff })
    }

    pub fn upto(cutoff: usize) -> Window {
        Window { min_weight: 0, cutoff }
    }

    pub fn contains(&self, w: usize) -> bool {
        self.min_weight <= w && w <= self.cutoff
    }
}

pub type Components = BTreeMap<Word, Terms>;

/// Cutoff of a cochain known in every weight, such as a finite structure.
pub const UNBOUNDED: usize = usize::MAX / 4;

/// A homogeneous element of `C(G)`, stored sparsely up to a weight cutoff.
#[derive(Clone)]
pub struct Cochain {
    graph: Arc<Graph>,
    degree: i64,
    comps: Components,
    cutoff: usize,
    exact: bool,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.comps == other.comps && (self.degree == other.degree || self.comps.is_empty())
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg {}, <= w{}) {{", self.degree, self.cutoff)?;
        for (w, t) in &self.comps {
            write!(f, " {} ->", w.display(&self.graph))?;
            for (b, c) in t {
                write!(f, " {}*{}", c, self.graph.elem(*b).id)?;
            }
            write!(f, ";")?;
        }
        write!(f, " }}")
    }
}

/// Internal degree of the map `word -> b`.
pub fn map_degree(g: &Graph, word: &Word, b: usize) -> i64 {
    g.elem(b).degree - word.inputs.iter().map(|&x| g.elem(x).degree).sum::<i64>()
}

/// Degree in `C(G)` of the elementary function `word -> b`.
pub fn elementary_degree(g: &Graph, word: &Word, b: usize) -> i64 {
    word.weight() as i64 - 1 + map_degree(g, word, b)
}

/// All elementary functions `word -> b` of the given degree and weight, in
/// canonical order. These form the coordinate basis of `C^degree` at that
/// weight.
pub fn elementary_basis(g: &Graph, degree: i64, weight: usize) -> Vec<(Word, usize)> {
    let mut out = Vec::new();
    for w in g.words(weight) {
        for &b in g.hom(w.source(), w.target()) {
            if elementary_degree(g, &w, b) == degree {
                out.push((w.clone(), b));
            }
        }
    }
    out
}

impl Cochain {
    pub fn zero(graph: &Arc<Graph>, degree: i64, cutoff: usize) -> Cochain {
        Cochain { graph: graph.clone(), degree, comps: Components::new(), cutoff, exact: true }
    }

    /// The left unit `1`: identity on every basis element, weight 1.
    pub fn identity(graph: &Arc<Graph>, cutoff: usize) -> Cochain {
        let mut comps = Components::new();
        if cutoff >= 1 {
            for b in 0..graph.dim() {
                let w = Word::new(graph, vec![b]).expect("single letters compose");
                comps.insert(w, Terms::from([(b, Scalar::one())]));
            }
        }
        Cochain { graph: graph.clone(), degree: 0, comps, cutoff, exact: true }
    }

    /// The weight-0 cochain picking the identity of every object.
    pub fn units(graph: &Arc<Graph>, cutoff: usize) -> Result<Cochain> {
        let units = graph.units().ok_or(Error::MissingUnits)?;
        let mut comps = Components::new();
        for (o, &u) in units.iter().enumerate() {
            comps.insert(Word::empty(o), Terms::from([(u, Scalar::one())]));
        }
        Ok(Cochain { graph: graph.clone(), degree: -1, comps, cutoff, exact: true })
    }

    /// Builds a cochain from components, checking composability, hom blocks
    /// and homogeneity. Components above the cutoff are dropped.
    pub fn from_components(graph: &Arc<Graph>, degree: i64, comps: Components, cutoff: usize) -> Result<Cochain> {
        let mut clean = Components::new();
        for (w, t) in comps {
            if w.weight() > 0 {
                let rebuilt = Word::new(graph, w.inputs.clone())?;
                if rebuilt != w {
                    return Err(Error::NotComposable(format!("object sequence of {}", w.display(graph))));
                }
            } else if w.objects.len() != 1 || w.objects[0] >= graph.n_objects() {
                return Err(Error::NotComposable("weight-0 word needs one object".into()));
            }
            for &b in t.keys() {
                let e = graph.elem(b);
                if (e.source, e.target) != (w.source(), w.target()) {
                    return Err(Error::NotComposable(format!("output {} outside hom of {}", e.id, w.display(graph))));
                }
                let d = elementary_degree(graph, &w, b);
                if d != degree {
                    return Err(Error::Degree(format!(
                        "component {} -> {} has degree {d}, expected {degree}",
                        w.display(graph),
                        e.id
                    )));
                }
            }
            if w.weight() <= cutoff {
                let t: Terms = t.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !t.is_empty() {
                    clean.insert(w, t);
                }
            }
        }
        Ok(Cochain { graph: graph.clone(), degree, comps: clean, cutoff, exact: true })
    }

    /// The elementary cochain `word -> c * b`.
    pub fn elementary(graph: &Arc<Graph>, word: Word, b: usize, c: Scalar, cutoff: usize) -> Result<Cochain> {
        let degree = elementary_degree(graph, &word, b);
        let comps = Components::from([(word, Terms::from([(b, c)]))]);
        Cochain::from_components(graph, degree, comps, cutoff)
    }

    /// Convenience constructor from basis ids; `inputs` in composition order.
    pub fn from_ids(graph: &Arc<Graph>, inputs: &[&str], output: &str, c: Scalar, cutoff: usize) -> Result<Cochain> {
        let ins = inputs.iter().map(|i| graph.basis_index(i)).collect::<Result<Vec<_>>>()?;
        let out = graph.basis_index(output)?;
        let word = if ins.is_empty() { Word::empty(graph.elem(out).source) } else { Word::new(graph, ins)? };
        Cochain::elementary(graph, word, out, c, cutoff)
    }

    /// Trusted constructor for engine output.
    pub(crate) fn raw(graph: &Arc<Graph>, degree: i64, comps: Components, cutoff: usize, exact: bool) -> Cochain {
        Cochain { graph: graph.clone(), degree, comps, cutoff, exact }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// False when some contribution above the cutoff was discarded.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn components(&self) -> &Components {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.comps.keys().map(Word::weight).min()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.comps.keys().map(Word::weight).max()
    }

    pub fn coefficient(&self, word: &Word, b: usize) -> Scalar {
        self.comps.get(word).and_then(|t| t.get(&b)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn with_degree(mut self, degree: i64) -> Result<Cochain> {
        if !self.comps.is_empty() && degree != self.degree {
            return Err(Error::Degree("cannot regrade a nonzero cochain".into()));
        }
        self.degree = degree;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Cochain {
        if cutoff < self.cutoff {
            self.comps.retain(|w, _| w.weight() <= cutoff);
        }
        self.cutoff = cutoff;
        self
    }

    /// Components of weight in `[lo, hi]`.
    pub fn weights(&self, lo: usize, hi: usize) -> Cochain {
        let comps = self
            .comps
            .iter()
            .filter(|(w, _)| lo <= w.weight() && w.weight() <= hi)
            .map(|(w, t)| (w.clone(), t.clone()))
            .collect();
        Cochain { comps, ..self.shell() }
    }

    fn shell(&self) -> Cochain {
        Cochain {
            graph: self.graph.clone(),
            degree: self.degree,
            comps: Components::new(),
            cutoff: self.cutoff,
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        if c.is_zero() {
            return self.shell();
        }
        let comps = self.comps.iter().map(|(w, t)| (w.clone(), t.iter().map(|(&b, x)| (b, x * c)).collect())).collect();
        Cochain { comps, ..self.shell() }
    }

    fn combine(&self, other: &Cochain, sign: Scalar) -> Cochain {
        assert!(self.graph == other.graph, "cochains over different graphs");
        let degree = if self.comps.is_empty() { other.degree } else { self.degree };
        assert!(
            other.comps.is_empty() || self.comps.is_empty() || self.degree == other.degree,
            "adding cochains of degrees {} and {}",
            self.degree,
            other.degree
        );
        let cutoff = self.cutoff.min(other.cutoff);
        let mut comps = self.comps.clone();
        for (w, t) in &other.comps {
            let entry = comps.entry(w.clone()).or_default();
            for (&b, c) in t {
                add_term(entry, b, &sign * c);
            }
            if entry.is_empty() {
                comps.remove(w);
            }
        }
        comps.retain(|w, _| w.weight() <= cutoff);
        Cochain { graph: self.graph.clone(), degree, comps, cutoff, exact: self.exact && other.exact }
    }

    /// Fallible sum: rejects different graphs or degrees.
    pub fn try_add(&self, other: &Cochain) -> Result<Cochain> {
        if self.graph != other.graph {
            return Err(Error::GraphMismatch);
        }
        if !self.comps.is_empty() && !other.comps.is_empty() && self.degree != other.degree {
            return Err(Error::Degree(format!("{} vs {}", self.degree, other.degree)));
        }
        Ok(self.combine(other, Scalar::one()))
    }

    /// Evaluates on a tensor of linear combinations in composition order.
    pub fn evaluate(
        &self,
        args: &[Vec<crate::graded_core::SignedTerm>],
    ) -> Result<Vec<crate::graded_core::SignedTerm>> {
        crate::graded_core::evaluate_graded_map(&self.graph, |w| self.comps.get(w).cloned().unwrap_or_default(), args)
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        self.combine(rhs, Scalar::one())
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        self.combine(rhs, -Scalar::one())
    }
}

impl Add for Cochain {
    type Output = Cochain;
    fn add(self, rhs: Cochain) -> Cochain {
        self.combine(&rhs, Scalar::one())
    }
}

impl Sub for Cochain {
    type Output = Cochain;
    fn sub(self, rhs: Cochain) -> Cochain {
        self.combine(&rhs, -Scalar::one())
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-Scalar::one())
    }
}

// ---------------------------------------------------------------------------
// insertion engine

/// What goes into one input slot of an outer map.
pub(crate) enum Filler<'a> {
    /// Pass the input through unchanged (source and target graph coincide).
    Id,
    /// Replace the input by the output of an inner map.
    Map(Inner<'a>),
}

/// An inner map indexed by output basis element.
pub(crate) struct Inner<'a> {
    degree: i64,
    min_weight: usize,
    by_output: HashMap<usize, Vec<(&'a Word, &'a Scalar)>>,
}

impl<'a> Inner<'a> {
    pub(crate) fn new(comps: &'a Components, degree: i64) -> Inner<'a> {
        let mut by_output: HashMap<usize, Vec<(&Word, &Scalar)>> = HashMap::new();
        for (w, t) in comps {
            for (b, c) in t {
                by_output.entry(*b).or_default().push((w, c));
            }
        }
        let min_weight = comps.keys().map(Word::weight).min().unwrap_or(usize::MAX);
        Inner { degree, min_weight, by_output }
    }

    fn is_empty(&self) -> bool {
        self.by_output.is_empty()
    }
}

/// Sums `outer(F_1 ⊗ ... ⊗ F_l)` over the slot assignments produced by
/// `pattern(l)`, where each assignment lists a filler index per slot.
/// Koszul signs: a filler of degree `d` passing raw inputs of total shifted
/// degree `s` to its left contributes `(-1)^(d s)`.
///
/// `outer` lives over `outer_graph`, fillers map words of `inner_graph` into
/// `outer_graph`. `Id` is only meaningful when the two graphs coincide.
/// Returns the components and whether anything was cut at `cutoff`.
pub(crate) fn insert<P>(
    outer: &Components,
    inner_graph: &Graph,
    fillers: &[Filler<'_>],
    pattern: P,
    cutoff: usize,
) -> (Components, bool)
where
    P: Fn(usize) -> Vec<Vec<usize>>,
{
    let mut acc: HashMap<Word, Terms> = HashMap::new();
    let mut truncated = false;
    let mut patterns: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    for (ow, ot) in outer {
        let l = ow.weight();
        let pats = patterns.entry(l).or_insert_with(|| pattern(l));
        if l == 0 {
            if pats.iter().any(|p| p.is_empty()) {
                let e = acc.entry(ow.clone()).or_default();
                for (b, c) in ot {
                    add_term(e, *b, c.clone());
                }
            }
            continue;
        }
        'pat: for pat in pats.iter() {
            // cheap lower bound on the result weight
            let mut lower = 0usize;
            for &f in pat {
                match &fillers[f] {
                    Filler::Id => lower += 1,
                    Filler::Map(m) => {
                        if m.is_empty() {
                            continue 'pat;
                        }
                        lower += m.min_weight;
                    }
                }
            }
            if lower > cutoff {
                truncated = true;
                continue;
            }
            let mut st = Walk { ow, pat, fillers, inner_graph, cutoff, parts: Vec::with_capacity(l), truncated: false };
            let mut hits = Vec::new();
            st.go(0, 0, 0, false, Scalar::one(), None, &mut hits);
            truncated |= st.truncated;
            for (word, coeff) in hits {
                let e = acc.entry(word).or_default();
                for (b, c) in ot {
                    add_term(e, *b, &coeff * c);
                }
            }
        }
    }
    let comps = acc.into_iter().filter(|(_, t)| !t.is_empty()).collect();
    (comps, truncated)
}

struct Walk<'a, 'b> {
    ow: &'a Word,
    pat: &'a [usize],
    fillers: &'a [Filler<'b>],
    inner_graph: &'a Graph,
    cutoff: usize,
    parts: Vec<Cow<'b, Word>>,
    truncated: bool,
}

impl<'a, 'b> Walk<'a, 'b> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        &mut self,
        slot: usize,
        weight: usize,
        left_shift: i64,
        odd: bool,
        coeff: Scalar,
        need_target: Option<usize>,
        hits: &mut Vec<(Word, Scalar)>,
    ) {
        if slot == self.pat.len() {
            let words: Vec<&Word> = self.parts.iter().map(|p| p.as_ref()).collect();
            let c = if odd { -coeff } else { coeff };
            hits.push((Word::concat(&words), c));
            return;
        }
        let y = self.ow.inputs[slot];
        match &self.fillers[self.pat[slot]] {
            Filler::Id => {
                if weight + 1 > self.cutoff {
                    self.truncated = true;
                    return;
                }
                let e = self.inner_graph.elem(y);
                if need_target.is_some_and(|t| t != e.target) {
                    return;
                }
                let w = Word::new(self.inner_graph, vec![y]).expect("letter");
                self.parts.push(Cow::Owned(w));
                let shift = left_shift + self.inner_graph.shifted(y);
                self.go(slot + 1, weight + 1, shift, odd, coeff, Some(e.source), hits);
                self.parts.pop();
            }
            Filler::Map(m) => {
                let Some(cands) = m.by_output.get(&y) else { return };
                let deg = m.degree;
                for &(w, c) in cands {
                    if weight + w.weight() > self.cutoff {
                        self.truncated = true;
                        continue;
                    }
                    if need_target.is_some_and(|t| t != w.target()) {
                        continue;
                    }
                    let flip = koszul_odd(deg, left_shift);
                    let shift = left_shift + w.shifted_degree_sum(self.inner_graph);
                    self.parts.push(Cow::Borrowed(w));
                    self.go(slot + 1, weight + w.weight(), shift, odd ^ flip, &coeff * c, Some(w.source()), hits);
                    self.parts.pop();
                }
            }
        }
    }
}

/// Increasing position tuples of length `r` in `0..l`.
pub(crate) fn brace_patterns(l: usize, r: usize) -> Vec<Vec<usize>> {
    (0..l)
        .combinations(r)
        .map(|pos| {
            let mut pat = vec![0; l];
            for (j, p) in pos.into_iter().enumerate() {
                pat[p] = j + 1;
            }
            pat
        })
        .collect()
}

fn same_graph(f: &Cochain, gs: &[&Cochain]) -> Result<()> {
    if gs.iter().any(|g| g.graph != f.graph) {
        return Err(Error::GraphMismatch);
    }
    Ok(())
}

/// `f{g_1, ..., g_r}`: all ordered insertions of the `g_j` into inputs of
/// `f`, identities elsewhere, with Koszul signs. Truncated at `cutoff`.
pub fn brace(f: &Cochain, gs: &[&Cochain], cutoff: usize) -> Result<Cochain> {
    if gs.is_empty() {
        return Err(Error::EmptyBrace);
    }
    same_graph(f, gs)?;
    let degree = f.degree + gs.iter().map(|g| g.degree).sum::<i64>();
    let cutoff = gs.iter().map(|g| g.cutoff).fold(cutoff.min(f.cutoff), usize::min);
    let mut fillers = vec![Filler::Id];
    for g in gs {
        fillers.push(Filler::Map(Inner::new(&g.comps, g.degree)));
    }
    let r = gs.len();
    let (comps, cut) = insert(&f.comps, &f.graph, &fillers, |l| brace_patterns(l, r), cutoff);
    let exact = !cut && f.exact && gs.iter().all(|g| g.exact);
    Ok(Cochain::raw(&f.graph, degree, comps, cutoff, exact))
}

/// Composition product `f ⋆ g = f{g}`.
pub fn star(f: &Cochain, g: &Cochain, cutoff: usize) -> Result<Cochain> {
    brace(f, &[g], cutoff)
}

/// `[f, g] = f ⋆ g - (-1)^{|f||g|} g ⋆ f`.
pub fn gerstenhaber_bracket(f: &Cochain, g: &Cochain, cutoff: usize) -> Result<Cochain> {
    let fg = star(f, g, cutoff)?;
    let gf = star(g, f, cutoff)?;
    let s = Scalar::sign(koszul_odd(f.degree, g.degree));
    Ok(&fg - &gf.scale(&s))
}

/// `f⟨g_1, ..., g_r⟩`: braces summed over all orderings with Koszul signs.
pub fn symmetric_brace(f: &Cochain, gs: &[&Cochain], cutoff: usize) -> Result<Cochain> {
    if gs.is_empty() {
        return Err(Error::EmptyBrace);
    }
    same_graph(f, gs)?;
    let degrees: Vec<i64> = gs.iter().map(|g| g.degree).collect();
    let mut total: Option<Cochain> = None;
    for perm in (0..gs.len()).permutations(gs.len()) {
        let sign = permutation_sign(&degrees, &perm);
        let args: Vec<&Cochain> = perm.iter().map(|&i| gs[i]).collect();
        let term = brace(f, &args, cutoff)?.scale(&sign);
        total = Some(match total {
            None => term,
            Some(t) => &t + &term,
        });
    }
    Ok(total.expect("at least one permutation"))
}

/// Cup product `μ{f, g}`.
pub fn cup(mu: &Cochain, f: &Cochain, g: &Cochain, cutoff: usize) -> Result<Cochain> {
    brace(mu, &[f, g], cutoff)
}

/// Keeps the components whose words lie in the subgraph, re-indexed.
pub fn restrict(f: &Cochain, index: &RestrictionIndex) -> Result<Cochain> {
    if **f.graph() != index.parent {
        return Err(Error::GraphMismatch);
    }
    let sub = Arc::new(index.sub.clone());
    let mut comps = Components::new();
    'comp: for (w, t) in &f.comps {
        let mut objects = Vec::with_capacity(w.objects.len());
        for &o in &w.objects {
            match index.object_of_parent[o] {
                Some(s) => objects.push(s),
                None => continue 'comp,
            }
        }
        let inputs = w.inputs.iter().map(|&b| index.basis[b].expect("full subgraph")).collect();
        let terms = t.iter().map(|(&b, c)| (index.basis[b].expect("full subgraph"), c.clone())).collect();
        comps.insert(Word { objects, inputs }, terms);
    }
    Ok(Cochain::raw(&sub, f.degree, comps, f.cutoff, f.exact))
}

/// True iff no component takes a unit among its inputs.
pub fn normalized_check(f: &Cochain) -> Result<bool> {
    let g = f.graph();
    if g.units().is_none() {
        return Err(Error::MissingUnits);
    }
    Ok(f.comps.keys().all(|w| !w.inputs.iter().any(|&b| g.is_unit(b))))
}
