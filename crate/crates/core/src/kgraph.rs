//! Graded k-graphs (quivers with finite graded hom bases), composable words
//! and full-subgraph inclusions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// One basis vector of a hom space `G(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedBasisElement {
    pub id: String,
    /// Unshifted internal degree.
    pub degree: i64,
    pub source: String,
    pub target: String,
}

/// Unvalidated description of a graded graph, as read from a document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSpec {
    pub objects: Vec<String>,
    /// Hom lists keyed by (source, target).
    pub homs: BTreeMap<(String, String), Vec<GradedBasisElement>>,
    /// Object -> basis id of its strict identity.
    pub units: Option<BTreeMap<String, String>>,
}

impl GraphSpec {
    pub fn new<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        GraphSpec { objects: objects.into_iter().map(Into::into).collect(), homs: BTreeMap::new(), units: None }
    }

    /// Adds a basis element to the hom space it claims to live in.
    pub fn arrow(mut self, id: &str, source: &str, target: &str, degree: i64) -> Self {
        self.homs.entry((source.to_string(), target.to_string())).or_default().push(GradedBasisElement {
            id: id.to_string(),
            degree,
            source: source.to_string(),
            target: target.to_string(),
        });
        self
    }

    /// Adds a degree-0 identity `id` on `object` and records it as the unit.
    pub fn unit(self, id: &str, object: &str) -> Self {
        let mut g = self.arrow(id, object, object, 0);
        g.units.get_or_insert_with(BTreeMap::new).insert(object.to_string(), id.to_string());
        g
    }
}

/// Problems found by [`validate_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateObject(String),
    DuplicateBasisId(String),
    UnknownObject(String),
    HomKeyMismatch { id: String, key: (String, String) },
    UnitUnknown { object: String, id: String },
    UnitNotEndomorphism(String),
    UnitNonzeroDegree(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateObject(o) => write!(f, "object {o:?} listed twice"),
            Diagnostic::DuplicateBasisId(b) => write!(f, "basis id {b:?} used twice"),
            Diagnostic::UnknownObject(o) => write!(f, "unknown object {o:?}"),
            Diagnostic::HomKeyMismatch { id, key } => {
                write!(f, "basis element {id:?} filed under hom ({}, {})", key.0, key.1)
            }
            Diagnostic::UnitUnknown { object, id } => {
                write!(f, "unit {id:?} of {object:?} is not a basis element")
            }
            Diagnostic::UnitNotEndomorphism(id) => write!(f, "unit {id:?} is not an endomorphism"),
            Diagnostic::UnitNonzeroDegree(id) => write!(f, "unit {id:?} has nonzero degree"),
        }
    }
}

/// Returns one diagnostic per violated invariant; empty means valid.
pub fn validate_graph(g: &GraphSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for o in &g.objects {
        if seen.insert(o.as_str(), ()).is_some() {
            out.push(Diagnostic::DuplicateObject(o.clone()));
        }
    }
    let known = |o: &str| seen.contains_key(o);
    let mut ids: HashMap<&str, &GradedBasisElement> = HashMap::new();
    for ((s, t), elems) in &g.homs {
        for o in [s, t] {
            if !known(o) {
                out.push(Diagnostic::UnknownObject(o.clone()));
            }
        }
        for e in elems {
            if &e.source != s || &e.target != t {
                out.push(Diagnostic::HomKeyMismatch { id: e.id.clone(), key: (s.clone(), t.clone()) });
            }
            if ids.insert(e.id.as_str(), e).is_some() {
                out.push(Diagnostic::DuplicateBasisId(e.id.clone()));
            }
        }
    }
    if let Some(units) = &g.units {
        for (o, id) in units {
            if !known(o) {
                out.push(Diagnostic::UnknownObject(o.clone()));
            }
            match ids.get(id.as_str()) {
                None => out.push(Diagnostic::UnitUnknown { object: o.clone(), id: id.clone() }),
                Some(e) => {
                    if &e.source != o || &e.target != o {
                        out.push(Diagnostic::UnitNotEndomorphism(id.clone()));
                    }
                    if e.degree != 0 {
                        out.push(Diagnostic::UnitNonzeroDegree(id.clone()));
                    }
                }
            }
        }
    }
    out
}

/// A basis element with its endpoints resolved to object indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    pub id: String,
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

impl Basis {
    /// Degree after the suspension shift.
    pub fn shifted(&self) -> i64 {
        self.degree - 1
    }
}

/// Validated, indexed graph. Objects and basis elements carry a canonical
/// order (objects as listed, basis by hom block then listing order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    objects: Vec<String>,
    basis: Vec<Basis>,
    units: Option<Vec<usize>>,
    homs: BTreeMap<(usize, usize), Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    by_id: HashMap<String, usize>,
    by_obj: HashMap<String, usize>,
}

impl Graph {
    pub fn new(spec: &GraphSpec) -> Result<Graph> {
        if let Some(d) = validate_graph(spec).first() {
            return Err(Error::Invalid(d.to_string()));
        }
        let by_obj: HashMap<String, usize> = spec.objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let mut keyed: Vec<((usize, usize), &GradedBasisElement)> = Vec::new();
        for ((s, t), elems) in &spec.homs {
            for e in elems {
                keyed.push(((by_obj[s], by_obj[t]), e));
            }
        }
        // stable: hom blocks in object order, listing order inside a block
        keyed.sort_by_key(|(k, _)| *k);
        let mut basis = Vec::new();
        let mut homs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut out_of = vec![Vec::new(); spec.objects.len()];
        let mut by_id = HashMap::new();
        for ((s, t), e) in keyed {
            let i = basis.len();
            basis.push(Basis { id: e.id.clone(), degree: e.degree, source: s, target: t });
            homs.entry((s, t)).or_default().push(i);
            out_of[s].push(i);
            by_id.insert(e.id.clone(), i);
        }
        let units = match &spec.units {
            None => None,
            Some(u) => {
                let mut v = Vec::with_capacity(spec.objects.len());
                for o in &spec.objects {
                    match u.get(o) {
                        Some(id) => v.push(by_id[id]),
                        None => return Err(Error::Invalid(format!("object {o:?} has no unit"))),
                    }
                }
                Some(v)
            }
        };
        Ok(Graph { objects: spec.objects.clone(), basis, units, homs, out_of, by_id, by_obj })
    }

    /// Back to the document form.
    pub fn spec(&self) -> GraphSpec {
        let mut g = GraphSpec::new(self.objects.iter().cloned());
        for b in &self.basis {
            g = g.arrow(&b.id, &self.objects[b.source], &self.objects[b.target], b.degree);
        }
        if let Some(u) = &self.units {
            g.units =
                Some(u.iter().enumerate().map(|(o, &b)| (self.objects[o].clone(), self.basis[b].id.clone())).collect());
        }
        g
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn basis(&self) -> &[Basis] {
        &self.basis
    }

    pub fn elem(&self, i: usize) -> &Basis {
        &self.basis[i]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn shifted(&self, i: usize) -> i64 {
        self.basis[i].degree - 1
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.by_obj.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn basis_index(&self, id: &str) -> Result<usize> {
        self.by_id.get(id).copied().ok_or_else(|| Error::UnknownBasis(id.to_string()))
    }

    pub fn hom(&self, source: usize, target: usize) -> &[usize] {
        self.homs.get(&(source, target)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn homs(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.homs
    }

    pub fn units(&self) -> Option<&[usize]> {
        self.units.as_deref()
    }

    pub fn unit(&self, object: usize) -> Option<usize> {
        self.units.as_ref().map(|u| u[object])
    }

    pub fn is_unit(&self, b: usize) -> bool {
        self.units.as_ref().is_some_and(|u| u.contains(&b))
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let min = self.basis.iter().map(|b| b.degree).min()?;
        let max = self.basis.iter().map(|b| b.degree).max()?;
        Some((min, max))
    }

    /// All composable words of the given weight, in canonical order.
    pub fn words(&self, weight: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if weight == 0 {
            for o in 0..self.objects.len() {
                out.push(Word::empty(o));
            }
            return out;
        }
        // walk paths forward, store inputs in composition order
        let mut path = Vec::with_capacity(weight);
        for start in 0..self.objects.len() {
            self.extend_paths(start, weight, &mut path, &mut out);
        }
        out.sort();
        out
    }

    fn extend_paths(&self, at: usize, left: usize, path: &mut Vec<usize>, out: &mut Vec<Word>) {
        if left == 0 {
            let inputs: Vec<usize> = path.iter().rev().copied().collect();
            out.push(Word::from_inputs_unchecked(self, inputs));
            return;
        }
        for &b in &self.out_of[at] {
            path.push(b);
            self.extend_paths(self.basis[b].target, left - 1, path, out);
            path.pop();
        }
    }

    /// The opposite graph: every arrow reversed, ids and degrees kept.
    pub fn opposite(&self) -> Graph {
        let mut g = GraphSpec::new(self.objects.iter().cloned());
        for b in &self.basis {
            g = g.arrow(&b.id, &self.objects[b.target], &self.objects[b.source], b.degree);
        }
        g.units = self.spec().units;
        Graph::new(&g).expect("opposite of a valid graph is valid")
    }
}

/// A composable input word. `inputs` is in composition order: the first
/// entry is the last arrow of the path. `objects` is the path
/// `U0 -> U1 -> ... -> Uw`, so `inputs[k]` lies in `G(U_{w-k-1}, U_{w-k})`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    pub objects: Vec<usize>,
    pub inputs: Vec<usize>,
}

impl Word {
    pub fn empty(object: usize) -> Word {
        Word { objects: vec![object], inputs: Vec::new() }
    }

    pub fn weight(&self) -> usize {
        self.inputs.len()
    }

    /// Path start `U0`.
    pub fn source(&self) -> usize {
        self.objects[0]
    }

    /// Path end `Uw`.
    pub fn target(&self) -> usize {
        *self.objects.last().expect("word has at least one object")
    }

    /// Builds a word, checking composability.
    pub fn new(g: &Graph, inputs: Vec<usize>) -> Result<Word> {
        if inputs.is_empty() {
            return Err(Error::NotComposable("empty word needs an explicit object".into()));
        }
        for pair in inputs.windows(2) {
            let (later, earlier) = (g.elem(pair[0]), g.elem(pair[1]));
            if later.source != earlier.target {
                return Err(Error::NotComposable(format!("{} does not follow {}", later.id, earlier.id)));
            }
        }
        Ok(Word::from_inputs_unchecked(g, inputs))
    }

    fn from_inputs_unchecked(g: &Graph, inputs: Vec<usize>) -> Word {
        let mut objects = Vec::with_capacity(inputs.len() + 1);
        objects.push(g.elem(*inputs.last().unwrap()).source);
        for &b in inputs.iter().rev() {
            objects.push(g.elem(b).target);
        }
        Word { objects, inputs }
    }

    /// Joins words given in composition order (leftmost = latest).
    pub fn concat(parts: &[&Word]) -> Word {
        let mut inputs = Vec::new();
        for p in parts {
            inputs.extend_from_slice(&p.inputs);
        }
        let mut objects = vec![parts.last().map(|w| w.source()).unwrap_or(0)];
        for p in parts.iter().rev() {
            objects.extend_from_slice(&p.objects[1..]);
        }
        Word { objects, inputs }
    }

    pub fn shifted_degree_sum(&self, g: &Graph) -> i64 {
        self.inputs.iter().map(|&b| g.shifted(b)).sum()
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.inputs.is_empty() {
            return format!("[{}]", g.objects()[self.objects[0]]);
        }
        let ids: Vec<&str> = self.inputs.iter().map(|&b| g.elem(b).id.as_str()).collect();
        ids.join(",")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.inputs
            .len()
            .cmp(&other.inputs.len())
            .then_with(|| self.inputs.cmp(&other.inputs))
            .then_with(|| self.objects.cmp(&other.objects))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which objects and basis elements of a parent graph a full subgraph keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionIndex {
    pub parent: Graph,
    pub sub: Graph,
    /// sub object -> parent object
    pub objects: Vec<usize>,
    /// parent basis -> sub basis, when kept
    pub basis: Vec<Option<usize>>,
    /// parent object -> sub object, when kept
    pub object_of_parent: Vec<Option<usize>>,
}

impl RestrictionIndex {
    pub fn sub_to_parent_basis(&self, b: usize) -> usize {
        self.parent.basis_index(&self.sub.elem(b).id).expect("sub basis comes from parent")
    }
}

/// The full subgraph on `objects` (kept in parent order) and the index that
/// `hochschild::restrict` consumes.
pub fn include_full_subgraph(g: &Graph, objects: &[&str]) -> Result<(Graph, RestrictionIndex)> {
    let mut keep = vec![false; g.n_objects()];
    for o in objects {
        keep[g.object_index(o)?] = true;
    }
    let kept: Vec<usize> = (0..g.n_objects()).filter(|&o| keep[o]).collect();
    let mut spec = GraphSpec::new(kept.iter().map(|&o| g.objects()[o].clone()));
    for b in g.basis() {
        if keep[b.source] && keep[b.target] {
            spec = spec.arrow(&b.id, &g.objects()[b.source], &g.objects()[b.target], b.degree);
        }
    }
    if let Some(u) = g.units() {
        spec.units = Some(kept.iter().map(|&o| (g.objects()[o].clone(), g.elem(u[o]).id.clone())).collect());
    }
    let sub = Graph::new(&spec)?;
    let basis = g.basis().iter().map(|b| sub.basis_index(&b.id).ok()).collect();
    let mut object_of_parent = vec![None; g.n_objects()];
    for (i, &o) in kept.iter().enumerate() {
        object_of_parent[o] = Some(i);
    }
    let index = RestrictionIndex { parent: g.clone(), sub: sub.clone(), objects: kept, basis, object_of_parent };
    Ok((sub, index))
}

/// Block decomposition of the category algebra `k[G] = ⊕ G(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryAlgebraView {
    pub blocks: BTreeMap<(usize, usize), Vec<usize>>,
    /// basis element -> its (source, target) block
    pub block_of: Vec<(usize, usize)>,
}

impl CategoryAlgebraView {
    pub fn new(g: &Graph) -> Self {
        CategoryAlgebraView {
            blocks: g.homs().clone(),
            block_of: g.basis().iter().map(|b| (b.source, b.target)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }
}
