//! Input documents: a graded graph, a structure table and optional named
//! cochains, functors, transformations and polynomial paths.

use std::collections::BTreeMap;
use std::fs;
use std::sync::Arc;

use ainfty::ainfinity::{convert_convention, validate_astructure, AFunctor, AStructure, Prenatural};
use ainfty::graded_core::{add_term, Terms};
use ainfty::hochschild::{Cochain, Components, UNBOUNDED};
use ainfty::kgraph::{validate_graph, Graph, GraphSpec, Word};
use ainfty::maurer_cartan::PolynomialPath;
use ainfty::Scalar;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// Sign convention of the structure table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    M,
    Mu,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::M => "m",
            Convention::Mu => "mu",
        }
    }
}

/// `[basis id, "p/q"]` pairs.
pub type TermList = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDoc {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub output: TermList,
}

/// One component of a multilinear map. Empty words name their object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    pub inputs: Vec<String>,
    pub output: TermList,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub terms: Vec<TermDoc>,
}

/// A functor out of the document's structure. Without `target` it is an
/// endofunctor; otherwise its outputs name basis ids of a second document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub object_map: BTreeMap<String, String>,
    pub terms: Vec<TermDoc>,
}

/// A transformation between two endofunctors, named in `functors` or
/// `"identity"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationDoc {
    pub from: String,
    pub to: String,
    pub degree: i64,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathTermDoc {
    pub power: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dt: bool,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDoc {
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_cutoff: Option<usize>,
    pub coefficients: Vec<PathTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<Convention>,
    pub objects: Vec<String>,
    pub basis: Vec<BasisDoc>,
    pub operations: Vec<OperationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cochains: BTreeMap<String, CochainDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub transformations: BTreeMap<String, TransformationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub paths: BTreeMap<String, PathDoc>,
}

/// A parsed document with every section resolved against its structure.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub source: String,
    pub doc: InputDocument,
    pub convention: Convention,
    pub structure: Arc<AStructure>,
    pub cochains: BTreeMap<String, Cochain>,
    pub functors: BTreeMap<String, AFunctor>,
    pub transformations: BTreeMap<String, Prenatural>,
    pub paths: BTreeMap<String, PolynomialPath>,
}

impl Loaded {
    pub fn graph(&self) -> &Arc<Graph> {
        self.structure.graph()
    }

    pub fn cochain(&self, name: &str) -> Result<&Cochain, CliError> {
        self.cochains.get(name).ok_or_else(|| CliError::input(&self.source, format!("no cochain named {name:?}")))
    }

    pub fn functor(&self, name: &str) -> Result<AFunctor, CliError> {
        if name == "identity" {
            return Ok(AFunctor::identity(&self.structure, UNBOUNDED));
        }
        self.functors
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::input(&self.source, format!("no endofunctor named {name:?}")))
    }

    pub fn path(&self, name: &str) -> Result<&PolynomialPath, CliError> {
        self.paths.get(name).ok_or_else(|| CliError::input(&self.source, format!("no path named {name:?}")))
    }
}

pub fn format_coeff(c: &Scalar) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn at(source: &str, path: impl AsRef<str>, e: impl std::fmt::Display) -> CliError {
    CliError::input(source, format!("{}: {e}", path.as_ref()))
}

pub fn read(path: &str, flag: Option<Convention>) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    parse(path, &text, flag)
}

/// Parses and resolves a document. `flag` overrides the document's own
/// convention, which in turn defaults to `m`.
pub fn parse(source: &str, text: &str, flag: Option<Convention>) -> Result<Loaded, CliError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| CliError::input(source, e))?;
    resolve(source, doc, flag)
}

pub fn resolve(source: &str, doc: InputDocument, flag: Option<Convention>) -> Result<Loaded, CliError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(at(source, "format_version", format!("unsupported version {}", doc.format_version)));
    }
    let convention = flag.or(doc.convention).unwrap_or(Convention::M);
    let mut spec = GraphSpec::new(doc.objects.iter().cloned());
    for b in &doc.basis {
        spec = if b.unit && b.src == b.tgt {
            spec.unit(&b.id, &b.src)
        } else {
            if b.unit {
                return Err(at(source, format!("basis[{}]", b.id), "a unit must be an endomorphism"));
            }
            spec.arrow(&b.id, &b.src, &b.tgt, b.degree)
        };
        if b.unit && b.degree != 0 {
            return Err(at(source, format!("basis[{}]", b.id), "a unit must have degree 0"));
        }
    }
    let diagnostics = validate_graph(&spec);
    if !diagnostics.is_empty() {
        let all: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        return Err(at(source, "basis", all.join("; ")));
    }
    let graph = Arc::new(Graph::new(&spec).map_err(|e| at(source, "basis", e))?);
    let structure = Arc::new(structure(source, &graph, &doc.operations, convention)?);

    let mut cochains = BTreeMap::new();
    for (name, c) in &doc.cochains {
        let here = format!("cochains.{name}");
        cochains.insert(name.clone(), cochain(source, &here, &graph, c.degree, &c.terms)?);
    }
    let mut functors = BTreeMap::new();
    for (name, f) in doc.functors.iter().filter(|(_, f)| f.target.is_none()) {
        functors.insert(name.clone(), functor(source, &format!("functors.{name}"), &structure, &structure, f)?);
    }
    let lookup = |name: &str, here: &str| -> Result<AFunctor, CliError> {
        if name == "identity" {
            return Ok(AFunctor::identity(&structure, UNBOUNDED));
        }
        functors.get(name).cloned().ok_or_else(|| at(source, here, format!("no endofunctor named {name:?}")))
    };
    let mut transformations = BTreeMap::new();
    for (name, t) in &doc.transformations {
        let here = format!("transformations.{name}");
        let (from, to) = (lookup(&t.from, &here)?, lookup(&t.to, &here)?);
        let comps = components(source, &here, &graph, &graph, &t.terms)?;
        let eta = Prenatural::new(&from, &to, t.degree, comps, UNBOUNDED).map_err(|e| at(source, &here, e))?;
        transformations.insert(name.clone(), eta);
    }
    let mut paths = BTreeMap::new();
    for (name, p) in &doc.paths {
        paths.insert(name.clone(), path(source, &format!("paths.{name}"), &graph, p)?);
    }
    Ok(Loaded { source: source.to_string(), doc, convention, structure, cochains, functors, transformations, paths })
}

fn basis_id(source: &str, here: &str, g: &Graph, id: &str) -> Result<usize, CliError> {
    g.basis_index(id).map_err(|e| at(source, here, e))
}

fn terms(source: &str, here: &str, g: &Graph, list: &TermList) -> Result<Terms, CliError> {
    let mut out = Terms::new();
    for (k, (id, c)) in list.iter().enumerate() {
        let here = format!("{here}.output[{k}]");
        let b = basis_id(source, &here, g, id)?;
        let c: Scalar = c.parse().map_err(|e| at(source, &here, e))?;
        add_term(&mut out, b, c);
    }
    Ok(out)
}

fn word(source: &str, here: &str, g: &Graph, object: &Option<String>, inputs: &[String]) -> Result<Word, CliError> {
    let ids = inputs
        .iter()
        .enumerate()
        .map(|(k, id)| basis_id(source, &format!("{here}.inputs[{k}]"), g, id))
        .collect::<Result<Vec<_>, _>>()?;
    match (ids.is_empty(), object) {
        (true, Some(o)) => Ok(Word::empty(g.object_index(o).map_err(|e| at(source, here, e))?)),
        (true, None) => Err(at(source, here, "an empty word needs \"object\"")),
        (false, Some(_)) => Err(at(source, here, "\"object\" is only used for empty words")),
        (false, None) => Word::new(g, ids).map_err(|e| at(source, here, e)),
    }
}

fn components(source: &str, here: &str, s: &Graph, t: &Graph, list: &[TermDoc]) -> Result<Components, CliError> {
    let mut comps = Components::new();
    for (k, term) in list.iter().enumerate() {
        let here = format!("{here}.terms[{k}]");
        let w = word(source, &here, s, &term.object, &term.inputs)?;
        let entry = comps.entry(w).or_default();
        for (b, c) in terms(source, &here, t, &term.output)? {
            add_term(entry, b, c);
        }
    }
    comps.retain(|_, t| !t.is_empty());
    Ok(comps)
}

fn cochain(
    source: &str,
    here: &str,
    g: &Arc<Graph>,
    degree: Option<i64>,
    list: &[TermDoc],
) -> Result<Cochain, CliError> {
    let comps = components(source, here, g, g, list)?;
    let degree = match (degree, comps.iter().next()) {
        (Some(d), _) => d,
        (None, Some((w, t))) => ainfty::hochschild::elementary_degree(g, w, *t.keys().next().expect("nonempty")),
        (None, None) => return Err(at(source, here, "a zero cochain needs \"degree\"")),
    };
    Cochain::from_components(g, degree, comps, UNBOUNDED).map_err(|e| at(source, here, e))
}

fn structure(
    source: &str,
    g: &Arc<Graph>,
    ops: &[OperationDoc],
    convention: Convention,
) -> Result<AStructure, CliError> {
    let mut table = Components::new();
    for (k, op) in ops.iter().enumerate() {
        let here = format!("operations[{k}]");
        if op.arity != op.inputs.len() {
            return Err(at(source, &here, format!("arity {} but {} inputs", op.arity, op.inputs.len())));
        }
        if op.arity == 0 {
            return Err(at(source, &here, "structure maps have arity at least 1"));
        }
        let w = word(source, &here, g, &None, &op.inputs)?;
        if w.inputs.iter().any(|&b| g.is_unit(b)) {
            return Err(at(source, &here, "unit laws are implied by the unit flags"));
        }
        let entry = table.entry(w).or_default();
        for (b, c) in terms(source, &here, g, &op.output)? {
            add_term(entry, b, c);
        }
    }
    table.retain(|_, t| !t.is_empty());
    if convention == Convention::Mu {
        table = convert_convention(g, &table);
    }
    if let Some(units) = g.units() {
        for (x, b) in g.basis().iter().enumerate() {
            add_term(table.entry(Word::new(g, vec![units[b.target], x])?).or_default(), x, Scalar::one());
            if !g.is_unit(x) {
                add_term(table.entry(Word::new(g, vec![x, units[b.source]])?).or_default(), x, Scalar::one());
            }
        }
    }
    AStructure::from_m_table(g, &table, UNBOUNDED).map_err(|e| at(source, "operations", e))
}

fn functor(
    source: &str,
    here: &str,
    a: &Arc<AStructure>,
    b: &Arc<AStructure>,
    f: &FunctorDoc,
) -> Result<AFunctor, CliError> {
    let (s, t) = (a.graph(), b.graph());
    let mut object_map = Vec::with_capacity(s.n_objects());
    for o in s.objects() {
        let image = f.object_map.get(o).ok_or_else(|| at(source, here, format!("object {o:?} is not mapped")))?;
        object_map.push(t.object_index(image).map_err(|e| at(source, here, e))?);
    }
    if f.object_map.len() != s.n_objects() {
        return Err(at(source, here, "object map names unknown objects"));
    }
    let comps = components(source, here, s, t, &f.terms)?;
    AFunctor::new(a, b, object_map, comps, UNBOUNDED).map_err(|e| at(source, here, e))
}

/// Resolves a functor of `a`'s document whose outputs live in `b`.
pub fn external_functor(a: &Loaded, name: &str, b: &Loaded) -> Result<AFunctor, CliError> {
    let f = a.doc.functors.get(name).ok_or_else(|| CliError::input(&a.source, format!("no functor named {name:?}")))?;
    functor(&a.source, &format!("functors.{name}"), &a.structure, &b.structure, f)
}

fn path(source: &str, here: &str, g: &Arc<Graph>, p: &PathDoc) -> Result<PolynomialPath, CliError> {
    let top = p.coefficients.iter().map(|c| c.power + 1).max().unwrap_or(1);
    let mut out = PolynomialPath::zero(g, p.degree, p.t_cutoff.unwrap_or(top));
    for (k, c) in p.coefficients.iter().enumerate() {
        let here = format!("{here}.coefficients[{k}]");
        let d = if c.dt { p.degree - 1 } else { p.degree };
        let x = cochain(source, &here, g, Some(d), &c.terms)?;
        let prev = out.coefficient(c.power, c.dt, UNBOUNDED);
        out.set(c.power, c.dt, &prev + &x).map_err(|e| at(source, &here, e))?;
    }
    Ok(out)
}

fn term_docs(s: &Graph, t: &Graph, comps: &Components) -> Vec<TermDoc> {
    comps
        .iter()
        .filter(|(_, terms)| !terms.is_empty())
        .map(|(w, terms)| TermDoc {
            object: (w.weight() == 0).then(|| s.objects()[w.source()].clone()),
            inputs: w.inputs.iter().map(|&b| s.elem(b).id.clone()).collect(),
            output: terms.iter().map(|(&b, c)| (t.elem(b).id.clone(), format_coeff(c))).collect(),
        })
        .collect()
}

pub fn cochain_doc(c: &Cochain) -> CochainDoc {
    CochainDoc { degree: Some(c.degree()), terms: term_docs(c.graph(), c.graph(), c.components()) }
}

pub fn components_doc(s: &Graph, t: &Graph, comps: &Components) -> Vec<TermDoc> {
    term_docs(s, t, comps)
}

pub fn path_doc(p: &PolynomialPath) -> PathDoc {
    let coefficients = p
        .coeffs()
        .iter()
        .map(|(&(power, dt), c)| PathTermDoc { power, dt, terms: term_docs(p.graph(), p.graph(), c.components()) })
        .collect();
    PathDoc { degree: p.degree(), t_cutoff: Some(p.t_cutoff()), coefficients }
}

/// The canonical document of a structure: the strict unit laws are left to
/// the unit flags and the table is written in `convention`.
pub fn emit(a: &AStructure, convention: Convention) -> Result<InputDocument, CliError> {
    let g = a.graph();
    if g.units().is_some() && !a.is_strictly_unital() {
        return Err(CliError::Usage("structures with units must be strictly unital to be emitted".into()));
    }
    if a.mu().cutoff() < UNBOUNDED {
        return Err(CliError::Usage(format!("structure is only known through weight {}", a.mu().cutoff())));
    }
    let table = match convention {
        Convention::M => convert_convention(g, a.mu().components()),
        Convention::Mu => a.mu().components().clone(),
    };
    let operations = table
        .iter()
        .filter(|(w, t)| !t.is_empty() && !w.inputs.iter().any(|&b| g.is_unit(b)))
        .map(|(w, t)| OperationDoc {
            arity: w.weight(),
            inputs: w.inputs.iter().map(|&b| g.elem(b).id.clone()).collect(),
            output: t.iter().map(|(&b, c)| (g.elem(b).id.clone(), format_coeff(c))).collect(),
        })
        .collect();
    let basis = g
        .basis()
        .iter()
        .enumerate()
        .map(|(i, b)| BasisDoc {
            id: b.id.clone(),
            src: g.objects()[b.source].clone(),
            tgt: g.objects()[b.target].clone(),
            degree: b.degree,
            unit: g.is_unit(i),
        })
        .collect();
    Ok(InputDocument {
        format_version: FORMAT_VERSION,
        convention: Some(convention),
        objects: g.objects().to_vec(),
        basis,
        operations,
        cochains: BTreeMap::new(),
        functors: BTreeMap::new(),
        transformations: BTreeMap::new(),
        paths: BTreeMap::new(),
    })
}

/// `μ ⋆ μ` of a finite structure, read through the weights it can reach.
pub fn structure_residual(a: &AStructure) -> Result<Cochain, CliError> {
    let top = a.mu().max_weight().unwrap_or(1);
    Ok(validate_astructure(a.mu(), (2 * top).min(a.mu().cutoff()))?)
}
