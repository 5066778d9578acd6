//! Hochschild cohomology by exact linear algebra on the weight-truncated
//! complex, the graded center of the homotopy category and the
//! characteristic morphism.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::ainfinity::{convention_sign, AStructure, Isotopy};
use crate::error::{Error, Result};
use crate::graded_core::{add_term, Terms};
use crate::hochschild::{elementary_basis, gerstenhaber_bracket, restrict, Cochain, Components, Window};
use crate::kgraph::{Graph, RestrictionIndex, Word};
use crate::linalg::{self, Echelon, SparseVec};
use crate::prelie::exp;
use crate::scalar::Scalar;

/// The Hochschild differential `d(f) = [μ, f] = μ ⋆ f − (−1)^{|f|} f ⋆ μ`.
pub fn differential(f: &Cochain, a: &AStructure, cutoff: usize) -> Result<Cochain> {
    if f.graph() != a.graph() {
        return Err(Error::GraphMismatch);
    }
    gerstenhaber_bracket(a.mu(), f, cutoff)
}

/// Coordinates on a list of elementary functions.
#[derive(Clone, Debug, Default)]
pub struct Coordinates {
    keys: Vec<(Word, usize)>,
    index: HashMap<(Word, usize), usize>,
}

impl Coordinates {
    pub fn new(keys: Vec<(Word, usize)>) -> Self {
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Coordinates { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[(Word, usize)] {
        &self.keys
    }

    /// The coordinate vector of `c`; fails if `c` has a component outside
    /// the listed elementary functions.
    pub fn vector(&self, c: &Cochain) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (w, t) in c.components() {
            for (&b, x) in t {
                let i = self
                    .index
                    .get(&(w.clone(), b))
                    .ok_or_else(|| Error::Invalid(format!("component {} outside the basis", w.display(c.graph()))))?;
                v.insert(*i, x.clone());
            }
        }
        Ok(v)
    }

    pub fn cochain(&self, graph: &Arc<Graph>, degree: i64, v: &SparseVec, cutoff: usize) -> Cochain {
        let mut comps = Components::new();
        for (&i, x) in v {
            let (w, b) = &self.keys[i];
            add_term(comps.entry(w.clone()).or_default(), *b, x.clone());
        }
        comps.retain(|_, t| !t.is_empty());
        Cochain::from_components(graph, degree, comps, cutoff).expect("coordinates describe valid cochains")
    }
}

/// Elementary functions of degree `degree` with weight in `lo..=hi`, ordered
/// by weight.
pub fn basis_range(g: &Graph, degree: i64, lo: usize, hi: usize) -> Coordinates {
    Coordinates::new((lo..=hi).flat_map(|w| elementary_basis(g, degree, w)).collect())
}

/// Largest weight carrying elementary functions of degree `n`, when the
/// grading bounds it.
pub fn max_weight(g: &Graph, n: i64) -> Option<usize> {
    let (dmin, dmax) = g.degree_range()?;
    // n = w − 1 + deg(b) − Σ deg(inputs), with Σ deg ∈ [w·dmin, w·dmax]
    if dmax <= 0 {
        let top = n + 1 - dmin;
        Some(if top < 0 { 0 } else { (top / (1 - dmax)) as usize })
    } else if dmin >= 2 {
        let top = dmax - n - 1;
        Some(if top < 0 { 0 } else { (top / (dmin - 1)) as usize })
    } else {
        None
    }
}

/// True when no elementary function of degree `n` has weight above `cutoff`.
pub fn vanishes_beyond(g: &Graph, n: i64, cutoff: usize) -> bool {
    max_weight(g, n).is_some_and(|m| m <= cutoff)
}

/// One cell of a cohomology computation: degree `degree` in `C`, i.e.
/// `HH^{degree+1}`, over the weights `weights.0 ..= weights.1`.
#[derive(Clone, Debug)]
pub struct Line {
    pub degree: i64,
    pub weights: (usize, usize),
    pub cochains: usize,
    pub kernel: usize,
    pub image: usize,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
    pub exact: bool,
    coords: Coordinates,
    boundaries: Echelon,
}

impl Line {
    pub fn hh_degree(&self) -> i64 {
        self.degree + 1
    }

    /// `degree − weight` for single-weight lines.
    pub fn line_index(&self) -> i64 {
        self.degree - self.weights.0 as i64
    }

    /// Coordinates of the class of `z` in the representatives. `z` must be
    /// supported on this line's weights.
    pub fn classify(&self, z: &Cochain) -> Result<Vec<Scalar>> {
        let v = self.coords.vector(z)?;
        let mut cols: Vec<SparseVec> = Vec::new();
        for r in &self.representatives {
            cols.push(self.coords.vector(r)?);
        }
        cols.extend(self.boundaries.rows().map(|(_, r)| r.clone()));
        let x = linalg::solve(&cols, &v).ok_or_else(|| Error::NotCocycle("not a cocycle of this line".into()))?;
        Ok((0..self.representatives.len()).map(|i| x.get(&i).cloned().unwrap_or_else(Scalar::zero)).collect())
    }
}

/// Hochschild cohomology within a weight window.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub window: Window,
    /// Lines are single weights: the structure is a graded algebra, so `d`
    /// raises weight by exactly one.
    pub graded: bool,
    pub lines: Vec<Line>,
    /// Per degree: true when the grading rules out any cochain beyond the
    /// cutoff, so the reported total is the full answer.
    pub complete: BTreeMap<i64, bool>,
}

impl CohomologyReport {
    /// Total dimension in `C`-degree `degree`.
    pub fn total(&self, degree: i64) -> usize {
        self.lines.iter().filter(|l| l.degree == degree).map(|l| l.dim).sum()
    }

    pub fn representatives(&self, degree: i64) -> Vec<Cochain> {
        self.lines.iter().filter(|l| l.degree == degree).flat_map(|l| l.representatives.iter().cloned()).collect()
    }

    /// Coordinates of a cocycle in the concatenated representatives of its
    /// degree.
    pub fn classify(&self, z: &Cochain) -> Result<Vec<Scalar>> {
        let mut out = Vec::new();
        for l in self.lines.iter().filter(|l| l.degree == z.degree()) {
            let part = z.weights(l.weights.0, l.weights.1);
            out.extend(l.classify(&part)?);
        }
        let covered = z.components().keys().all(|w| {
            self.lines.iter().any(|l| l.degree == z.degree() && l.weights.0 <= w.weight() && w.weight() <= l.weights.1)
        });
        if !covered {
            return Err(Error::Weight("cocycle has components outside the report's window".into()));
        }
        Ok(out)
    }
}

fn columns(a: &AStructure, src: &Coordinates, tgt: &Coordinates, degree: i64, cutoff: usize) -> Result<Vec<SparseVec>> {
    let g = a.graph();
    src.keys()
        .iter()
        .map(|(w, b)| {
            let e = Cochain::elementary(g, w.clone(), *b, Scalar::one(), cutoff)?.with_degree(degree)?;
            tgt.vector(&differential(&e, a, cutoff)?)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn line(
    a: &AStructure,
    n: i64,
    (lo, hi): (usize, usize),
    prev: Option<(usize, usize)>,
    tgt_hi: usize,
    cutoff: usize,
    exact: bool,
) -> Result<Line> {
    let g = a.graph();
    let here = basis_range(g, n, lo, hi);
    let next = basis_range(g, n + 1, lo, tgt_hi);
    let ker = linalg::kernel_image(&columns(a, &here, &next, n, cutoff)?).kernel;
    let mut boundaries = Echelon::new();
    if let Some((plo, phi)) = prev {
        let prev = basis_range(g, n - 1, plo, phi);
        // boundaries meeting weights >= lo only: echelon rows pivoting there
        let full = basis_range(g, n, plo.min(lo), hi);
        let lo_start = full.keys().iter().position(|(w, _)| w.weight() >= lo).unwrap_or(full.len());
        let mut ech = Echelon::new();
        for col in columns(a, &prev, &full, n - 1, cutoff)? {
            ech.insert(&col);
        }
        for (&p, row) in ech.rows() {
            if p >= lo_start {
                let v: SparseVec = row.iter().map(|(&i, x)| (i - lo_start, x.clone())).collect();
                boundaries.insert(&v);
            }
        }
    }
    let image = boundaries.rank();
    let mut quotient = boundaries.clone();
    let mut representatives = Vec::new();
    for k in &ker {
        if quotient.insert(k) {
            representatives.push(here.cochain(g, n, k, cutoff));
        }
    }
    Ok(Line {
        degree: n,
        weights: (lo, hi),
        cochains: here.len(),
        kernel: ker.len(),
        image,
        dim: representatives.len(),
        representatives,
        exact,
        coords: here,
        boundaries,
    })
}

/// Cohomology in the given `C`-degrees (`HH^{n+1}` for `C`-degree `n`) over
/// the window. For graded algebras every weight is its own exact line; in
/// general the truncated complex is computed as a whole and a line is exact
/// only when the grading rules out cochains beyond the cutoff.
pub fn hochschild(a: &AStructure, degrees: &[i64], window: Window) -> Result<CohomologyReport> {
    let g = a.graph();
    let graded = a.is_graded_algebra();
    // d of the top weight is read one weight higher on graded inputs
    let needed = if graded { window.cutoff + 1 } else { window.cutoff };
    if !degrees.is_empty() && a.mu().cutoff() < needed {
        return Err(Error::Weight(format!(
            "structure is known through weight {}, the window needs weight {needed}",
            a.mu().cutoff()
        )));
    }
    let mut lines = Vec::new();
    let mut complete = BTreeMap::new();
    for &n in degrees {
        complete.insert(n, vanishes_beyond(g, n, window.cutoff));
        if graded {
            for w in window.min_weight..=window.cutoff {
                let prev = w.checked_sub(1).map(|p| (p, p));
                lines.push(line(a, n, (w, w), prev, w + 1, window.cutoff + 1, true)?);
            }
        } else {
            let exact = vanishes_beyond(g, n, window.cutoff) && vanishes_beyond(g, n + 1, window.cutoff);
            let (lo, hi) = (window.min_weight, window.cutoff);
            lines.push(line(a, n, (lo, hi), Some((0, hi)), hi, hi, exact)?);
        }
    }
    Ok(CohomologyReport { window, graded, lines, complete })
}

/// `HH¹₊`: degree-0 classes of weight at least two.
pub fn hh1_plus(a: &AStructure, cutoff: usize) -> Result<CohomologyReport> {
    hochschild(a, &[0], Window::new(2, cutoff)?)
}

// ---------------------------------------------------------------------------
// cohomology of hom complexes and the graded center

/// Cohomology of one hom complex `(A(X, Y), μ¹)` in one degree, as vectors
/// over global basis indices.
#[derive(Clone, Debug, Default)]
struct HomCohomology {
    reps: Vec<SparseVec>,
    boundaries: Echelon,
}

fn hom_cohomology(a: &AStructure, x: usize, y: usize, m: i64) -> HomCohomology {
    let g = a.graph();
    let d1 = |b: usize| -> SparseVec {
        let w = Word::new(g, vec![b]).expect("letter");
        a.mu().components().get(&w).map(|t| t.clone().into_iter().collect()).unwrap_or_default()
    };
    let in_deg = |d: i64| g.hom(x, y).iter().copied().filter(move |&b| g.elem(b).degree == d).collect::<Vec<_>>();
    let here = in_deg(m);
    let cols: Vec<SparseVec> = here.iter().map(|&b| d1(b)).collect();
    let ker = linalg::kernel_image(&cols).kernel;
    let mut boundaries = Echelon::new();
    for b in in_deg(m - 1) {
        boundaries.insert(&d1(b));
    }
    let mut q = boundaries.clone();
    let mut reps = Vec::new();
    for k in ker {
        let v: SparseVec = k.into_iter().map(|(i, c)| (here[i], c)).collect();
        if q.insert(&v) {
            reps.push(v);
        }
    }
    HomCohomology { reps, boundaries }
}

/// m-convention binary product on basis-index vectors.
fn product(a: &AStructure, x: &SparseVec, y: &SparseVec) -> SparseVec {
    let g = a.graph();
    let mut out = Terms::new();
    for (&i, ci) in x {
        for (&j, cj) in y {
            let Ok(w) = Word::new(g, vec![i, j]) else { continue };
            if let Some(t) = a.mu().components().get(&w) {
                let s = convention_sign(g, &w);
                for (&b, c) in t {
                    add_term(&mut out, b, ci * cj * &s * c);
                }
            }
        }
    }
    out
}

/// The degree-0 graded center of `H•(A)`.
#[derive(Clone, Debug)]
pub struct CenterReport {
    /// Basis elements, each a family `(φ_X)` of degree-0 cocycles, stored
    /// as vectors over global basis indices.
    pub basis: Vec<SparseVec>,
    /// `table[i][j]` = coordinates of `basis[i] · basis[j]`.
    pub table: Vec<Vec<Vec<Scalar>>>,
    /// Coordinates of the identity.
    pub identity: Option<Vec<Scalar>>,
    boundaries: Echelon,
}

impl CenterReport {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a degree-0 family in the center basis, modulo
    /// boundaries.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let mut cols = self.basis.clone();
        cols.extend(self.boundaries.rows().map(|(_, r)| r.clone()));
        let x = linalg::solve(&cols, v)?;
        Some((0..self.basis.len()).map(|i| x.get(&i).cloned().unwrap_or_else(Scalar::zero)).collect())
    }

    /// An element is a unit iff multiplication by it is invertible.
    pub fn is_unit(&self, z: &[Scalar]) -> bool {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n)
            .map(|j| {
                let mut col = SparseVec::new();
                for (i, zi) in z.iter().enumerate() {
                    for (k, c) in self.table[i][j].iter().enumerate() {
                        let e = col.entry(k).or_insert_with(Scalar::zero);
                        *e += zi * c;
                        if e.is_zero() {
                            col.remove(&k);
                        }
                    }
                }
                col
            })
            .collect();
        linalg::kernel_image(&cols).image.rank() == n
    }
}

/// Solves the centrality system on `H⁰` of the endomorphism complexes.
pub fn graded_center(a: &AStructure) -> Result<CenterReport> {
    let g = a.graph();
    let nobj = g.n_objects();
    let (dmin, dmax) = g.degree_range().unwrap_or((0, 0));
    let mut hom: BTreeMap<(usize, usize, i64), HomCohomology> = BTreeMap::new();
    for &(x, y) in g.homs().keys() {
        for m in dmin..=dmax {
            hom.insert((x, y, m), hom_cohomology(a, x, y, m));
        }
    }
    let mut unknowns: Vec<(usize, SparseVec)> = Vec::new();
    for x in 0..nobj {
        if let Some(h) = hom.get(&(x, x, 0)) {
            unknowns.extend(h.reps.iter().map(|r| (x, r.clone())));
        }
    }
    let mut all_boundaries = Echelon::new();
    for x in 0..nobj {
        if let Some(h) = hom.get(&(x, x, 0)) {
            for (_, r) in h.boundaries.rows() {
                all_boundaries.insert(r);
            }
        }
    }
    // one block of coordinates per (x, y, m, f)
    let mut cols: Vec<SparseVec> = vec![SparseVec::new(); unknowns.len()];
    let mut offset = 0usize;
    let width = g.dim();
    for (&(x, y, _), h) in &hom {
        for f in &h.reps {
            for (j, (obj, r)) in unknowns.iter().enumerate() {
                let mut v = SparseVec::new();
                if *obj == y {
                    for (i, c) in product(a, r, f) {
                        v.insert(i, c);
                    }
                }
                if *obj == x {
                    for (i, c) in product(a, f, r) {
                        let e = v.entry(i).or_insert_with(Scalar::zero);
                        *e -= c;
                        if e.is_zero() {
                            v.remove(&i);
                        }
                    }
                }
                for (i, c) in h.boundaries.reduce(&v) {
                    cols[j].insert(offset + i, c);
                }
            }
            offset += width;
        }
    }
    let kernel = linalg::kernel_image(&cols).kernel;
    let basis: Vec<SparseVec> = kernel
        .iter()
        .map(|k| {
            let mut v = SparseVec::new();
            for (&j, c) in k {
                for (&i, x) in &unknowns[j].1 {
                    let e = v.entry(i).or_insert_with(Scalar::zero);
                    *e += c * x;
                }
            }
            v.retain(|_, c| !c.is_zero());
            v
        })
        .collect();
    let mut report = CenterReport { basis, table: Vec::new(), identity: None, boundaries: all_boundaries };
    let n = report.dim();
    let mut table = Vec::with_capacity(n);
    for x in &report.basis {
        let mut row = Vec::with_capacity(n);
        for y in &report.basis {
            let p = product(a, x, y);
            row.push(
                report.coordinates(&p).ok_or_else(|| Error::Invalid("center is not closed under products".into()))?,
            );
        }
        table.push(row);
    }
    report.table = table;
    if let Some(units) = g.units() {
        let one: SparseVec = units.iter().map(|&u| (u, Scalar::one())).collect();
        report.identity = report.coordinates(&one);
    }
    Ok(report)
}

/// Image of classes under `Π⁰` and the injectivity condition.
#[derive(Clone, Debug)]
pub struct CharacteristicReport {
    /// Center coordinates of each class's weight-0 part.
    pub images: Vec<Vec<Scalar>>,
    pub image_rank: usize,
    pub center_dim: usize,
    /// Every unit of `Z⁰` lies in the image. Units are Zariski dense in
    /// `Z⁰`, so this holds exactly when the image is all of `Z⁰`.
    pub units_in_image: bool,
    /// For graded inputs: the strict transformation `η⁰ = z` of each center
    /// basis element, verified to be a cocycle with `Π⁰(η) = z`.
    pub split: Option<Vec<Cochain>>,
}

/// `Π⁰` on classes of `C`-degree −1 (i.e. `HH⁰`).
pub fn characteristic_morphism(
    a: &AStructure,
    classes: &[Cochain],
    center: &CenterReport,
) -> Result<CharacteristicReport> {
    let g = a.graph();
    let mut images = Vec::new();
    let mut span = Echelon::new();
    for c in classes {
        if c.degree() != -1 && !c.is_zero() {
            return Err(Error::Degree(format!("characteristic morphism takes degree -1, got {}", c.degree())));
        }
        let d = differential(c, a, c.cutoff())?;
        if !d.is_zero() {
            return Err(Error::NotCocycle(format!("{d:?}")));
        }
        let mut v = SparseVec::new();
        for (w, t) in c.components() {
            if w.weight() == 0 {
                for (&b, x) in t {
                    v.insert(b, x.clone());
                }
            }
        }
        let coords = center.coordinates(&v).ok_or_else(|| Error::Invalid("weight-0 part is not central".into()))?;
        span.insert(&coords.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect());
        images.push(coords);
    }
    let split = if a.is_graded_algebra() {
        let mut out = Vec::new();
        for (i, z) in center.basis.iter().enumerate() {
            let mut comps = Components::new();
            for (&b, x) in z {
                let o = g.elem(b).source;
                add_term(comps.entry(Word::empty(o)).or_default(), b, x.clone());
            }
            let eta = Cochain::from_components(g, -1, comps, a.mu().cutoff())?;
            if !differential(&eta, a, a.mu().cutoff())?.is_zero() {
                return Err(Error::Invalid("strict transformation of a central element is not closed".into()));
            }
            let back = center.coordinates(z).expect("basis element");
            if back.iter().enumerate().any(|(j, x)| *x != if i == j { Scalar::one() } else { Scalar::zero() }) {
                return Err(Error::Invalid("split does not recover the central element".into()));
            }
            out.push(eta);
        }
        Some(out)
    } else {
        None
    };
    let image_rank = span.rank();
    Ok(CharacteristicReport {
        images,
        image_rank,
        center_dim: center.dim(),
        units_in_image: image_rank == center.dim(),
        split,
    })
}

/// Center, `HH⁰` within the window and `Π⁰`, bundled.
pub fn injectivity_condition(a: &AStructure, cutoff: usize) -> Result<(CenterReport, CharacteristicReport)> {
    let center = graded_center(a)?;
    let hh0 = hochschild(a, &[-1], Window::upto(cutoff))?;
    let classes = hh0.representatives(-1);
    let ch = characteristic_morphism(a, &classes, &center)?;
    Ok((center, ch))
}

/// The map on cohomology induced by restriction to a full subcategory.
#[derive(Clone, Debug)]
pub struct InducedMap {
    /// One column per representative of the source report.
    pub columns: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub injective: bool,
}

/// Pushes the representatives of `parent` through restriction and expresses
/// them in the classes of `sub`.
pub fn induced_map_on_hh(
    index: &RestrictionIndex,
    parent: &CohomologyReport,
    sub: &CohomologyReport,
) -> Result<InducedMap> {
    if parent.window != sub.window {
        return Err(Error::Weight("reports use different windows".into()));
    }
    let mut columns = Vec::new();
    let mut span = Echelon::new();
    let degrees: Vec<i64> = parent.complete.keys().copied().collect();
    for n in degrees {
        for r in parent.representatives(n) {
            let col = sub.classify(&restrict(&r, index)?)?;
            span.insert(&col.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect());
            columns.push(col);
        }
    }
    let rank = span.rank();
    Ok(InducedMap { injective: rank == columns.len(), rank, columns })
}

/// `exp` of a degree-0 cocycle of weight at least two, as an isotopy.
pub fn integrate_class(a: &Arc<AStructure>, v: &Cochain, cutoff: usize) -> Result<Isotopy> {
    let d = differential(v, a, cutoff)?;
    if !d.is_zero() {
        return Err(Error::NotCocycle(format!("{d:?}")));
    }
    let f = exp(v, cutoff)?;
    Isotopy::new(a, f.plus().clone())
}
