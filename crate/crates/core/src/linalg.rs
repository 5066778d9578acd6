//! Exact sparse linear algebra over ℚ: incremental echelon forms, kernels,
//! images and solves. Vectors are sparse maps from coordinate to scalar.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

fn axpy(y: &mut SparseVec, a: &Scalar, x: &SparseVec) {
    for (&i, v) in x {
        let e = y.entry(i).or_insert_with(Scalar::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(&i);
        }
    }
}

/// Row-reduced basis of a subspace, pivot = leading (smallest) coordinate,
/// pivot entry normalised to 1 and eliminated from every other row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = r.get(p).cloned() {
                axpy(&mut r, &-c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, c)) = r.iter().next() else { return false };
        let inv = c.inv().expect("nonzero pivot");
        let mut row = SparseVec::new();
        axpy(&mut row, &inv, &r);
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&p).cloned() {
                axpy(other, &-c, &row);
            }
        }
        self.rows.insert(p, row);
        true
    }
}

/// Kernel and image of a linear map given by the images of basis vectors
/// `0..columns.len()`.
pub struct KernelImage {
    pub kernel: Vec<SparseVec>,
    pub image: Echelon,
}

/// Gaussian elimination tracking combinations: every column that reduces to
/// zero yields a kernel vector.
pub fn kernel_image(columns: &[SparseVec]) -> KernelImage {
    // pivot -> (reduced image, combination of columns)
    let mut basis: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut img = col.clone();
        let mut comb = SparseVec::from([(j, Scalar::one())]);
        while let Some((p, c)) = img.first_key_value().map(|(&p, c)| (p, c.clone())) {
            match basis.get(&p) {
                Some((bimg, bcomb)) => {
                    axpy(&mut img, &-c.clone(), bimg);
                    axpy(&mut comb, &-c, bcomb);
                }
                None => break,
            }
        }
        if img.is_empty() {
            kernel.push(comb);
        } else {
            let (&p, c) = img.iter().next().unwrap();
            let inv = c.inv().expect("nonzero pivot");
            let mut nimg = SparseVec::new();
            let mut ncomb = SparseVec::new();
            axpy(&mut nimg, &inv, &img);
            axpy(&mut ncomb, &inv, &comb);
            basis.insert(p, (nimg, ncomb));
        }
    }
    let mut image = Echelon::new();
    for (img, _) in basis.values() {
        image.insert(img);
    }
    KernelImage { kernel, image }
}

/// Solves `Σ x_j columns[j] = rhs`; `None` when `rhs` is outside the span.
pub fn solve(columns: &[SparseVec], rhs: &SparseVec) -> Option<SparseVec> {
    let mut basis: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let reduce = |basis: &BTreeMap<usize, (SparseVec, SparseVec)>, v: &SparseVec, comb: &mut SparseVec| {
        let mut img = v.clone();
        while let Some((p, c)) = img.first_key_value().map(|(&p, c)| (p, c.clone())) {
            match basis.get(&p) {
                Some((bimg, bcomb)) => {
                    axpy(&mut img, &-c.clone(), bimg);
                    axpy(comb, &-c, bcomb);
                }
                None => break,
            }
        }
        img
    };
    for (j, col) in columns.iter().enumerate() {
        let mut comb = SparseVec::from([(j, Scalar::one())]);
        let img = reduce(&basis, col, &mut comb);
        if let Some((&p, c)) = img.iter().next() {
            let inv = c.inv().expect("nonzero pivot");
            let mut nimg = SparseVec::new();
            let mut ncomb = SparseVec::new();
            axpy(&mut nimg, &inv, &img);
            axpy(&mut ncomb, &inv, &comb);
            basis.insert(p, (nimg, ncomb));
        }
    }
    // reduce rhs; the accumulated combination expresses rhs - Σ x col
    let mut comb = SparseVec::new();
    let rest = reduce(&basis, rhs, &mut comb);
    if !rest.is_empty() {
        return None;
    }
    // rhs + comb·cols = 0 in the reduction sense, so x = -comb
    Some(comb.into_iter().map(|(j, c)| (j, -c)).collect())
}

/// Applies a matrix given by columns to a coefficient vector.
pub fn apply(columns: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&j, c) in x {
        axpy(&mut out, c, &columns[j]);
    }
    out
}
