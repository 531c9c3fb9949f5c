//! Sparse structure-constant coalgebras.
//!
//! A [`CoalgebraSpec`] stores Δ as sparse `(left, right, coeff)` triples per
//! basis element, the counit, the grouplike elements (with their group
//! labels) and an `N^r` grading. Optional [`HopfTables`] record left and
//! right multiplication by grouplikes, which the shift, product and
//! adjoint-action layers need.

mod construct;
mod group;
mod json;
mod validate;

use std::collections::HashMap;

use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{FieldContext, Scalar};
use crate::linalg::{self, SparseVec};

pub use construct::{direct_sum, tensor_product};
pub use group::GroupStructure;
pub use json::{from_json, to_json};
pub use validate::{Axiom, ValidationReport, Violation};

/// A basis word of `C^{⊗n}`; the empty word spans `k`.
pub type Word = SmallVec<[u32; 6]>;

/// Sparse linear combination of basis elements.
pub type LinComb = Vec<(u32, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("basis labels must be unique ({0:?} repeated)")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("index {index} outside basis of dimension {dim}")]
    OutOfBasis { index: usize, dim: usize },
    #[error("grading of {0:?} has wrong length or a negative entry")]
    BadGrading(String),
    #[error("{0:?} is not grouplike")]
    NotGrouplike(String),
    #[error("cannot enumerate an unconstrained slice of a truncated coalgebra")]
    InfiniteSlice,
    #[error("malformed coalgebra description: {0}")]
    Format(String),
    #[error("{0}")]
    Field(#[from] crate::field::FieldError),
}

/// A grouplike basis element and its label in the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouplike {
    pub basis: usize,
    pub element: Vec<i64>,
}

/// Left and right multiplication by each grouplike, indexed
/// `[grouplike][basis]`. `None` marks products leaving a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfTables {
    pub left: Vec<Vec<Option<LinComb>>>,
    pub right: Vec<Vec<Option<LinComb>>>,
}

/// Provenance of a constructed spec.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecMeta {
    pub name: String,
    /// The spec is a finite piece of an infinite-dimensional coalgebra.
    pub truncated: bool,
    /// Largest z-degree whose slices agree with the untruncated coalgebra.
    pub exact_degree_max: Option<i64>,
    /// Δ terms dropped because a leg left the truncated basis.
    pub dropped_triples: usize,
    /// The natural grading was incompatible and the trivial one was used.
    pub ungraded: bool,
    /// Exponent window for specs over a windowed copy of Z.
    pub window: Option<(i64, i64)>,
}

/// Raw parts of a spec, before index caches are built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecParts {
    pub field: FieldContext,
    pub labels: Vec<String>,
    pub delta: Vec<Vec<(u32, u32, Scalar)>>,
    pub counit: Vec<Scalar>,
    pub grouplikes: Vec<Grouplike>,
    pub group: Option<GroupStructure>,
    pub grading: Vec<Vec<i64>>,
    pub z_coord: usize,
    pub meta: SpecMeta,
    pub hopf: Option<HopfTables>,
}

/// Immutable coalgebra description with index caches.
#[derive(Debug, Clone)]
pub struct CoalgebraSpec {
    parts: SpecParts,
    index: HashMap<String, usize>,
    gl_of_basis: Vec<Option<usize>>,
    gl_of_element: HashMap<Vec<i64>, usize>,
    by_degree: Vec<(Vec<i64>, Vec<u32>)>,
    bihomogeneous: Option<Vec<(usize, usize)>>,
}

impl PartialEq for CoalgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl CoalgebraSpec {
    pub fn from_parts(parts: SpecParts) -> Result<Self, SpecError> {
        let dim = parts.labels.len();
        let mut index = HashMap::with_capacity(dim);
        for (i, l) in parts.labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(SpecError::DuplicateLabel(l.clone()));
            }
        }
        if parts.delta.len() != dim || parts.counit.len() != dim || parts.grading.len() != dim {
            return Err(SpecError::Format(
                "delta, counit and grading must cover the basis".into(),
            ));
        }
        for row in &parts.delta {
            for (a, b, _) in row {
                for &i in [a, b] {
                    if i as usize >= dim {
                        return Err(SpecError::OutOfBasis { index: i as usize, dim });
                    }
                }
            }
        }
        let rank = parts.grading.first().map_or(1, |g| g.len());
        if rank == 0 || parts.z_coord >= rank {
            return Err(SpecError::Format("grading needs at least one coordinate".into()));
        }
        for (i, g) in parts.grading.iter().enumerate() {
            if g.len() != rank || g.iter().any(|&d| d < 0) {
                return Err(SpecError::BadGrading(parts.labels[i].clone()));
            }
        }
        let mut gl_of_basis = vec![None; dim];
        let mut gl_of_element = HashMap::new();
        for (k, g) in parts.grouplikes.iter().enumerate() {
            if g.basis >= dim {
                return Err(SpecError::OutOfBasis { index: g.basis, dim });
            }
            gl_of_basis[g.basis] = Some(k);
            gl_of_element.insert(g.element.clone(), k);
        }
        let mut deg_map: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        for (i, g) in parts.grading.iter().enumerate() {
            deg_map.entry(g.clone()).or_default().push(i as u32);
        }
        let mut by_degree: Vec<(Vec<i64>, Vec<u32>)> = deg_map.into_iter().collect();
        by_degree.sort();
        let mut spec = CoalgebraSpec {
            parts,
            index,
            gl_of_basis,
            gl_of_element,
            by_degree,
            bihomogeneous: None,
        };
        spec.bihomogeneous = spec.detect_bihomogeneous();
        Ok(spec)
    }

    pub fn parts(&self) -> &SpecParts {
        &self.parts
    }

    pub fn into_parts(self) -> SpecParts {
        self.parts
    }

    pub fn field(&self) -> &FieldContext {
        &self.parts.field
    }

    pub fn dim(&self) -> usize {
        self.parts.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.parts.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.parts.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SpecError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| SpecError::UnknownLabel(label.into()))
    }

    pub fn delta(&self, i: usize) -> &[(u32, u32, Scalar)] {
        &self.parts.delta[i]
    }

    pub fn counit(&self, i: usize) -> &Scalar {
        &self.parts.counit[i]
    }

    pub fn grading(&self, i: usize) -> &[i64] {
        &self.parts.grading[i]
    }

    pub fn grading_rank(&self) -> usize {
        self.parts.grading.first().map_or(1, |g| g.len())
    }

    pub fn z_coord(&self) -> usize {
        self.parts.z_coord
    }

    pub fn meta(&self) -> &SpecMeta {
        &self.parts.meta
    }

    pub fn name(&self) -> &str {
        &self.parts.meta.name
    }

    pub fn grouplikes(&self) -> &[Grouplike] {
        &self.parts.grouplikes
    }

    pub fn group(&self) -> Option<&GroupStructure> {
        self.parts.group.as_ref()
    }

    pub fn hopf(&self) -> Option<&HopfTables> {
        self.parts.hopf.as_ref()
    }

    /// Grouplike index of a basis element, if it is one of the grouplikes.
    pub fn grouplike_of_basis(&self, b: usize) -> Option<usize> {
        self.gl_of_basis[b]
    }

    pub fn grouplike_basis(&self, g: usize) -> usize {
        self.parts.grouplikes[g].basis
    }

    /// Grouplike index by group label.
    pub fn grouplike_by_element(&self, el: &[i64]) -> Option<usize> {
        self.gl_of_element.get(el).copied()
    }

    /// Grouplike index of the group product `g h`, when present.
    pub fn grouplike_mul(&self, g: usize, h: usize) -> Option<usize> {
        let grp = self.group()?;
        let p = grp.mul(&self.parts.grouplikes[g].element, &self.parts.grouplikes[h].element);
        self.grouplike_by_element(&p)
    }

    pub fn grouplike_inv(&self, g: usize) -> Option<usize> {
        let grp = self.group()?;
        self.grouplike_by_element(&grp.inv(&self.parts.grouplikes[g].element))
    }

    pub fn grouplike_identity(&self) -> Option<usize> {
        let grp = self.group()?;
        self.grouplike_by_element(&grp.identity())
    }

    pub fn grouplike_label(&self, g: usize) -> &str {
        self.label(self.parts.grouplikes[g].basis)
    }

    /// Resolves a grouplike from a basis label.
    pub fn grouplike_by_label(&self, label: &str) -> Result<usize, SpecError> {
        let b = self.index_of(label)?;
        self.grouplike_of_basis(b)
            .ok_or_else(|| SpecError::NotGrouplike(label.into()))
    }

    /// Basis elements grouped by degree vector, in sorted degree order.
    pub fn degree_classes(&self) -> &[(Vec<i64>, Vec<u32>)] {
        &self.by_degree
    }

    /// `(left, right)` grouplike indices of every basis element when the
    /// basis is homogeneous for the kG-bicomodule structure.
    pub fn bihomogeneous_labels(&self) -> Option<&[(usize, usize)]> {
        self.bihomogeneous.as_deref()
    }

    fn detect_bihomogeneous(&self) -> Option<Vec<(usize, usize)>> {
        let dim = self.dim();
        let mut lr = Vec::with_capacity(dim);
        for b in 0..dim {
            if let Some(g) = self.gl_of_basis[b] {
                lr.push((g, g));
                continue;
            }
            let mut left = None;
            let mut right = None;
            for (x, y, _) in self.delta(b) {
                if *y as usize == b {
                    if let Some(g) = self.gl_of_basis[*x as usize] {
                        if left.replace(g).is_some_and(|o| o != g) {
                            return None;
                        }
                    }
                }
                if *x as usize == b {
                    if let Some(g) = self.gl_of_basis[*y as usize] {
                        if right.replace(g).is_some_and(|o| o != g) {
                            return None;
                        }
                    }
                }
            }
            lr.push((left?, right?));
        }
        for b in 0..dim {
            for (x, y, _) in self.delta(b) {
                let (lx, rx) = lr[*x as usize];
                let (ly, ry) = lr[*y as usize];
                if lx != lr[b].0 || ry != lr[b].1 || rx != ly {
                    return None;
                }
            }
        }
        Some(lr)
    }

    /// Runs every axiom check; violations are returned as data.
    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// All words of length `n` whose total degree equals `degree`, in
    /// lexicographic order. `None` means every degree, which is only
    /// allowed on specs that are not truncations.
    pub fn tensor_basis(&self, n: usize, degree: Option<&[i64]>) -> Result<Vec<Word>, SpecError> {
        let mut out = Vec::new();
        match degree {
            None => {
                if self.meta().truncated {
                    return Err(SpecError::InfiniteSlice);
                }
                let dim = self.dim() as u32;
                let mut w: Word = SmallVec::new();
                fn rec(n: usize, dim: u32, w: &mut Word, out: &mut Vec<Word>) {
                    if w.len() == n {
                        out.push(w.clone());
                        return;
                    }
                    for b in 0..dim {
                        w.push(b);
                        rec(n, dim, w, out);
                        w.pop();
                    }
                }
                rec(n, dim, &mut w, &mut out);
            }
            Some(d) => {
                if d.len() != self.grading_rank() {
                    return Err(SpecError::Format("degree vector has wrong length".into()));
                }
                let mut w: Word = SmallVec::new();
                self.words_rec(n, d.to_vec(), &mut w, &mut out);
                out.sort();
            }
        }
        Ok(out)
    }

    fn words_rec(&self, n: usize, rest: Vec<i64>, w: &mut Word, out: &mut Vec<Word>) {
        if n == 0 {
            if rest.iter().all(|&x| x == 0) {
                out.push(w.clone());
            }
            return;
        }
        for (g, elems) in &self.by_degree {
            if g.iter().zip(&rest).all(|(a, r)| a <= r) {
                let next: Vec<i64> = rest.iter().zip(g).map(|(r, a)| r - a).collect();
                for &b in elems {
                    w.push(b);
                    self.words_rec(n - 1, next.clone(), w, out);
                    w.pop();
                }
            }
        }
    }

    /// Degree vectors reachable as sums of `n` basis degrees, each
    /// coordinate bounded by `max` on the z-coordinate (other coordinates
    /// are bounded by what the basis provides).
    pub fn reachable_degrees(&self, n: usize, z_max: Option<i64>) -> Vec<Vec<i64>> {
        let rank = self.grading_rank();
        let mut cur: std::collections::BTreeSet<Vec<i64>> = std::iter::once(vec![0; rank]).collect();
        let degs: Vec<&Vec<i64>> = self.by_degree.iter().map(|(d, _)| d).collect();
        for _ in 0..n {
            let mut next = std::collections::BTreeSet::new();
            for c in &cur {
                for d in &degs {
                    let s: Vec<i64> = c.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
                    if z_max.is_none_or(|m| s[self.z_coord()] <= m) {
                        next.insert(s);
                    }
                }
            }
            cur = next;
        }
        cur.into_iter().collect()
    }

    /// Basis of the space of `c` with `Δc = g⊗c + c⊗h` together with
    /// `dim PP¹_{g,h}` (the kernel modulo `k(g−h)`).
    pub fn skew_primitives(&self, g: usize, h: usize) -> Result<(Vec<LinComb>, usize), SpecError> {
        let gb = self
            .parts
            .grouplikes
            .get(g)
            .ok_or(SpecError::NotGrouplike(format!("#{g}")))?
            .basis;
        let hb = self
            .parts
            .grouplikes
            .get(h)
            .ok_or(SpecError::NotGrouplike(format!("#{h}")))?
            .basis;
        let mut basis = Vec::new();
        for (_, elems) in &self.by_degree {
            let mut rows: HashMap<(u32, u32), usize> = HashMap::new();
            let mut cols = Vec::with_capacity(elems.len());
            for &b in elems {
                let mut im = vec![(gb as u32, b, Scalar::one()), (b, hb as u32, Scalar::one())];
                for (x, y, c) in self.delta(b as usize) {
                    im.push((*x, *y, -c));
                }
                let entries = im
                    .into_iter()
                    .map(|(x, y, c)| {
                        let n = rows.len();
                        (*rows.entry((x, y)).or_insert(n), c)
                    })
                    .collect();
                cols.push(SparseVec::from_entries(entries));
            }
            for k in linalg::kernel_basis(&cols) {
                basis.push(k.entries().iter().map(|(j, c)| (elems[*j], c.clone())).collect());
            }
        }
        let dim = basis.len() - usize::from(g != h);
        Ok((basis, dim))
    }
}

/// Index of a word in a slice.
pub fn word_index(words: &[Word]) -> HashMap<Word, usize> {
    words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()
}

/// Sparse element of `C^{⊗n}` keyed by words.
pub type WordVec = std::collections::BTreeMap<Word, Scalar>;

pub fn wordvec_add(acc: &mut WordVec, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(w) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests;
