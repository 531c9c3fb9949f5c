//! Twisted cobar complexes `T_{g,h}(C)` and their cohomology, computed one
//! degree slice at a time.
//!
//! When the basis is homogeneous for the kG-bicomodule structure (see
//! [`CoalgebraSpec::bihomogeneous_labels`]) every slice splits further by
//! the list of grouplike junctions `(right end of b_k, left end of b_{k+1})`
//! that do not match, and ranks are computed per component.

mod checks;
mod report;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use rayon::prelude::*;
use smallvec::SmallVec;
use thiserror::Error;

use crate::coalgebra::{wordvec_add, CoalgebraSpec, SpecError, Word, WordVec};
use crate::field::Scalar;
use crate::linalg::{self, SparseVec};

pub use checks::{
    direct_sum_check, rank_and_signature, reduced_cobar_cohomology, shift_check, window_stabilize, BraidedPart,
    DirectSumCheck, RankSignature, ReducedCobar, ShiftCheck, StabilizationReport, WindowStep,
};
pub use report::{
    compute_report, pcdim_lower_bound, sparse_terms, CohomologyEntry, CohomologyReport, CohomologyRequest,
    PairSelection, PcdimBound, SparseTerm, SpecSummary,
};

/// Unmatched junctions of a word; the differential preserves it.
pub type Key = SmallVec<[(u32, u32); 4]>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CobarError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("differential leaves the slice at word [{0}]")]
    ImageOutsideSlice(String),
    #[error("grouplike multiplication unavailable: {0}")]
    NotHopf(String),
    #[error("{0}")]
    Request(String),
}

/// A cochain complex whose cochains are spanned by words in a basis.
pub trait WordComplex: Sync {
    fn spec(&self) -> &CoalgebraSpec;
    /// Basis of the degree-`n` cochains in one degree slice, sorted.
    fn words(&self, n: usize, degree: &[i64]) -> Result<Vec<Word>, CobarError>;
    /// The differential of one basis word.
    fn apply(&self, w: &[u32]) -> WordVec;
    /// Component label; words with different keys never interact.
    fn key(&self, _w: &[u32]) -> Key {
        Key::new()
    }

    fn apply_vec(&self, v: &WordVec) -> WordVec {
        let mut out = WordVec::new();
        for (w, c) in v {
            for (x, d) in self.apply(w) {
                wordvec_add(&mut out, x, c * &d);
            }
        }
        out
    }
}

/// `T_{g,h}(C)` with `∂ⁿ = g⊗Id + Σ (−1)^{i+1} Id^i⊗Δ⊗Id^{n−i−1} + (−1)^{n+1} Id⊗h`.
pub struct Cobar<'a> {
    spec: &'a CoalgebraSpec,
    g: usize,
    h: usize,
    gb: u32,
    hb: u32,
    lr: Option<&'a [(usize, usize)]>,
}

impl<'a> Cobar<'a> {
    pub fn new(spec: &'a CoalgebraSpec, g: usize, h: usize) -> Result<Self, CobarError> {
        let count = spec.grouplikes().len();
        for x in [g, h] {
            if x >= count {
                return Err(SpecError::NotGrouplike(format!("#{x}")).into());
            }
        }
        Ok(Cobar {
            spec,
            g,
            h,
            gb: spec.grouplike_basis(g) as u32,
            hb: spec.grouplike_basis(h) as u32,
            lr: spec.bihomogeneous_labels(),
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn h(&self) -> usize {
        self.h
    }
}

impl WordComplex for Cobar<'_> {
    fn spec(&self) -> &CoalgebraSpec {
        self.spec
    }

    fn words(&self, n: usize, degree: &[i64]) -> Result<Vec<Word>, CobarError> {
        Ok(self.spec.tensor_basis(n, Some(degree))?)
    }

    fn apply(&self, w: &[u32]) -> WordVec {
        let n = w.len();
        let mut out = WordVec::new();
        let mut first: Word = SmallVec::with_capacity(n + 1);
        first.push(self.gb);
        first.extend_from_slice(w);
        wordvec_add(&mut out, first, Scalar::one());
        for i in 0..n {
            let negate = i % 2 == 0;
            for (x, y, c) in self.spec.delta(w[i] as usize) {
                let mut v: Word = SmallVec::with_capacity(n + 1);
                v.extend_from_slice(&w[..i]);
                v.push(*x);
                v.push(*y);
                v.extend_from_slice(&w[i + 1..]);
                wordvec_add(&mut out, v, if negate { -c } else { c.clone() });
            }
        }
        let mut last: Word = SmallVec::with_capacity(n + 1);
        last.extend_from_slice(w);
        last.push(self.hb);
        wordvec_add(&mut out, last, if n.is_multiple_of(2) { -Scalar::one() } else { Scalar::one() });
        out
    }

    fn key(&self, w: &[u32]) -> Key {
        let mut k = Key::new();
        let Some(lr) = self.lr else { return k };
        let mut prev = self.g;
        for &b in w {
            let (l, r) = lr[b as usize];
            if prev != l {
                k.push((prev as u32, l as u32));
            }
            prev = r;
        }
        if prev != self.h {
            k.push((prev as u32, self.h as u32));
        }
        k
    }
}

pub fn word_labels(spec: &CoalgebraSpec, w: &[u32]) -> Vec<String> {
    w.iter().map(|&b| spec.label(b as usize).to_string()).collect()
}

fn describe_word(spec: &CoalgebraSpec, w: &[u32]) -> String {
    word_labels(spec, w).join(" ⊗ ")
}

fn group_by_key<C: WordComplex>(cx: &C, words: Vec<Word>) -> BTreeMap<Key, Vec<Word>> {
    let mut out: BTreeMap<Key, Vec<Word>> = BTreeMap::new();
    for w in words {
        out.entry(cx.key(&w)).or_default().push(w);
    }
    out
}

/// Columns `∂(w)` with rows numbered on first appearance.
fn free_columns<C: WordComplex>(cx: &C, words: &[Word]) -> Vec<SparseVec<Scalar>> {
    let mut rows: HashMap<Word, usize> = HashMap::new();
    words
        .iter()
        .map(|w| {
            let entries = cx
                .apply(w)
                .into_iter()
                .map(|(x, c)| {
                    let next = rows.len();
                    (*rows.entry(x).or_insert(next), c)
                })
                .collect();
            SparseVec::from_entries(entries)
        })
        .collect()
}

fn to_indexed(
    spec: &CoalgebraSpec,
    v: &WordVec,
    index: &HashMap<&Word, usize>,
) -> Result<SparseVec<Scalar>, CobarError> {
    let entries = v
        .iter()
        .map(|(w, c)| {
            index
                .get(w)
                .map(|&i| (i, c.clone()))
                .ok_or_else(|| CobarError::ImageOutsideSlice(describe_word(spec, w)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseVec::from_entries(entries))
}

/// Number of words and rank of `∂ⁿ` on one slice.
pub fn slice_rank<C: WordComplex>(cx: &C, n: usize, degree: &[i64]) -> Result<(usize, usize), CobarError> {
    let words = cx.words(n, degree)?;
    let count = words.len();
    let groups: Vec<Vec<Word>> = group_by_key(cx, words).into_values().collect();
    let rank = groups.par_iter().map(|ws| linalg::rank(&free_columns(cx, ws))).sum();
    Ok((count, rank))
}

/// Cohomology of one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceCohomology {
    pub dim: usize,
    pub cochains: usize,
    /// Representatives in canonical order; empty unless requested.
    pub reps: Vec<WordVec>,
}

pub fn slice_cohomology<C: WordComplex>(
    cx: &C,
    n: usize,
    degree: &[i64],
    with_reps: bool,
) -> Result<SliceCohomology, CobarError> {
    if !with_reps {
        let (cochains, out) = slice_rank(cx, n, degree)?;
        let inn = if n == 0 { 0 } else { slice_rank(cx, n - 1, degree)?.1 };
        return Ok(SliceCohomology {
            dim: cochains - out - inn,
            cochains,
            reps: Vec::new(),
        });
    }
    let dom = group_by_key(cx, cx.words(n, degree)?);
    let mut prev = if n == 0 {
        BTreeMap::new()
    } else {
        group_by_key(cx, cx.words(n - 1, degree)?)
    };
    let cochains = dom.values().map(|v| v.len()).sum();
    let jobs: Vec<(Vec<Word>, Vec<Word>)> = dom
        .into_iter()
        .map(|(k, ws)| (ws, prev.remove(&k).unwrap_or_default()))
        .collect();
    let parts = jobs
        .par_iter()
        .map(|(ws, ps)| -> Result<Vec<WordVec>, CobarError> {
            let index: HashMap<&Word, usize> = ws.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let cocycles = linalg::kernel_basis(&free_columns(cx, ws));
            let bnd = ps
                .iter()
                .map(|p| to_indexed(cx.spec(), &cx.apply(p), &index))
                .collect::<Result<Vec<_>, _>>()?;
            let reps = linalg::quotient_representatives(&cocycles, &bnd);
            debug_assert_eq!(reps.len(), cocycles.len() - linalg::rank(&bnd));
            Ok(reps
                .into_iter()
                .map(|r| r.into_entries().into_iter().map(|(i, c)| (ws[i].clone(), c)).collect())
                .collect())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let reps: Vec<WordVec> = parts.into_iter().flatten().collect();
    Ok(SliceCohomology {
        dim: reps.len(),
        cochains,
        reps,
    })
}

/// Degree slices of length-`n` words and the z-degree bound actually used.
/// Truncated specs are clamped to their exact bound; an unbounded request
/// on a truncation without one is an error unless the spec is ungraded.
pub fn slice_degrees(
    spec: &CoalgebraSpec,
    n: usize,
    deg_max: Option<i64>,
) -> Result<(Vec<Vec<i64>>, Option<i64>), CobarError> {
    let meta = spec.meta();
    let trivial = spec.degree_classes().iter().all(|(d, _)| d.iter().all(|&x| x == 0));
    let bound = match (deg_max, meta.truncated, meta.exact_degree_max) {
        (Some(d), true, Some(m)) => Some(d.min(m)),
        (Some(d), _, _) => Some(d),
        (None, true, Some(m)) => Some(m),
        (None, true, None) if !trivial => return Err(SpecError::InfiniteSlice.into()),
        (None, _, _) => None,
    };
    Ok((spec.reachable_degrees(n, bound), bound))
}

/// Resolves an optional single degree into the list of slices to sum.
pub(crate) fn degree_list(spec: &CoalgebraSpec, n: usize, degree: Option<&[i64]>) -> Result<Vec<Vec<i64>>, CobarError> {
    match degree {
        Some(d) => Ok(vec![d.to_vec()]),
        None => Ok(slice_degrees(spec, n, None)?.0),
    }
}

/// Matrix of `∂ⁿ_{g,h}` on one slice in canonical word order.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub g: usize,
    pub h: usize,
    pub n: usize,
    pub degree: Vec<i64>,
    pub domain: Vec<Word>,
    pub codomain: Vec<Word>,
    /// One column per domain word, rows indexed by `codomain`.
    pub columns: Vec<SparseVec<Scalar>>,
}

pub fn differential_matrix(
    spec: &CoalgebraSpec,
    g: usize,
    h: usize,
    n: usize,
    degree: &[i64],
) -> Result<ComplexSlice, CobarError> {
    let cx = Cobar::new(spec, g, h)?;
    let domain = cx.words(n, degree)?;
    let codomain = cx.words(n + 1, degree)?;
    let index: HashMap<&Word, usize> = codomain.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let columns = domain
        .iter()
        .map(|w| to_indexed(spec, &cx.apply(w), &index))
        .collect::<Result<_, _>>()?;
    Ok(ComplexSlice {
        g,
        h,
        n,
        degree: degree.to_vec(),
        domain,
        codomain,
        columns,
    })
}

/// A nonzero entry of `∂^{n+1}∂ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DSquaredWitness {
    pub n: usize,
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DSquaredCheck {
    pub words_checked: usize,
    pub witness: Option<DSquaredWitness>,
}

impl DSquaredCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `∂^{n+1}∂ⁿ = 0` on every word of length `n ≤ n_max` within the
/// degree bound.
pub fn check_d_squared(
    spec: &CoalgebraSpec,
    g: usize,
    h: usize,
    n_max: usize,
    deg_max: Option<i64>,
) -> Result<DSquaredCheck, CobarError> {
    let cx = Cobar::new(spec, g, h)?;
    let mut words_checked = 0;
    for n in 0..=n_max {
        let (degrees, _) = slice_degrees(spec, n, deg_max)?;
        for d in degrees {
            let words = cx.words(n, &d)?;
            words_checked += words.len();
            let bad = words.par_iter().find_map_first(|w| {
                let dd = cx.apply_vec(&cx.apply(w));
                dd.into_iter().next().map(|(t, c)| DSquaredWitness {
                    n,
                    source: word_labels(spec, w),
                    target: word_labels(spec, &t),
                    coeff: c,
                })
            });
            if bad.is_some() {
                return Ok(DSquaredCheck {
                    words_checked,
                    witness: bad,
                });
            }
        }
    }
    Ok(DSquaredCheck {
        words_checked,
        witness: None,
    })
}

/// `dim PPⁿ_{g,h}` with representatives, on one slice or summed over all
/// slices (`degree = None`).
pub fn primitive_cohomology(
    spec: &CoalgebraSpec,
    g: usize,
    h: usize,
    n: usize,
    degree: Option<&[i64]>,
) -> Result<(usize, Vec<WordVec>), CobarError> {
    let cx = Cobar::new(spec, g, h)?;
    let mut reps = Vec::new();
    for d in degree_list(spec, n, degree)? {
        reps.extend(slice_cohomology(&cx, n, &d, true)?.reps);
    }
    Ok((reps.len(), reps))
}

/// `dim PPⁿ_{g,h}` summed over all slices within the bound.
pub fn total_dim(
    spec: &CoalgebraSpec,
    g: usize,
    h: usize,
    n: usize,
    deg_max: Option<i64>,
) -> Result<usize, CobarError> {
    let cx = Cobar::new(spec, g, h)?;
    let (degrees, _) = slice_degrees(spec, n, deg_max)?;
    degrees
        .iter()
        .map(|d| Ok(slice_cohomology(&cx, n, d, false)?.dim))
        .sum()
}

/// Degree vector of a word.
pub fn word_degree(spec: &CoalgebraSpec, w: &[u32]) -> Vec<i64> {
    let mut d = vec![0; spec.grading_rank()];
    for &b in w {
        for (x, y) in d.iter_mut().zip(spec.grading(b as usize)) {
            *x += y;
        }
    }
    d
}

/// For cocycles `a`, `b` of one slice with `b` not a coboundary, returns
/// `c` with `a ≡ c·b` modulo coboundaries, or `None` if no such `c`.
pub fn class_ratio(
    spec: &CoalgebraSpec,
    g: usize,
    h: usize,
    a: &WordVec,
    b: &WordVec,
) -> Result<Option<Scalar>, CobarError> {
    let cx = Cobar::new(spec, g, h)?;
    if !cx.apply_vec(a).is_empty() || !cx.apply_vec(b).is_empty() {
        return Ok(None);
    }
    let Some(first) = b.keys().next() else {
        return Ok(None);
    };
    let n = first.len();
    let d = word_degree(spec, first);
    let words = cx.words(n, &d)?;
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let bnd = if n == 0 {
        Vec::new()
    } else {
        cx.words(n - 1, &d)?
            .iter()
            .map(|p| to_indexed(spec, &cx.apply(p), &index))
            .collect::<Result<Vec<_>, _>>()?
    };
    let (Ok(av), Ok(bv)) = (to_indexed(spec, a, &index), to_indexed(spec, b, &index)) else {
        return Ok(None);
    };
    let solver = linalg::QuotientSolver::new(&bnd, &[bv]);
    if solver.independent_reps() != 1 {
        return Ok(None);
    }
    Ok(solver.solve(&av).map(|c| c[0].clone()))
}
