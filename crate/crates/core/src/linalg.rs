//! Exact sparse linear algebra over any [`Field`].
//!
//! Vectors are sorted `(index, value)` lists without stored zeros. Ranks are
//! computed by sparse elimination with a Markowitz-style pivot rule (column
//! with the fewest nonzeros, then row with the fewest nonzeros, ties broken
//! by lowest index). Kernels, quotient representatives and membership
//! solves use an incremental echelon basis whose pivot is the lowest index.

use std::collections::{BTreeMap, BTreeSet};

use crate::field::Field;

/// Sparse vector with strictly increasing indices and no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, F::one())],
        }
    }

    /// Builds from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(mut raw: Vec<(usize, F)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, F)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add_ref(&v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_map(map: BTreeMap<usize, F>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, F)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn lead(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, i: usize) -> Option<&F> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul_ref(c))).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &F, other: &SparseVec<F>) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.mul_ref(c)));
                        b.next();
                    } else {
                        let s = x.add_ref(&y.mul_ref(c));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.mul_ref(c)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec<F>) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &SparseVec<F>) -> Self {
        self.axpy(&-F::one(), other)
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }
}

/// Rank of the matrix whose columns are `cols` (row indices arbitrary).
pub fn rank<F: Field>(cols: &[SparseVec<F>]) -> usize {
    Markowitz::new(cols).run()
}

struct Markowitz<F> {
    cols: Vec<BTreeMap<usize, F>>,
    row_cols: BTreeMap<usize, BTreeSet<usize>>,
    active: BTreeSet<(usize, usize)>,
}

impl<F: Field> Markowitz<F> {
    fn new(src: &[SparseVec<F>]) -> Self {
        let mut cols = Vec::with_capacity(src.len());
        let mut row_cols: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut active = BTreeSet::new();
        for (c, v) in src.iter().enumerate() {
            let mut m = BTreeMap::new();
            for (r, x) in v.entries() {
                m.insert(*r, x.clone());
                row_cols.entry(*r).or_default().insert(c);
            }
            active.insert((m.len(), c));
            cols.push(m);
        }
        Markowitz { cols, row_cols, active }
    }

    fn run(mut self) -> usize {
        let mut rank = 0;
        while let Some(&(count, c)) = self.active.iter().next() {
            self.active.remove(&(count, c));
            if count == 0 {
                continue;
            }
            let pivot_row = *self.cols[c]
                .keys()
                .min_by_key(|r| (self.row_cols[*r].len(), **r))
                .unwrap();
            let pivot_val = self.cols[c][&pivot_row].clone();
            let pivot_inv = pivot_val.try_inv().expect("nonzero pivot");
            let pivot_col: Vec<(usize, F)> = self.cols[c].iter().map(|(r, v)| (*r, v.clone())).collect();
            let others: Vec<usize> = self.row_cols[&pivot_row].iter().copied().filter(|&k| k != c).collect();
            for k in others {
                let factor = self.cols[k][&pivot_row].mul_ref(&pivot_inv);
                self.active.remove(&(self.cols[k].len(), k));
                for (r, v) in &pivot_col {
                    let delta = v.mul_ref(&factor);
                    let entry = self.cols[k].entry(*r);
                    use std::collections::btree_map::Entry;
                    match entry {
                        Entry::Occupied(mut o) => {
                            let nv = o.get().sub_ref(&delta);
                            if nv.is_zero() {
                                o.remove();
                                self.row_cols.get_mut(r).unwrap().remove(&k);
                            } else {
                                *o.get_mut() = nv;
                            }
                        }
                        Entry::Vacant(vac) => {
                            vac.insert(-delta);
                            self.row_cols.get_mut(r).unwrap().insert(k);
                        }
                    }
                }
                self.active.insert((self.cols[k].len(), k));
            }
            for (r, _) in &pivot_col {
                self.row_cols.get_mut(r).unwrap().remove(&c);
            }
            self.cols[c].clear();
            rank += 1;
        }
        rank
    }
}

/// Incremental echelon basis; every stored row has leading coefficient one
/// and a distinct leading index. Each row may carry a tracking vector that
/// records it as a combination of inserted inputs.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: Vec<(SparseVec<F>, SparseVec<F>)>,
    pivots: BTreeMap<usize, usize>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` (and its tracking vector) until its leading index is not
    /// a pivot. Returns the reduced pair.
    fn reduce_head(&self, mut v: SparseVec<F>, mut t: SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        while let Some((i, c)) = v.lead() {
            match self.pivots.get(&i) {
                Some(&k) => {
                    let c = -c.clone();
                    let (row, track) = &self.rows[k];
                    v = v.axpy(&c, row);
                    t = t.axpy(&c, track);
                }
                None => break,
            }
        }
        (v, t)
    }

    /// Eliminates every pivot index from `v`.
    fn reduce_all(&self, mut v: SparseVec<F>, mut t: SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut from = 0usize;
        loop {
            let hit = v
                .entries()
                .iter()
                .find(|(i, _)| *i >= from && self.pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                Some((i, c)) => {
                    let k = self.pivots[&i];
                    let c = -c;
                    let (row, track) = &self.rows[k];
                    v = v.axpy(&c, row);
                    t = t.axpy(&c, track);
                    from = i + 1;
                }
                None => break,
            }
        }
        (v, t)
    }

    /// Residue of `v` modulo the span, with all pivot coordinates cleared.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        self.reduce_all(v.clone(), SparseVec::new()).0
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce_head(v.clone(), SparseVec::new()).0.is_zero()
    }

    /// Inserts `v`; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        self.insert_tracked(v, SparseVec::new()).is_none()
    }

    /// Inserts `v` with tracking vector `t`. If `v` is dependent, returns
    /// the tracking residue `t - Σ f_i t_i` (a relation when `v` reduces to
    /// zero); otherwise stores the row and returns `None`.
    pub fn insert_tracked(&mut self, v: &SparseVec<F>, t: SparseVec<F>) -> Option<SparseVec<F>> {
        let (v, t) = self.reduce_head(v.clone(), t);
        match v.lead() {
            None => Some(t),
            Some((i, c)) => {
                let inv = c.try_inv().expect("nonzero lead");
                let (v, t) = (v.scale(&inv), t.scale(&inv));
                self.pivots.insert(i, self.rows.len());
                self.rows.push((v, t));
                None
            }
        }
    }

    /// Writes `v` as `Σ c_k rows_k`; returns the accumulated tracking
    /// combination when `v` is in the span.
    pub fn solve_tracked(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        let (r, t) = self.reduce_head(v.clone(), SparseVec::new());
        if r.is_zero() {
            Some(t.scale(&-F::one()))
        } else {
            None
        }
    }
}

/// Basis of the kernel of the matrix with the given columns, as vectors
/// over column indices. Deterministic in column order.
pub fn kernel_basis<F: Field>(cols: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut ech = Echelon::new();
    let mut ker = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if let Some(rel) = ech.insert_tracked(c, SparseVec::unit(j)) {
            ker.push(rel);
        }
    }
    // clear pivots among kernel vectors for a canonical basis
    let mut kech = Echelon::new();
    for k in &ker {
        kech.insert(k);
    }
    let mut out: Vec<SparseVec<F>> = kech.rows.iter().map(|(r, _)| kech.reduce_others(r)).collect();
    out.sort_by_key(|v| v.lead().map(|(i, _)| i));
    out
}

impl<F: Field> Echelon<F> {
    fn reduce_others(&self, row: &SparseVec<F>) -> SparseVec<F> {
        let lead = row.lead().map(|(i, _)| i);
        let mut v = row.clone();
        loop {
            let hit = v
                .entries()
                .iter()
                .find(|(i, _)| Some(*i) != lead && self.pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                Some((i, c)) => v = v.axpy(&-c, &self.rows[self.pivots[&i]].0),
                None => return v,
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F>> {
        self.rows.iter().map(|(r, _)| r)
    }
}

/// Chooses representatives of `span(cocycles) / span(boundaries)`: each
/// kept cocycle is reduced against the boundaries and earlier picks.
pub fn quotient_representatives<F: Field>(cocycles: &[SparseVec<F>], boundaries: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut ech = Echelon::new();
    for b in boundaries {
        ech.insert(b);
    }
    let mut reps = Vec::new();
    for z in cocycles {
        let r = ech.reduce(z);
        if ech.insert(&r) {
            reps.push(r);
        }
    }
    reps
}

/// Expresses vectors as combinations of fixed representatives modulo
/// a boundary space.
#[derive(Clone, Debug)]
pub struct QuotientSolver<F> {
    ech: Echelon<F>,
    boundary_rank: usize,
    reps: usize,
}

impl<F: Field> QuotientSolver<F> {
    pub fn new(boundaries: &[SparseVec<F>], reps: &[SparseVec<F>]) -> Self {
        let mut ech = Echelon::new();
        for b in boundaries {
            ech.insert(b);
        }
        let boundary_rank = ech.rank();
        for (k, r) in reps.iter().enumerate() {
            ech.insert_tracked(r, SparseVec::unit(k));
        }
        QuotientSolver {
            ech,
            boundary_rank,
            reps: reps.len(),
        }
    }

    /// Number of representatives independent modulo boundaries.
    pub fn independent_reps(&self) -> usize {
        self.ech.rank() - self.boundary_rank
    }

    pub fn num_reps(&self) -> usize {
        self.reps
    }

    /// Coefficients `c` with `v ≡ Σ c_k reps_k` modulo boundaries, or
    /// `None` if `v` is outside the span of boundaries and representatives.
    pub fn solve(&self, v: &SparseVec<F>) -> Option<Vec<F>> {
        let t = self.ech.solve_tracked(v)?;
        let mut out = vec![F::zero(); self.reps];
        for (k, c) in t.into_entries() {
            out[k] = c;
        }
        Some(out)
    }

    pub fn in_boundary_span(&self, v: &SparseVec<F>) -> bool {
        match self.solve(v) {
            Some(c) => c.iter().all(|x| x.is_zero()),
            None => false,
        }
    }
}
