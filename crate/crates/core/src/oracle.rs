//! Independent check of cobar dimensions: the graded dual algebra `A = C°`
//! and `Tor^A_n(kξ_g, kξ_h)` from the two-sided bar complex.
//!
//! Nothing here calls into the cobar engine's complex code; only the
//! elimination layer is shared.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::coalgebra::{CoalgebraSpec, SpecError, Word};
use crate::cobar::{compute_report, CobarError, CohomologyRequest, PairSelection};
use crate::field::Scalar;
use crate::linalg::{self, SparseVec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("spec {0} carries no grading compatible with Δ")]
    NotGraded(String),
    #[error("dual multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("dual of the counit is not a unit on {0}")]
    NotUnital(String),
    #[error("augmentation index {0} out of range")]
    BadAugmentation(usize),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Cobar(#[from] CobarError),
}

type Product = Vec<(u32, Scalar)>;

/// Locally finite graded algebra given by structure constants.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    pub degrees: Vec<Vec<i64>>,
    pub z_coord: usize,
    /// `a·b` for basis pairs with nonzero product.
    pub table: HashMap<(u32, u32), Product>,
    pub unit: Product,
    /// `(grouplike label, index of its dual)`; `ξ_g` is the coordinate
    /// function of that dual basis element.
    pub augmentations: Vec<(String, u32)>,
    pub deg_max: Option<i64>,
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> &[(u32, Scalar)] {
        self.table.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    fn mul_vec(&self, x: &BTreeMap<u32, Scalar>, y: &BTreeMap<u32, Scalar>) -> BTreeMap<u32, Scalar> {
        let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (a, c) in x {
            for (b, d) in y {
                for (k, e) in self.mul(*a, *b) {
                    let t = out.entry(*k).or_insert_with(Scalar::zero);
                    *t += &(&(c * d) * e);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn basis_vec(a: u32) -> BTreeMap<u32, Scalar> {
        std::iter::once((a, Scalar::one())).collect()
    }

    /// Checks `(ab)c = a(bc)` on all basis triples and the unit law.
    pub fn check_associativity(&self) -> Result<(), OracleError> {
        let n = self.dim() as u32;
        let lefts: Vec<(u32, u32)> = {
            let mut v: Vec<_> = self.table.keys().copied().collect();
            v.sort();
            v
        };
        let bad = lefts.par_iter().find_map_first(|&(a, b)| {
            let ab: BTreeMap<u32, Scalar> = self.mul(a, b).iter().cloned().collect();
            (0..n).find_map(|c| {
                let l = self.mul_vec(&ab, &Self::basis_vec(c));
                let bc: BTreeMap<u32, Scalar> = self.mul(b, c).iter().cloned().collect();
                let r = self.mul_vec(&Self::basis_vec(a), &bc);
                (l != r).then_some((a, b, c))
            })
        });
        // triples whose first product vanishes still need a(bc) = 0
        let bad = bad.or_else(|| {
            lefts.par_iter().find_map_first(|&(b, c)| {
                let bc: BTreeMap<u32, Scalar> = self.mul(b, c).iter().cloned().collect();
                (0..n).filter(|a| !self.table.contains_key(&(*a, b))).find_map(|a| {
                    let r = self.mul_vec(&Self::basis_vec(a), &bc);
                    (!r.is_empty()).then_some((a, b, c))
                })
            })
        });
        if let Some((a, b, c)) = bad {
            let l = |i: u32| self.labels[i as usize].clone();
            return Err(OracleError::NotAssociative(l(a), l(b), l(c)));
        }
        let unit: BTreeMap<u32, Scalar> = self.unit.iter().cloned().collect();
        for a in 0..n {
            let e = Self::basis_vec(a);
            if self.mul_vec(&unit, &e) != e || self.mul_vec(&e, &unit) != e {
                return Err(OracleError::NotUnital(self.labels[a as usize].clone()));
            }
        }
        Ok(())
    }

    /// Transposes the multiplication back into a comultiplication on the
    /// dual basis: `Δ(b) = Σ coeff_b(x·y) x⊗y`.
    pub fn dual_comultiplication(&self) -> Vec<Vec<(u32, u32, Scalar)>> {
        let mut out = vec![Vec::new(); self.dim()];
        let mut keys: Vec<_> = self.table.keys().copied().collect();
        keys.sort();
        for (x, y) in keys {
            for (b, c) in &self.table[&(x, y)] {
                out[*b as usize].push((x, y, c.clone()));
            }
        }
        out
    }

    /// Left and right labels from the idempotents `dual(g)`: `a` gets
    /// `(g, h)` when `dual(g)·a = a = a·dual(h)` and the other idempotents
    /// kill it. `None` unless every basis element is labelled and the
    /// product respects the labels.
    fn idempotent_sides(&self) -> Option<Vec<(u32, u32)>> {
        let n = self.dim() as u32;
        let idem: Vec<u32> = self.augmentations.iter().map(|(_, i)| *i).collect();
        let mut sides = Vec::with_capacity(n as usize);
        for a in 0..n {
            let side = |left: bool| -> Option<u32> {
                let mut found = None;
                for (k, &e) in idem.iter().enumerate() {
                    let p = if left { self.mul(e, a) } else { self.mul(a, e) };
                    match p {
                        [] => {}
                        [(b, c)] if *b == a && c.is_one() && found.is_none() => found = Some(k as u32),
                        _ => return None,
                    }
                }
                found
            };
            sides.push((side(true)?, side(false)?));
        }
        for (&(a, b), prod) in &self.table {
            let (la, ra) = sides[a as usize];
            let (lb, rb) = sides[b as usize];
            if ra != lb || prod.iter().any(|(k, _)| sides[*k as usize] != (la, rb)) {
                return None;
            }
        }
        Some(sides)
    }
}

/// The graded dual `C°`, restricted to z-degrees `≤ deg_max`:
/// `dual(b₁)·dual(b₂) = Σ_b coeff_{b₁⊗b₂}(Δb) dual(b)`.
pub fn graded_dual(spec: &CoalgebraSpec, deg_max: Option<i64>) -> Result<GradedAlgebra, OracleError> {
    let meta = spec.meta();
    if meta.ungraded {
        return Err(OracleError::NotGraded(spec.name().to_string()));
    }
    let trivial = spec.degree_classes().iter().all(|(d, _)| d.iter().all(|&x| x == 0));
    let bound = match (deg_max, meta.truncated, meta.exact_degree_max) {
        (Some(d), true, Some(m)) => Some(d.min(m)),
        (Some(d), _, _) => Some(d),
        (None, true, Some(m)) => Some(m),
        (None, true, None) if !trivial => return Err(SpecError::InfiniteSlice.into()),
        (None, _, _) => None,
    };
    let zc = spec.z_coord();
    let keep: Vec<usize> = (0..spec.dim())
        .filter(|&b| bound.is_none_or(|m| spec.grading(b)[zc] <= m))
        .collect();
    let new_index: HashMap<usize, u32> = keep.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
    let mut table: HashMap<(u32, u32), BTreeMap<u32, Scalar>> = HashMap::new();
    for &b in &keep {
        for (x, y, c) in spec.delta(b) {
            let (Some(&x), Some(&y)) = (new_index.get(&(*x as usize)), new_index.get(&(*y as usize))) else {
                continue;
            };
            let e = table
                .entry((x, y))
                .or_default()
                .entry(new_index[&b])
                .or_insert_with(Scalar::zero);
            *e += c;
        }
    }
    let table = table
        .into_iter()
        .filter_map(|(k, v)| {
            let v: Product = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            (!v.is_empty()).then_some((k, v))
        })
        .collect();
    let unit = keep
        .iter()
        .enumerate()
        .filter(|(_, &b)| !spec.counit(b).is_zero())
        .map(|(i, &b)| (i as u32, spec.counit(b).clone()))
        .collect();
    let augmentations = spec
        .grouplikes()
        .iter()
        .enumerate()
        .map(|(k, g)| (spec.grouplike_label(k).to_string(), new_index[&g.basis]))
        .collect();
    let alg = GradedAlgebra {
        name: format!("({})°", spec.name()),
        labels: keep.iter().map(|&b| format!("{}*", spec.label(b))).collect(),
        degrees: keep.iter().map(|&b| spec.grading(b).to_vec()).collect(),
        z_coord: zc,
        table,
        unit,
        augmentations,
        deg_max: bound,
    };
    alg.check_associativity()?;
    Ok(alg)
}

/// Two-sided bar complex `kξ_g ⊗ A^{⊗n} ⊗ kξ_h` with
/// `d(a₁…a_n) = ξ_g(a₁)a₂…a_n + Σ (−1)^i a₁…a_ia_{i+1}…a_n + (−1)^n ξ_h(a_n)a₁…a_{n−1}`.
pub struct BarComplex<'a> {
    alg: &'a GradedAlgebra,
    g: u32,
    h: u32,
    gi: u32,
    hi: u32,
    sides: Option<Vec<(u32, u32)>>,
    classes: Vec<(Vec<i64>, Vec<u32>)>,
}

impl<'a> BarComplex<'a> {
    pub fn new(alg: &'a GradedAlgebra, g: usize, h: usize) -> Result<Self, OracleError> {
        let aug = |k: usize| {
            alg.augmentations
                .get(k)
                .map(|x| x.1)
                .ok_or(OracleError::BadAugmentation(k))
        };
        let mut classes: BTreeMap<Vec<i64>, Vec<u32>> = BTreeMap::new();
        for (i, d) in alg.degrees.iter().enumerate() {
            classes.entry(d.clone()).or_default().push(i as u32);
        }
        Ok(BarComplex {
            alg,
            g: aug(g)?,
            h: aug(h)?,
            gi: g as u32,
            hi: h as u32,
            sides: alg.idempotent_sides(),
            classes: classes.into_iter().collect(),
        })
    }

    /// Words of length `n` and total degree `degree`, sorted.
    pub fn words(&self, n: usize, degree: &[i64]) -> Vec<Word> {
        let mut out = Vec::new();
        let mut w = Word::new();
        self.rec(n, degree.to_vec(), &mut w, &mut out);
        out.sort();
        out
    }

    fn rec(&self, n: usize, rest: Vec<i64>, w: &mut Word, out: &mut Vec<Word>) {
        if n == 0 {
            if rest.iter().all(|&x| x == 0) {
                out.push(w.clone());
            }
            return;
        }
        for (d, elems) in &self.classes {
            if d.iter().zip(&rest).all(|(a, r)| a <= r) {
                let next: Vec<i64> = rest.iter().zip(d).map(|(r, a)| r - a).collect();
                for &a in elems {
                    w.push(a);
                    self.rec(n - 1, next.clone(), w, out);
                    w.pop();
                }
            }
        }
    }

    fn key(&self, w: &[u32]) -> SmallVec<[(u32, u32); 4]> {
        let mut k = SmallVec::new();
        let Some(sides) = &self.sides else { return k };
        let mut prev = self.gi;
        for &a in w {
            let (l, r) = sides[a as usize];
            if l != prev {
                k.push((prev, l));
            }
            prev = r;
        }
        if prev != self.hi {
            k.push((prev, self.hi));
        }
        k
    }

    pub fn apply(&self, w: &[u32]) -> BTreeMap<Word, Scalar> {
        let n = w.len();
        let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut add = |v: Word, c: Scalar| {
            let e = out.entry(v).or_insert_with(Scalar::zero);
            *e += &c;
        };
        if n == 0 {
            return BTreeMap::new();
        }
        if w[0] == self.g {
            add(w[1..].iter().copied().collect(), Scalar::one());
        }
        for i in 0..n - 1 {
            let sign = if i % 2 == 0 { -Scalar::one() } else { Scalar::one() };
            for (k, c) in self.alg.mul(w[i], w[i + 1]) {
                let mut v: Word = w[..i].iter().copied().collect();
                v.push(*k);
                v.extend_from_slice(&w[i + 2..]);
                add(v, &sign * c);
            }
        }
        if w[n - 1] == self.h {
            let sign = if n.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
            add(w[..n - 1].iter().copied().collect(), sign);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Number of words and rank of `d_n` on one degree slice.
    pub fn rank(&self, n: usize, degree: &[i64]) -> (usize, usize) {
        let words = self.words(n, degree);
        let count = words.len();
        let images: Vec<(Word, BTreeMap<Word, Scalar>)> = words
            .into_par_iter()
            .map(|w| {
                let d = self.apply(&w);
                (w, d)
            })
            .filter(|(_, d)| !d.is_empty())
            .collect();
        let mut groups: BTreeMap<SmallVec<[(u32, u32); 4]>, Vec<BTreeMap<Word, Scalar>>> = BTreeMap::new();
        for (w, d) in images {
            groups.entry(self.key(&w)).or_default().push(d);
        }
        let groups: Vec<_> = groups.into_values().collect();
        let rank = groups
            .par_iter()
            .map(|cols| {
                if cols.len() == 1 {
                    return 1;
                }
                let mut rows: HashMap<&Word, usize> = HashMap::new();
                let cols: Vec<SparseVec<Scalar>> = cols
                    .iter()
                    .map(|d| {
                        let entries = d
                            .iter()
                            .map(|(x, c)| {
                                let next = rows.len();
                                (*rows.entry(x).or_insert(next), c.clone())
                            })
                            .collect();
                        SparseVec::from_entries(entries)
                    })
                    .collect();
                linalg::rank(&cols)
            })
            .sum();
        (count, rank)
    }
}

/// `dim Tor_n^A(kξ_g, kξ_h)` in one degree slice.
pub fn tor_dims(alg: &GradedAlgebra, g: usize, h: usize, n: usize, degree: &[i64]) -> Result<usize, OracleError> {
    let bar = BarComplex::new(alg, g, h)?;
    let (count, out) = if n == 0 {
        (bar.words(0, degree).len(), 0)
    } else {
        bar.rank(n, degree)
    };
    Ok(count - out - bar.rank(n + 1, degree).1)
}

/// `dim Tor_n` for `n = 0..=n_max` in one degree slice, each rank computed once.
pub fn tor_series(
    alg: &GradedAlgebra,
    g: usize,
    h: usize,
    n_max: usize,
    degree: &[i64],
) -> Result<Vec<usize>, OracleError> {
    let bar = BarComplex::new(alg, g, h)?;
    let mut ranks = vec![(bar.words(0, degree).len(), 0)];
    ranks.extend((1..=n_max + 1).map(|n| bar.rank(n, degree)));
    Ok((0..=n_max).map(|n| ranks[n].0 - ranks[n].1 - ranks[n + 1].1).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub g: String,
    pub h: String,
    pub n: usize,
    pub degree: Vec<i64>,
    pub cotor: usize,
    pub tor: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub spec: String,
    pub n_max: usize,
    pub deg_max: Option<i64>,
    pub entries: Vec<ComparisonEntry>,
    pub mismatches: usize,
}

impl ComparisonReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs both engines on every requested slice and lists disagreements.
pub fn compare_cotor_tor(
    spec: &CoalgebraSpec,
    pairs: &PairSelection,
    n_max: usize,
    deg_max: Option<i64>,
) -> Result<ComparisonReport, OracleError> {
    let alg = graded_dual(spec, deg_max)?;
    compare_with_algebra(spec, &alg, pairs, n_max)
}

/// As [`compare_cotor_tor`] with a caller-supplied dual; used to show
/// that a corrupted table is caught.
pub fn compare_with_algebra(
    spec: &CoalgebraSpec,
    alg: &GradedAlgebra,
    pairs: &PairSelection,
    n_max: usize,
) -> Result<ComparisonReport, OracleError> {
    let req = CohomologyRequest {
        pairs: pairs.clone(),
        n_max,
        deg_max: alg.deg_max,
        with_reps: false,
    };
    let cotor = compute_report(spec, &req)?;
    let index: HashMap<&str, usize> = alg
        .augmentations
        .iter()
        .enumerate()
        .map(|(k, (l, _))| (l.as_str(), k))
        .collect();
    let mut slices: BTreeMap<(&str, &str, &[i64]), usize> = BTreeMap::new();
    for e in &cotor.entries {
        let top = slices
            .entry((e.g.as_str(), e.h.as_str(), e.degree.as_slice()))
            .or_default();
        *top = (*top).max(e.n);
    }
    let slices: Vec<_> = slices.into_iter().collect();
    let tor: HashMap<(&str, &str, &[i64]), Vec<usize>> = slices
        .par_iter()
        .map(|&((g, h, d), top)| Ok(((g, h, d), tor_series(alg, index[g], index[h], top, d)?)))
        .collect::<Result<_, OracleError>>()?;
    let entries: Vec<ComparisonEntry> = cotor
        .entries
        .iter()
        .map(|e| {
            let tor = tor[&(e.g.as_str(), e.h.as_str(), e.degree.as_slice())][e.n];
            ComparisonEntry {
                g: e.g.clone(),
                h: e.h.clone(),
                n: e.n,
                degree: e.degree.clone(),
                cotor: e.dim,
                tor,
                matches: tor == e.dim,
            }
        })
        .collect();
    let mismatches = entries.iter().filter(|e| !e.matches).count();
    Ok(ComparisonReport {
        spec: spec.name().to_string(),
        n_max,
        deg_max: alg.deg_max,
        entries,
        mismatches,
    })
}
