//! Products on the kG-cobar construction `T_{1,G}` and the resulting
//! ring structure on `⊕ PPⁿ_{1,g}`.
//!
//! A cochain `f ⊠ c` has its tensor legs in `H^{⊗n}` and `c` a grouplike;
//! its differential is the twisted cobar differential for the pair `(1, c)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalgebra::{tensor_product, wordvec_add, CoalgebraSpec, LinComb, SpecError, Word, WordVec};
use crate::cobar::{
    differential_matrix, slice_cohomology, slice_degrees, sparse_terms, total_dim, word_degree, Cobar, CobarError,
    SparseTerm, WordComplex,
};
use crate::field::Scalar;
use crate::linalg::{self, QuotientSolver, SparseVec};

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("cochain does not belong to spec {0}")]
    SpecMismatch(String),
    #[error("basis element {0} is not grouplike")]
    NotGrouplike(String),
    #[error("spec {0} has no identity grouplike")]
    NoIdentity(String),
    #[error("spec {0} has no multiplication tables for grouplikes")]
    NotHopf(String),
    #[error("grouplikes of {0} do not commute")]
    NonAbelian(String),
    #[error("product leaves the truncated basis: {0}")]
    Undefined(String),
    #[error("product of classes is not a cocycle at {0}")]
    NotClosed(String),
    #[error(transparent)]
    Cobar(#[from] CobarError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// `Σ f_i ⊠ g` in bidegree `(n, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DCochain {
    pub n: usize,
    pub g: usize,
    pub terms: WordVec,
}

impl DCochain {
    pub fn new(n: usize, g: usize, terms: WordVec) -> Self {
        let mut terms = terms;
        terms.retain(|_, c| !c.is_zero());
        DCochain { n, g, terms }
    }

    pub fn zero(n: usize, g: usize) -> Self {
        DCochain {
            n,
            g,
            terms: WordVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DCochain) -> DCochain {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            wordvec_add(&mut terms, w.clone(), c.clone());
        }
        DCochain::new(self.n, self.g, terms)
    }

    pub fn scale(&self, c: &Scalar) -> DCochain {
        DCochain::new(
            self.n,
            self.g,
            self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect(),
        )
    }
}

/// The dg algebra `(T_{1,G}(H), ⊙, ∂)` over one spec.
pub struct DCobar<'a> {
    spec: &'a CoalgebraSpec,
    id: usize,
    cx: Vec<Cobar<'a>>,
}

impl<'a> DCobar<'a> {
    pub fn new(spec: &'a CoalgebraSpec) -> Result<Self, RingError> {
        let id = spec
            .grouplike_identity()
            .ok_or_else(|| RingError::NoIdentity(spec.name().to_string()))?;
        if spec.hopf().is_none() {
            return Err(RingError::NotHopf(spec.name().to_string()));
        }
        let cx = (0..spec.grouplikes().len())
            .map(|g| Cobar::new(spec, id, g))
            .collect::<Result<_, _>>()?;
        Ok(DCobar { spec, id, cx })
    }

    pub fn spec(&self) -> &CoalgebraSpec {
        self.spec
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    /// `1_k ⊠ 1`.
    pub fn unit(&self) -> DCochain {
        DCochain::new(0, self.id, std::iter::once((Word::new(), Scalar::one())).collect())
    }

    fn check(&self, x: &DCochain) -> Result<(), RingError> {
        let dim = self.spec.dim() as u32;
        let ok = x.g < self.cx.len() && x.terms.keys().all(|w| w.len() == x.n && w.iter().all(|&b| b < dim));
        if ok {
            Ok(())
        } else {
            Err(RingError::SpecMismatch(self.spec.name().to_string()))
        }
    }

    fn group_mul(&self, g: usize, h: usize) -> Result<usize, RingError> {
        self.spec.grouplike_mul(g, h).ok_or_else(|| {
            let l = |k| self.spec.grouplike_label(k);
            RingError::Undefined(format!("{}·{}", l(g), l(h)))
        })
    }

    fn table(&self, left: bool, g: usize, b: u32) -> Result<&LinComb, RingError> {
        let t = self.spec.hopf().expect("checked in new");
        let side = if left { &t.left } else { &t.right };
        side[g][b as usize].as_ref().ok_or_else(|| {
            let (a, x) = (self.spec.grouplike_label(g), self.spec.label(b as usize));
            RingError::Undefined(if left { format!("{a}·{x}") } else { format!("{x}·{a}") })
        })
    }

    /// Multiplies leg `i` of `w` by `gs[i]` on the left (or right).
    fn legwise(&self, left: bool, gs: &[usize], w: &[u32]) -> Result<WordVec, RingError> {
        let mut acc: WordVec = std::iter::once((Word::new(), Scalar::one())).collect();
        for (&g, &b) in gs.iter().zip(w) {
            let leg = self.table(left, g, b)?;
            let mut next = WordVec::new();
            for (pre, c) in &acc {
                for (x, d) in leg {
                    let mut v = pre.clone();
                    v.push(*x);
                    wordvec_add(&mut next, v, c * d);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `x ⊙ y = x ⊗ ((g⊗⋯⊗g)·y)` for `x` of G-degree `g`.
    pub fn product(&self, x: &DCochain, y: &DCochain) -> Result<DCochain, RingError> {
        self.check(x)?;
        self.check(y)?;
        let gs = vec![x.g; y.n];
        let mut terms = WordVec::new();
        for (v, b) in &y.terms {
            let moved = self.legwise(true, &gs, v)?;
            for (w, a) in &x.terms {
                let ab = a * b;
                for (u, c) in &moved {
                    let mut t = w.clone();
                    t.extend_from_slice(u);
                    wordvec_add(&mut terms, t, &ab * c);
                }
            }
        }
        let out = DCochain::new(x.n + y.n, self.group_mul(x.g, y.g)?, terms);
        debug_assert_eq!(Ok(&out), self.product_general(x, y).as_ref());
        Ok(out)
    }

    /// `(f⊠c) ⊙ (g⊠d) = Σ (f ⊗ (c₁⊗⋯⊗c_m)g) ⊠ c_{m+1}d`, with the iterated
    /// coproduct of `c` taken from the spec's Δ rather than assumed grouplike.
    pub fn product_general(&self, x: &DCochain, y: &DCochain) -> Result<DCochain, RingError> {
        self.check(x)?;
        self.check(y)?;
        let c = self.spec.grouplike_basis(x.g) as u32;
        let mut iterated: Vec<(Vec<u32>, Scalar)> = vec![(vec![c], Scalar::one())];
        for _ in 0..y.n {
            let mut next = Vec::new();
            for (legs, k) in &iterated {
                for (a, b, e) in self.spec.delta(legs[0] as usize) {
                    let mut l = vec![*a, *b];
                    l.extend_from_slice(&legs[1..]);
                    next.push((l, k * e));
                }
            }
            iterated = next;
        }
        let as_grouplike = |b: u32| {
            self.spec
                .grouplike_of_basis(b as usize)
                .ok_or_else(|| RingError::NotGrouplike(self.spec.label(b as usize).to_string()))
        };
        let mut terms = WordVec::new();
        let mut tail = None;
        for (legs, k) in &iterated {
            let gs: Vec<usize> = legs[..y.n].iter().map(|&b| as_grouplike(b)).collect::<Result<_, _>>()?;
            let last = as_grouplike(legs[y.n])?;
            let d = self.group_mul(last, y.g)?;
            if *tail.get_or_insert(d) != d {
                return Err(RingError::SpecMismatch(self.spec.name().to_string()));
            }
            for (v, b) in &y.terms {
                for (u, e) in self.legwise(true, &gs, v)? {
                    for (w, a) in &x.terms {
                        let mut t = w.clone();
                        t.extend_from_slice(&u);
                        wordvec_add(&mut terms, t, &(&(a * b) * &e) * k);
                    }
                }
            }
        }
        Ok(DCochain::new(x.n + y.n, tail.unwrap_or(x.g), terms))
    }

    /// `∂(f⊠c) = (1⊗f − D_n f + (−1)^{n+1} f⊗c) ⊠ c`.
    pub fn differential(&self, x: &DCochain) -> Result<DCochain, RingError> {
        self.check(x)?;
        let cx = &self.cx[x.g];
        Ok(DCochain::new(x.n + 1, x.g, cx.apply_vec(&x.terms)))
    }

    /// `ad_l(a)(f₁⊗⋯⊗f_n ⊠ c) = a f₁ a⁻¹ ⊗ ⋯ ⊗ a f_n a⁻¹ ⊠ a c a⁻¹` for a
    /// grouplike `a`, which is the Sweedler-notation formula with
    /// `Δⁿ(a) = a⊗⋯⊗a` and `S(a) = a⁻¹`.
    pub fn adjoint(&self, a: usize, x: &DCochain) -> Result<DCochain, RingError> {
        self.check(x)?;
        if a >= self.cx.len() {
            return Err(RingError::NotGrouplike(format!("#{a}")));
        }
        let inv = self
            .spec
            .grouplike_inv(a)
            .ok_or_else(|| RingError::Undefined(format!("{}⁻¹", self.spec.grouplike_label(a))))?;
        let c = self.conjugate_grouplike(a, inv, x.g)?;
        let left = vec![a; x.n];
        let right = vec![inv; x.n];
        let mut terms = WordVec::new();
        for (w, k) in &x.terms {
            for (u, e) in self.legwise(true, &left, w)? {
                for (v, f) in self.legwise(false, &right, &u)? {
                    wordvec_add(&mut terms, v, &(k * &e) * &f);
                }
            }
        }
        Ok(DCochain::new(x.n, c, terms))
    }

    fn conjugate_grouplike(&self, a: usize, inv: usize, g: usize) -> Result<usize, RingError> {
        let b = self.spec.grouplike_basis(g) as u32;
        let l = self.table(true, a, b)?;
        if let [(m, s)] = l.as_slice() {
            if let [(r, t)] = self.table(false, inv, *m)?.as_slice() {
                if (s * t).is_one() {
                    if let Some(k) = self.spec.grouplike_of_basis(*r as usize) {
                        return Ok(k);
                    }
                }
            }
        }
        Err(RingError::NotGrouplike(format!(
            "{}·{}·{}⁻¹",
            self.spec.grouplike_label(a),
            self.spec.label(b as usize),
            self.spec.grouplike_label(a)
        )))
    }

    fn require_abelian(&self) -> Result<(), RingError> {
        let k = self.cx.len();
        for g in 0..k {
            for h in 0..g {
                if self.spec.grouplike_mul(g, h) != self.spec.grouplike_mul(h, g) {
                    return Err(RingError::NonAbelian(self.spec.name().to_string()));
                }
            }
        }
        Ok(())
    }
}

/// Seeded sparse cochains with small integer coefficients.
pub struct CochainSampler {
    rng: ChaCha8Rng,
    dim: u32,
    grouplikes: usize,
}

impl CochainSampler {
    pub fn new(spec: &CoalgebraSpec, seed: u64) -> Self {
        CochainSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim: spec.dim() as u32,
            grouplikes: spec.grouplikes().len(),
        }
    }

    pub fn grouplike(&mut self) -> usize {
        self.rng.gen_range(0..self.grouplikes)
    }

    pub fn cochain(&mut self, n: usize, g: usize) -> DCochain {
        let terms = self.rng.gen_range(1..=3);
        let mut out = WordVec::new();
        for _ in 0..terms {
            let w: Word = (0..n).map(|_| self.rng.gen_range(0..self.dim)).collect();
            let mut c = self.rng.gen_range(1..=3i64);
            if self.rng.gen_bool(0.5) {
                c = -c;
            }
            wordvec_add(&mut out, w, Scalar::from_int(c));
        }
        DCochain::new(n, g, out)
    }

    pub fn any(&mut self, n_max: usize) -> DCochain {
        let n = self.rng.gen_range(0..=n_max);
        let g = self.grouplike();
        self.cochain(n, g)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }
}

/// Outcome of a seeded identity check. Samples whose products leave a
/// windowed basis are redrawn and counted in `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCheck {
    pub identity: String,
    pub samples: usize,
    pub skipped: usize,
    pub seed: u64,
    pub violation: Option<String>,
}

impl SampleCheck {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn describe(d: &DCobar, x: &DCochain) -> String {
    let terms: Vec<String> = x
        .terms
        .iter()
        .map(|(w, c)| {
            let legs: Vec<&str> = w.iter().map(|&b| d.spec.label(b as usize)).collect();
            format!("{c}·[{}]", legs.join(" ⊗ "))
        })
        .collect();
    format!("({} ⊠ {})", terms.join(" + "), d.spec.grouplike_label(x.g))
}

fn run_samples(
    identity: &str,
    spec: &CoalgebraSpec,
    samples: usize,
    seed: u64,
    mut one: impl FnMut(&DCobar, &mut CochainSampler) -> Result<Option<String>, RingError>,
) -> Result<SampleCheck, RingError> {
    let d = DCobar::new(spec)?;
    let mut s = CochainSampler::new(spec, seed);
    let (mut done, mut skipped) = (0, 0);
    let mut out = SampleCheck {
        identity: identity.into(),
        samples,
        skipped: 0,
        seed,
        violation: None,
    };
    while done < samples {
        match one(&d, &mut s) {
            Ok(Some(v)) => {
                out.violation = Some(v);
                break;
            }
            Ok(None) => done += 1,
            Err(RingError::Undefined(_)) if skipped < 50 * samples => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    out.skipped = skipped;
    Ok(out)
}

/// `∂(x⊙y) = ∂x⊙y + (−1)ⁿ x⊙∂y` on seeded pairs with `n, m ≤ 3`.
pub fn leibniz_check(spec: &CoalgebraSpec, samples: usize, seed: u64) -> Result<SampleCheck, RingError> {
    run_samples("leibniz", spec, samples, seed, |d, s| {
        let (x, y) = (s.any(3), s.any(3));
        let lhs = d.differential(&d.product(&x, &y)?)?;
        let sign = if x.n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let rhs = d
            .product(&d.differential(&x)?, &y)?
            .add(&d.product(&x, &d.differential(&y)?)?.scale(&sign));
        Ok((lhs != rhs).then(|| format!("x = {}, y = {}", describe(d, &x), describe(d, &y))))
    })
}

/// `(x⊙y)⊙z = x⊙(y⊙z)` on seeded triples with degrees `≤ 2`.
pub fn associativity_check(spec: &CoalgebraSpec, samples: usize, seed: u64) -> Result<SampleCheck, RingError> {
    run_samples("associativity", spec, samples, seed, |d, s| {
        let (x, y, z) = (s.any(2), s.any(2), s.any(2));
        let lhs = d.product(&d.product(&x, &y)?, &z)?;
        let rhs = d.product(&x, &d.product(&y, &z)?)?;
        Ok((lhs != rhs).then(|| {
            format!(
                "x = {}, y = {}, z = {}",
                describe(d, &x),
                describe(d, &y),
                describe(d, &z)
            )
        }))
    })
}

/// `1 ⊙ x = x = x ⊙ 1`.
pub fn unit_check(spec: &CoalgebraSpec, samples: usize, seed: u64) -> Result<SampleCheck, RingError> {
    run_samples("unit", spec, samples, seed, |d, s| {
        let x = s.any(3);
        let one = d.unit();
        let ok = d.product(&one, &x)? == x && d.product(&x, &one)? == x && d.differential(&one)?.is_zero();
        Ok((!ok).then(|| describe(d, &x)))
    })
}

/// `∂ ∘ ad_l(a) = ad_l(a) ∘ ∂` for grouplike `a`.
pub fn ad_chain_map_check(spec: &CoalgebraSpec, samples: usize, seed: u64) -> Result<SampleCheck, RingError> {
    run_samples("ad-chain-map", spec, samples, seed, |d, s| {
        d.require_abelian()?;
        let (a, x) = (s.grouplike(), s.any(3));
        let lhs = d.differential(&d.adjoint(a, &x)?)?;
        let rhs = d.adjoint(a, &d.differential(&x)?)?;
        Ok((lhs != rhs).then(|| format!("a = {}, x = {}", d.spec.grouplike_label(a), describe(d, &x))))
    })
}

/// `ad_l(ab) = ad_l(a) ∘ ad_l(b)` and `ad_l(a)(x⊙y) = ad_l(a)x ⊙ ad_l(a)y`.
pub fn action_law_check(spec: &CoalgebraSpec, samples: usize, seed: u64) -> Result<SampleCheck, RingError> {
    run_samples("ad-action", spec, samples, seed, |d, s| {
        d.require_abelian()?;
        let (a, b) = (s.grouplike(), s.grouplike());
        let (x, y) = (s.any(2), s.any(2));
        let ab = d.group_mul(a, b)?;
        let law = d.adjoint(ab, &x)? == d.adjoint(a, &d.adjoint(b, &x)?)?;
        let prod = d.adjoint(a, &d.product(&x, &y)?)? == d.product(&d.adjoint(a, &x)?, &d.adjoint(a, &y)?)?;
        let l = |k| d.spec.grouplike_label(k);
        Ok((!(law && prod)).then(|| {
            format!(
                "a = {}, b = {}, x = {}, y = {}",
                l(a),
                l(b),
                describe(d, &x),
                describe(d, &y)
            )
        }))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingClass {
    pub n: usize,
    pub g: String,
    pub degree: Vec<i64>,
    pub rep: Vec<SparseTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingProduct {
    pub left: usize,
    pub right: usize,
    pub result: Vec<(usize, Scalar)>,
}

/// Classes of `⊕_{n ≤ n_max, g} PPⁿ_{1,g}` and the structure constants of `⊙`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingTable {
    pub spec: String,
    pub n_max: usize,
    pub deg_max: Option<i64>,
    pub classes: Vec<RingClass>,
    pub products: Vec<RingProduct>,
}

impl RingTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn product(&self, left: usize, right: usize) -> Option<&[(usize, Scalar)]> {
        self.products
            .iter()
            .find(|p| p.left == left && p.right == right)
            .map(|p| p.result.as_slice())
    }

    pub fn classes_at(&self, n: usize, g: &str) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].n == n && self.classes[i].g == g)
            .collect()
    }
}

type SliceKey = (usize, usize, Vec<i64>);

struct Slice {
    classes: Vec<usize>,
    words: HashMap<Word, usize>,
    solver: QuotientSolver<Scalar>,
}

fn as_sparse(words: &HashMap<Word, usize>, v: &WordVec) -> Option<SparseVec<Scalar>> {
    let entries = v
        .iter()
        .map(|(w, c)| words.get(w).map(|&i| (i, c.clone())))
        .collect::<Option<Vec<_>>>()?;
    Some(SparseVec::from_entries(entries))
}

/// Adds a seeded random coboundary to every representative, or nothing.
fn perturbation(cx: &Cobar, n: usize, degree: &[i64], rng: &mut Option<ChaCha8Rng>) -> Result<WordVec, RingError> {
    let Some(rng) = rng.as_mut() else {
        return Ok(WordVec::new());
    };
    if n == 0 {
        return Ok(WordVec::new());
    }
    let below = cx.words(n - 1, degree)?;
    if below.is_empty() {
        return Ok(WordVec::new());
    }
    let mut f = WordVec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let w = below[rng.gen_range(0..below.len())].clone();
        wordvec_add(&mut f, w, Scalar::from_int(rng.gen_range(1..=4)));
    }
    Ok(cx.apply_vec(&f))
}

fn build_table(
    spec: &CoalgebraSpec,
    n_max: usize,
    deg_max: Option<i64>,
    mut rng: Option<ChaCha8Rng>,
) -> Result<RingTable, RingError> {
    let d = DCobar::new(spec)?;
    let k = spec.grouplikes().len();
    let mut bound = deg_max;
    let mut classes = Vec::new();
    let mut reps: Vec<DCochain> = Vec::new();
    let mut slices: BTreeMap<SliceKey, Slice> = BTreeMap::new();
    for g in 0..k {
        let cx = &d.cx[g];
        for n in 0..=n_max {
            let (degrees, b) = slice_degrees(spec, n, deg_max)?;
            bound = bound.or(b);
            for degree in degrees {
                let sc = slice_cohomology(cx, n, &degree, true)?;
                let start = classes.len();
                let mut rep_vecs = Vec::new();
                for r in sc.reps {
                    let r = DCochain::new(n, g, r).add(&DCochain::new(n, g, perturbation(cx, n, &degree, &mut rng)?));
                    classes.push(RingClass {
                        n,
                        g: spec.grouplike_label(g).to_string(),
                        degree: degree.clone(),
                        rep: sparse_terms(spec, &r.terms),
                    });
                    rep_vecs.push(r.clone());
                    reps.push(r);
                }
                let (words, boundaries) = if n == 0 {
                    (vec![Word::new()], Vec::new())
                } else {
                    let m = differential_matrix(spec, d.id, g, n - 1, &degree)?;
                    (m.codomain, m.columns)
                };
                let words: HashMap<Word, usize> = words.into_iter().enumerate().map(|(i, w)| (w, i)).collect();
                let rep_sparse: Vec<SparseVec<Scalar>> = rep_vecs
                    .iter()
                    .map(|r| as_sparse(&words, &r.terms).expect("representative lies in its slice"))
                    .collect();
                slices.insert(
                    (n, g, degree),
                    Slice {
                        classes: (start..classes.len()).collect(),
                        solver: QuotientSolver::new(&boundaries, &rep_sparse),
                        words,
                    },
                );
            }
        }
    }
    let mut products = Vec::new();
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            if a.n + b.n > n_max {
                continue;
            }
            let degree: Vec<i64> = classes[i]
                .degree
                .iter()
                .zip(&classes[j].degree)
                .map(|(x, y)| x + y)
                .collect();
            if bound.is_some_and(|m| degree[spec.z_coord()] > m) {
                continue;
            }
            let p = d.product(a, b)?;
            debug_assert!(p.terms.keys().all(|w| word_degree(spec, w) == degree));
            let Some(slice) = slices.get(&(p.n, p.g, degree.clone())) else {
                if p.is_zero() {
                    products.push(RingProduct {
                        left: i,
                        right: j,
                        result: Vec::new(),
                    });
                    continue;
                }
                return Err(RingError::NotClosed(format!("{} ⊙ {}", i, j)));
            };
            let v = as_sparse(&slice.words, &p.terms).ok_or_else(|| RingError::NotClosed(format!("{i} ⊙ {j}")))?;
            let coords = slice
                .solver
                .solve(&v)
                .ok_or_else(|| RingError::NotClosed(format!("{i} ⊙ {j}")))?;
            let result = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (slice.classes[t], c))
                .collect();
            products.push(RingProduct {
                left: i,
                right: j,
                result,
            });
        }
    }
    Ok(RingTable {
        spec: spec.name().to_string(),
        n_max,
        deg_max: bound,
        classes,
        products,
    })
}

/// Structure constants of `⊙` on canonical representatives.
pub fn ring_structure(spec: &CoalgebraSpec, n_max: usize, deg_max: Option<i64>) -> Result<RingTable, RingError> {
    build_table(spec, n_max, deg_max, None)
}

/// Same table with every representative shifted by a seeded coboundary.
pub fn ring_structure_perturbed(
    spec: &CoalgebraSpec,
    n_max: usize,
    deg_max: Option<i64>,
    seed: u64,
) -> Result<RingTable, RingError> {
    build_table(spec, n_max, deg_max, Some(ChaCha8Rng::seed_from_u64(seed)))
}

/// True when perturbed representatives give the same structure constants.
pub fn well_defined_check(
    spec: &CoalgebraSpec,
    n_max: usize,
    deg_max: Option<i64>,
    seed: u64,
) -> Result<bool, RingError> {
    let a = ring_structure(spec, n_max, deg_max)?;
    let b = ring_structure_perturbed(spec, n_max, deg_max, seed)?;
    Ok(a.products == b.products && a.classes.len() == b.classes.len())
}

/// Exterior-algebra behaviour of the degree-one classes at `g = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorCheck {
    pub degree_one: usize,
    pub squares_vanish: bool,
    pub anticommute: bool,
    /// Rank of `{tᵢ ⊙ tⱼ : i < j}` in `PP²`.
    pub span: usize,
}

pub fn exterior_check(table: &RingTable, identity: &str) -> ExteriorCheck {
    let ones = table.classes_at(1, identity);
    let vec_of = |i: usize, j: usize| -> SparseVec<Scalar> {
        SparseVec::from_entries(table.product(i, j).unwrap_or(&[]).to_vec())
    };
    let mut squares_vanish = true;
    let mut anticommute = true;
    let mut span_cols = Vec::new();
    for (a, &i) in ones.iter().enumerate() {
        squares_vanish &= vec_of(i, i).is_zero();
        for &j in &ones[a + 1..] {
            let ij = vec_of(i, j);
            anticommute &= ij.add(&vec_of(j, i)).is_zero();
            span_cols.push(ij);
        }
    }
    ExteriorCheck {
        degree_one: ones.len(),
        squares_vanish,
        anticommute,
        span: linalg::rank(&span_cols),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KunnethMismatch {
    pub g: String,
    pub h: String,
    pub n: usize,
    pub tensor: usize,
    pub convolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KunnethCheck {
    pub checked: usize,
    pub mismatches: Vec<KunnethMismatch>,
}

impl KunnethCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `dim PPⁿ_{g₁g₂, h₁h₂}(A⊗B) = Σ_s dim PP^s_{g₁,h₁}(A) · dim PP^{n−s}_{g₂,h₂}(B)`.
/// `pairs` lists `((g₁, h₁), (g₂, h₂))`; `None` means every combination.
pub fn kunneth_check(
    a: &CoalgebraSpec,
    b: &CoalgebraSpec,
    pairs: Option<&[((usize, usize), (usize, usize))]>,
    n_max: usize,
) -> Result<KunnethCheck, RingError> {
    let t = tensor_product(a, b)?;
    let all: Vec<((usize, usize), (usize, usize))>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            let (ka, kb) = (a.grouplikes().len(), b.grouplikes().len());
            all = (0..ka)
                .flat_map(|g1| (0..ka).map(move |h1| (g1, h1)))
                .flat_map(|p| (0..kb).flat_map(move |g2| (0..kb).map(move |h2| (p, (g2, h2)))))
                .collect();
            &all
        }
    };
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let joint =
        |x: usize, y: usize| t.grouplike_by_label(&format!("{}|{}", a.grouplike_label(x), b.grouplike_label(y)));
    for &((g1, h1), (g2, h2)) in pairs {
        let da: Vec<usize> = (0..=n_max)
            .map(|n| total_dim(a, g1, h1, n, None))
            .collect::<Result<_, _>>()?;
        let db: Vec<usize> = (0..=n_max)
            .map(|n| total_dim(b, g2, h2, n, None))
            .collect::<Result<_, _>>()?;
        let (g, h) = (joint(g1, g2)?, joint(h1, h2)?);
        for n in 0..=n_max {
            let tensor = total_dim(&t, g, h, n, None)?;
            let convolution = (0..=n).map(|s| da[s] * db[n - s]).sum();
            checked += 1;
            if tensor != convolution {
                mismatches.push(KunnethMismatch {
                    g: t.grouplike_label(g).to_string(),
                    h: t.grouplike_label(h).to_string(),
                    n,
                    tensor,
                    convolution,
                });
            }
        }
    }
    Ok(KunnethCheck { checked, mismatches })
}

#[cfg(test)]
mod tests;
