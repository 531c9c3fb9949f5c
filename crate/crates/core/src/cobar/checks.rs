use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{
    degree_list, free_columns, slice_cohomology, slice_degrees, to_indexed, total_dim, Cobar, CobarError, WordComplex,
};
use crate::coalgebra::{direct_sum, wordvec_add, CoalgebraSpec, LinComb, Word, WordVec};
use crate::field::Scalar;
use crate::linalg::{self, QuotientSolver, SparseVec};

/// Cobar complex `ΩC` on `C̄ = ker ε` with `Δ̄(c) = Δc − c⊗g − g⊗c`.
/// Basis of `C̄`: `b − ε(b)g` for every basis element `b ≠ g`.
pub struct ReducedCobar<'a> {
    spec: &'a CoalgebraSpec,
    gb: u32,
    delta: Vec<Vec<(u32, u32, Scalar)>>,
}

impl<'a> ReducedCobar<'a> {
    pub fn new(spec: &'a CoalgebraSpec, g: usize) -> Result<Self, CobarError> {
        Cobar::new(spec, g, g)?;
        let gb = spec.grouplike_basis(g) as u32;
        let mut delta = Vec::with_capacity(spec.dim());
        for b in 0..spec.dim() as u32 {
            if b == gb {
                delta.push(Vec::new());
                continue;
            }
            let eps = spec.counit(b as usize).clone();
            let mut acc: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            let mut add = |k: (u32, u32), c: Scalar| {
                let e = acc.entry(k).or_insert_with(Scalar::zero);
                *e += &c;
            };
            for (x, y, c) in spec.delta(b as usize) {
                add((*x, *y), c.clone());
            }
            add((b, gb), -Scalar::one());
            add((gb, b), -Scalar::one());
            add((gb, gb), eps);
            // coordinates in the b̂ basis: drop every term touching g
            delta.push(
                acc.into_iter()
                    .filter(|((x, y), c)| *x != gb && *y != gb && !c.is_zero())
                    .map(|((x, y), c)| (x, y, c))
                    .collect(),
            );
        }
        Ok(ReducedCobar { spec, gb, delta })
    }
}

impl WordComplex for ReducedCobar<'_> {
    fn spec(&self) -> &CoalgebraSpec {
        self.spec
    }

    fn words(&self, n: usize, degree: &[i64]) -> Result<Vec<Word>, CobarError> {
        let mut w = self.spec.tensor_basis(n, Some(degree))?;
        w.retain(|w| !w.contains(&self.gb));
        Ok(w)
    }

    fn apply(&self, w: &[u32]) -> WordVec {
        let n = w.len();
        let mut out = WordVec::new();
        for i in 0..n {
            let negate = i % 2 == 0;
            for (x, y, c) in &self.delta[w[i] as usize] {
                let mut v: Word = SmallVec::with_capacity(n + 1);
                v.extend_from_slice(&w[..i]);
                v.push(*x);
                v.push(*y);
                v.extend_from_slice(&w[i + 1..]);
                wordvec_add(&mut out, v, if negate { -c } else { c.clone() });
            }
        }
        out
    }
}

pub fn reduced_cobar_cohomology(
    spec: &CoalgebraSpec,
    g: usize,
    n: usize,
    degree: Option<&[i64]>,
) -> Result<usize, CobarError> {
    let cx = ReducedCobar::new(spec, g)?;
    degree_list(spec, n, degree)?
        .iter()
        .map(|d| Ok(slice_cohomology(&cx, n, d, false)?.dim))
        .sum()
}

fn left_mul_word(spec: &CoalgebraSpec, g: usize, w: &[u32]) -> Result<Option<WordVec>, CobarError> {
    let tables = spec
        .hopf()
        .ok_or_else(|| CobarError::NotHopf(spec.name().to_string()))?;
    let mut acc: WordVec = std::iter::once((Word::new(), Scalar::one())).collect();
    for &b in w {
        let Some(leg) = &tables.left[g][b as usize] else {
            return Ok(None);
        };
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
    Ok(Some(acc))
}

fn left_mul_vec(spec: &CoalgebraSpec, g: usize, v: &WordVec) -> Result<Option<WordVec>, CobarError> {
    let mut out = WordVec::new();
    for (w, c) in v {
        let Some(img) = left_mul_word(spec, g, w)? else {
            return Ok(None);
        };
        for (x, d) in img {
            wordvec_add(&mut out, x, c * &d);
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCheck {
    pub source_dim: usize,
    pub target_dim: usize,
    /// `(g⊗…⊗g)` sends every cocycle of the source to a cocycle.
    pub cocycles_preserved: bool,
    /// The images of the source classes stay independent in the target.
    pub classes_independent: bool,
}

impl ShiftCheck {
    pub fn holds(&self) -> bool {
        self.source_dim == self.target_dim && self.cocycles_preserved && self.classes_independent
    }
}

/// Compares `PPⁿ_{h₁,h₂}` with `PPⁿ_{gh₁,gh₂}` through `f ↦ (g⊗…⊗g)f`.
pub fn shift_check(
    spec: &CoalgebraSpec,
    g: usize,
    h1: usize,
    h2: usize,
    n: usize,
    degree: Option<&[i64]>,
) -> Result<ShiftCheck, CobarError> {
    let missing = || CobarError::NotHopf(spec.name().to_string());
    let t1 = spec.grouplike_mul(g, h1).ok_or_else(missing)?;
    let t2 = spec.grouplike_mul(g, h2).ok_or_else(missing)?;
    let src = Cobar::new(spec, h1, h2)?;
    let tgt = Cobar::new(spec, t1, t2)?;
    let mut out = ShiftCheck {
        source_dim: 0,
        target_dim: 0,
        cocycles_preserved: true,
        classes_independent: true,
    };
    for d in degree_list(spec, n, degree)? {
        let sc = slice_cohomology(&src, n, &d, true)?;
        out.source_dim += sc.dim;
        out.target_dim += slice_cohomology(&tgt, n, &d, false)?.dim;
        let words = src.words(n, &d)?;
        for k in linalg::kernel_basis(&free_columns(&src, &words)) {
            let v: WordVec = k
                .entries()
                .iter()
                .map(|(i, c)| (words[*i].clone(), c.clone()))
                .collect();
            match left_mul_vec(spec, g, &v)? {
                Some(img) if tgt.apply_vec(&img).is_empty() => {}
                _ => out.cocycles_preserved = false,
            }
        }
        let twords = tgt.words(n, &d)?;
        let index: HashMap<&Word, usize> = twords.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let bnd = if n == 0 {
            Vec::new()
        } else {
            tgt.words(n - 1, &d)?
                .iter()
                .map(|p| to_indexed(spec, &tgt.apply(p), &index))
                .collect::<Result<Vec<_>, _>>()?
        };
        let mut images = Vec::new();
        for r in &sc.reps {
            match left_mul_vec(spec, g, r)? {
                Some(img) => match to_indexed(spec, &img, &index) {
                    Ok(v) => images.push(v),
                    Err(_) => out.classes_independent = false,
                },
                None => out.classes_independent = false,
            }
        }
        if QuotientSolver::new(&bnd, &images).independent_reps() != sc.reps.len() {
            out.classes_independent = false;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirectSumCheck {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl DirectSumCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// On `C = ⊕ C_i`: `PPⁿ_{g,h}(C) = PPⁿ_{g,h}(C_i)` when both lie in `C_i`
/// and `0` when they lie in different summands.
pub fn direct_sum_check(
    specs: &[&CoalgebraSpec],
    n_max: usize,
    deg_max: Option<i64>,
) -> Result<DirectSumCheck, CobarError> {
    let sum = direct_sum(specs)?;
    let (_, bound) = slice_degrees(&sum, 0, deg_max)?;
    let mut owner = Vec::new();
    for (k, s) in specs.iter().enumerate() {
        for g in 0..s.grouplikes().len() {
            owner.push((k, g));
        }
    }
    let mut out = DirectSumCheck::default();
    for (a, &(i, g)) in owner.iter().enumerate() {
        for (b, &(j, h)) in owner.iter().enumerate() {
            for n in 0..=n_max {
                let got = total_dim(&sum, a, b, n, bound)?;
                let want = if i == j {
                    total_dim(specs[i], g, h, n, bound)?
                } else {
                    0
                };
                out.checked += 1;
                if got != want {
                    out.mismatches.push(format!(
                        "PP^{n}_({},{}) = {got} in the sum, expected {want}",
                        sum.grouplike_label(a),
                        sum.grouplike_label(b)
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowStep {
    pub radius: i64,
    pub dim: usize,
    /// Whether the classes of the previous window stay cocycles and stay
    /// independent here; `None` for the first window.
    pub inclusion_injective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    pub steps: Vec<WindowStep>,
    /// First radius after which the dimension is constant and every
    /// inclusion is an isomorphism.
    pub stabilized_at: Option<i64>,
}

type PairReps = BTreeMap<(Vec<i64>, Vec<i64>), Vec<(Vec<i64>, Vec<Vec<String>>, Vec<Scalar>)>>;

/// Tracks `PPⁿ_{g,h}` across a growing schedule of windows. `g = None`
/// sums over every grouplike of each window.
pub fn window_stabilize<E>(
    build: impl Fn(i64) -> Result<CoalgebraSpec, E>,
    radii: &[i64],
    g: Option<&[i64]>,
    h: &[i64],
    n: usize,
    deg_max: Option<i64>,
) -> Result<StabilizationReport, CobarError>
where
    E: std::fmt::Display,
{
    let mut steps: Vec<WindowStep> = Vec::new();
    let mut prev: Option<PairReps> = None;
    for &r in radii {
        let spec = build(r).map_err(|e| CobarError::Request(format!("window {r}: {e}")))?;
        let find = |el: &[i64]| {
            spec.grouplike_by_element(el)
                .ok_or_else(|| CobarError::Request(format!("grouplike {el:?} outside window {r}")))
        };
        let hi = find(h)?;
        let gs: Vec<usize> = match g {
            Some(el) => vec![find(el)?],
            None => (0..spec.grouplikes().len()).collect(),
        };
        let (degrees, _) = slice_degrees(&spec, n, deg_max)?;
        let mut reps: PairReps = BTreeMap::new();
        let mut dim = 0;
        for &gi in &gs {
            let cx = Cobar::new(&spec, gi, hi)?;
            let key = (spec.grouplikes()[gi].element.clone(), h.to_vec());
            let slot = reps.entry(key).or_default();
            for d in &degrees {
                let sc = slice_cohomology(&cx, n, d, true)?;
                dim += sc.dim;
                for v in sc.reps {
                    let words = v.keys().map(|w| super::word_labels(&spec, w)).collect();
                    slot.push((d.clone(), words, v.into_values().collect()));
                }
            }
        }
        let inclusion = match &prev {
            None => None,
            Some(old) => Some(include_reps(&spec, old)?),
        };
        steps.push(WindowStep {
            radius: r,
            dim,
            inclusion_injective: inclusion,
        });
        prev = Some(reps);
    }
    let stabilized_at = (0..steps.len().saturating_sub(1))
        .find(|&k| {
            steps[k + 1..]
                .iter()
                .all(|s| s.dim == steps[k].dim && s.inclusion_injective == Some(true))
        })
        .map(|k| steps[k].radius);
    Ok(StabilizationReport { steps, stabilized_at })
}

fn include_reps(spec: &CoalgebraSpec, old: &PairReps) -> Result<bool, CobarError> {
    for ((gel, hel), reps) in old {
        let (Some(gi), Some(hi)) = (spec.grouplike_by_element(gel), spec.grouplike_by_element(hel)) else {
            return Ok(false);
        };
        let cx = Cobar::new(spec, gi, hi)?;
        let mut by_degree: BTreeMap<&Vec<i64>, Vec<WordVec>> = BTreeMap::new();
        for (d, words, coeffs) in reps {
            let mut v = WordVec::new();
            for (labels, c) in words.iter().zip(coeffs) {
                let mut w = Word::new();
                for l in labels {
                    match spec.index_of(l) {
                        Ok(i) => w.push(i as u32),
                        Err(_) => return Ok(false),
                    }
                }
                wordvec_add(&mut v, w, c.clone());
            }
            if !cx.apply_vec(&v).is_empty() {
                return Ok(false);
            }
            by_degree.entry(d).or_default().push(v);
        }
        for (d, vs) in by_degree {
            let n = vs[0].keys().next().map_or(0, |w| w.len());
            let words = cx.words(n, d)?;
            let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let bnd = if n == 0 {
                Vec::new()
            } else {
                cx.words(n - 1, d)?
                    .iter()
                    .map(|p| to_indexed(spec, &cx.apply(p), &index))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let imgs = vs
                .iter()
                .map(|v| to_indexed(spec, v, &index))
                .collect::<Result<Vec<_>, _>>()?;
            if QuotientSolver::new(&bnd, &imgs).independent_reps() != vs.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Algebra data of the braided part `R` of `gr H = R # kG`: a basis with
/// its coradical degrees and the degree-preserving part of the product.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidedPart {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// `products[(i, j)]` for positive-degree `i, j` whose degrees sum to
    /// at most `max_degree`.
    pub products: BTreeMap<(usize, usize), LinComb>,
    /// Degrees up to this bound are complete.
    pub max_degree: i64,
}

impl BraidedPart {
    /// `dim (R⁺/(R⁺)²)_d` for `1 ≤ d ≤ max_degree`, nonzero entries only.
    pub fn generating_degrees(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for d in 1..=self.max_degree {
            let dim = self.degrees.iter().filter(|&&x| x == d).count();
            let squares: Vec<SparseVec<Scalar>> = self
                .products
                .iter()
                .filter(|((i, j), _)| self.degrees[*i] + self.degrees[*j] == d)
                .map(|(_, v)| SparseVec::from_entries(v.iter().map(|(k, c)| (*k as usize, c.clone())).collect()))
                .collect();
            let gens = dim - linalg::rank(&squares);
            if gens > 0 {
                out.push((d, gens));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSignature {
    pub rank: usize,
    pub signature: Option<Vec<(i64, usize)>>,
}

impl RankSignature {
    /// The signature series as a polynomial in `t`, e.g. `t + t^2`.
    pub fn series(&self) -> Option<String> {
        let sig = self.signature.as_ref()?;
        if sig.is_empty() {
            return Some("0".into());
        }
        let terms: Vec<String> = sig
            .iter()
            .map(|&(d, m)| {
                let t = if d == 1 { "t".to_string() } else { format!("t^{d}") };
                if m == 1 {
                    t
                } else {
                    format!("{m}{t}")
                }
            })
            .collect();
        Some(terms.join(" + "))
    }
}

/// Rank `Σ_g dim PP¹_{1,g}` (within the degree bound) and, when the
/// braided part is supplied, the signature series of its generators.
pub fn rank_and_signature(
    spec: &CoalgebraSpec,
    braided: Option<&BraidedPart>,
    deg_max: Option<i64>,
) -> Result<RankSignature, CobarError> {
    if spec.grouplikes().is_empty() {
        return Err(CobarError::Request("spec has no grouplikes".into()));
    }
    let one = spec
        .grouplike_identity()
        .ok_or_else(|| CobarError::NotHopf(format!("{} has no identity grouplike", spec.name())))?;
    let mut rank = 0;
    for g in 0..spec.grouplikes().len() {
        rank += total_dim(spec, one, g, 1, deg_max)?;
    }
    Ok(RankSignature {
        rank,
        signature: braided.map(|b| b.generating_degrees()),
    })
}
