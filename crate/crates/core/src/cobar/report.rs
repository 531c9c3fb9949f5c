use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{slice_cohomology, slice_degrees, slice_rank, word_labels, Cobar, CobarError};
use crate::coalgebra::{CoalgebraSpec, WordVec};
use crate::field::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseTerm {
    pub word: Vec<String>,
    pub coeff: Scalar,
}

pub fn sparse_terms(spec: &CoalgebraSpec, v: &WordVec) -> Vec<SparseTerm> {
    v.iter()
        .map(|(w, c)| SparseTerm {
            word: word_labels(spec, w),
            coeff: c.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyEntry {
    pub g: String,
    pub h: String,
    pub n: usize,
    pub degree: Vec<i64>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<Vec<SparseTerm>>,
    /// z-degree bound in force, if any.
    pub truncation: Option<i64>,
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcdimBound {
    pub value: usize,
    pub n_max: usize,
    pub deg_max: Option<i64>,
    /// Always true: a computed value only bounds PCdim from below.
    pub lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub name: String,
    pub dim: usize,
    pub field: String,
    pub grouplikes: usize,
    pub truncated: bool,
    pub exact_degree_max: Option<i64>,
    pub dropped_triples: usize,
    pub ungraded: bool,
    pub window: Option<(i64, i64)>,
}

impl SpecSummary {
    pub fn of(spec: &CoalgebraSpec) -> Self {
        let m = spec.meta();
        SpecSummary {
            name: spec.name().to_string(),
            dim: spec.dim(),
            field: spec.field().to_string(),
            grouplikes: spec.grouplikes().len(),
            truncated: m.truncated,
            exact_degree_max: m.exact_degree_max,
            dropped_triples: m.dropped_triples,
            ungraded: m.ungraded,
            window: m.window,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub spec: SpecSummary,
    pub entries: Vec<CohomologyEntry>,
    pub pcdim_lb: PcdimBound,
}

impl CohomologyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("g,h,n,degree,dim\n");
        for e in &self.entries {
            let deg: Vec<String> = e.degree.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                csv_field(&e.g),
                csv_field(&e.h),
                e.n,
                deg.join(" "),
                e.dim
            );
        }
        s
    }

    /// `Σ dim` over entries matching the predicate.
    pub fn total(&self, pred: impl Fn(&CohomologyEntry) -> bool) -> usize {
        self.entries.iter().filter(|e| pred(e)).map(|e| e.dim).sum()
    }

    /// `dim PPⁿ_{g,h}` summed over degrees.
    pub fn dim(&self, g: &str, h: &str, n: usize) -> usize {
        self.total(|e| e.g == g && e.h == h && e.n == n)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Which `(g, h)` pairs to compute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSelection {
    All,
    /// Every `g`, with `h` fixed.
    IntoH(usize),
    Pairs(Vec<(usize, usize)>),
}

impl PairSelection {
    pub fn resolve(&self, spec: &CoalgebraSpec) -> Vec<(usize, usize)> {
        let k = spec.grouplikes().len();
        match self {
            PairSelection::All => (0..k).flat_map(|g| (0..k).map(move |h| (g, h))).collect(),
            PairSelection::IntoH(h) => (0..k).map(|g| (g, *h)).collect(),
            PairSelection::Pairs(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyRequest {
    pub pairs: PairSelection,
    pub n_max: usize,
    pub deg_max: Option<i64>,
    pub with_reps: bool,
}

/// Computes every slice in the request. Slices run in parallel; entries
/// come out sorted by `(g, h, n, degree)` regardless of scheduling.
pub fn compute_report(spec: &CoalgebraSpec, req: &CohomologyRequest) -> Result<CohomologyReport, CobarError> {
    let pairs = req.pairs.resolve(spec);
    let mut bound = req.deg_max;
    let mut rank_jobs = Vec::new();
    for &(g, h) in &pairs {
        for n in 0..=req.n_max {
            let (degrees, b) = slice_degrees(spec, n, req.deg_max)?;
            bound = b;
            for d in degrees {
                rank_jobs.push((g, h, n, d));
            }
        }
    }
    let ranks: Vec<(usize, usize)> = rank_jobs
        .par_iter()
        .map(|(g, h, n, d)| slice_rank(&Cobar::new(spec, *g, *h)?, *n, d))
        .collect::<Result<_, _>>()?;
    let lookup: HashMap<(usize, usize, usize, &[i64]), (usize, usize)> = rank_jobs
        .iter()
        .zip(&ranks)
        .map(|((g, h, n, d), r)| ((*g, *h, *n, d.as_slice()), *r))
        .collect();
    let mut entries = Vec::new();
    let mut need_reps = Vec::new();
    for ((g, h, n, d), (count, out)) in rank_jobs.iter().zip(&ranks) {
        if *count == 0 {
            continue;
        }
        let inn = if *n == 0 {
            0
        } else {
            lookup.get(&(*g, *h, n - 1, d.as_slice())).map_or(0, |r| r.1)
        };
        let dim = count - out - inn;
        if req.with_reps && dim > 0 {
            need_reps.push(entries.len());
        }
        entries.push((*g, *h, *n, d.clone(), dim));
    }
    let reps: Vec<Vec<WordVec>> = need_reps
        .par_iter()
        .map(|&i| {
            let (g, h, n, ref d, dim) = entries[i];
            let sc = slice_cohomology(&Cobar::new(spec, g, h)?, n, d, true)?;
            assert_eq!(sc.dim, dim, "rank and representative passes disagree");
            Ok(sc.reps)
        })
        .collect::<Result<_, CobarError>>()?;
    let mut rep_of: HashMap<usize, Vec<WordVec>> = need_reps.into_iter().zip(reps).collect();
    let window = spec.meta().window;
    let out: Vec<CohomologyEntry> = entries
        .iter()
        .enumerate()
        .map(|(i, (g, h, n, d, dim))| CohomologyEntry {
            g: spec.grouplike_label(*g).to_string(),
            h: spec.grouplike_label(*h).to_string(),
            n: *n,
            degree: d.clone(),
            dim: *dim,
            reps: rep_of
                .remove(&i)
                .unwrap_or_default()
                .iter()
                .map(|v| sparse_terms(spec, v))
                .collect(),
            truncation: bound,
            window,
        })
        .collect();
    let value = out.iter().filter(|e| e.dim > 0).map(|e| e.n).max().unwrap_or(0);
    Ok(CohomologyReport {
        spec: SpecSummary::of(spec),
        entries: out,
        pcdim_lb: PcdimBound {
            value,
            n_max: req.n_max,
            deg_max: bound,
            lower_bound: true,
        },
    })
}

/// Largest `n ≤ n_max` with some `PPⁿ_{g,h} ≠ 0` inside the degree bound.
pub fn pcdim_lower_bound(spec: &CoalgebraSpec, n_max: usize, deg_max: Option<i64>) -> Result<PcdimBound, CobarError> {
    let req = CohomologyRequest {
        pairs: PairSelection::All,
        n_max,
        deg_max,
        with_reps: false,
    };
    Ok(compute_report(spec, &req)?.pcdim_lb)
}
