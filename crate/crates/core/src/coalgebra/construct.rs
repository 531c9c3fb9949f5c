//! Direct sums and tensor products of specs.

use num_traits::Zero;

use super::{CoalgebraSpec, GroupStructure, Grouplike, HopfTables, LinComb, SpecError, SpecMeta, SpecParts};

/// Disjoint union. Labels are prefixed `s{i}:`; gradings are padded to a
/// common rank. Grouplike labels become `[summand, ...element]`.
pub fn direct_sum(specs: &[&CoalgebraSpec]) -> Result<CoalgebraSpec, SpecError> {
    let field = specs
        .iter()
        .try_fold(crate::field::FieldContext::Rational, |f, s| f.join(s.field()))?;
    let rank = specs.iter().map(|s| s.grading_rank()).max().unwrap_or(1);
    let mut parts = SpecParts {
        field,
        labels: Vec::new(),
        delta: Vec::new(),
        counit: Vec::new(),
        grouplikes: Vec::new(),
        group: None,
        grading: Vec::new(),
        z_coord: 0,
        meta: SpecMeta {
            name: specs.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ⊕ "),
            truncated: specs.iter().any(|s| s.meta().truncated),
            exact_degree_max: specs.iter().filter_map(|s| s.meta().exact_degree_max).min(),
            dropped_triples: specs.iter().map(|s| s.meta().dropped_triples).sum(),
            ungraded: specs.iter().any(|s| s.meta().ungraded),
            window: None,
        },
        hopf: None,
    };
    for (k, s) in specs.iter().enumerate() {
        let off = parts.labels.len() as u32;
        for b in 0..s.dim() {
            parts.labels.push(format!("s{k}:{}", s.label(b)));
            parts.delta.push(
                s.delta(b)
                    .iter()
                    .map(|(x, y, c)| (x + off, y + off, c.clone()))
                    .collect(),
            );
            parts.counit.push(s.counit(b).clone());
            let mut g = vec![0; rank];
            // z-degree goes to coordinate 0
            let src = s.grading(b);
            g[0] = src[s.z_coord()];
            let mut j = 1;
            for (i, d) in src.iter().enumerate() {
                if i != s.z_coord() {
                    g[j] = *d;
                    j += 1;
                }
            }
            parts.grading.push(g);
        }
        for gl in s.grouplikes() {
            let mut element = vec![k as i64];
            element.extend(&gl.element);
            parts.grouplikes.push(Grouplike {
                basis: gl.basis + off as usize,
                element,
            });
        }
    }
    CoalgebraSpec::from_parts(parts)
}

fn concat(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// Tensor product coalgebra with Δ(a⊗b) = Σ (a₁⊗b₁)⊗(a₂⊗b₂). Basis index
/// of `a⊗b` is `a·dim(B) + b`; gradings concatenate with z-degrees added
/// into coordinate 0.
pub fn tensor_product(a: &CoalgebraSpec, b: &CoalgebraSpec) -> Result<CoalgebraSpec, SpecError> {
    let field = a.field().join(b.field())?;
    let db = b.dim() as u32;
    let pair = |x: u32, y: u32| x * db + y;
    let mut labels = Vec::new();
    let mut delta = Vec::new();
    let mut counit = Vec::new();
    let mut grading = Vec::new();
    let strip = |s: &CoalgebraSpec, i: usize| -> Vec<i64> {
        s.grading(i)
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != s.z_coord())
            .map(|(_, d)| *d)
            .collect()
    };
    for x in 0..a.dim() {
        for y in 0..b.dim() {
            labels.push(format!("{}|{}", a.label(x), b.label(y)));
            let mut row = Vec::new();
            for (x1, x2, c) in a.delta(x) {
                for (y1, y2, d) in b.delta(y) {
                    row.push((pair(*x1, *y1), pair(*x2, *y2), c * d));
                }
            }
            delta.push(row);
            counit.push(a.counit(x) * b.counit(y));
            let mut g = vec![a.grading(x)[a.z_coord()] + b.grading(y)[b.z_coord()]];
            g.extend(strip(a, x));
            g.extend(strip(b, y));
            grading.push(g);
        }
    }
    let mut grouplikes = Vec::new();
    for ga in a.grouplikes() {
        for gb in b.grouplikes() {
            grouplikes.push(Grouplike {
                basis: (ga.basis * b.dim()) + gb.basis,
                element: concat(&ga.element, &gb.element),
            });
        }
    }
    let group = match (a.group(), b.group()) {
        (Some(x), Some(y)) => {
            let mut f = x.factors.clone();
            f.extend(&y.factors);
            Some(GroupStructure::new(f))
        }
        _ => None,
    };
    let hopf = match (a.hopf(), b.hopf()) {
        (Some(ha), Some(hb)) => {
            let combine = |ta: &[Vec<Option<LinComb>>], tb: &[Vec<Option<LinComb>>]| {
                let mut out = Vec::new();
                for ra in ta {
                    for rb in tb {
                        let mut row = Vec::new();
                        for ca in ra {
                            for cb in rb {
                                row.push(match (ca, cb) {
                                    (Some(ca), Some(cb)) => {
                                        let mut v: LinComb = Vec::new();
                                        for (i, s) in ca {
                                            for (j, t) in cb {
                                                let c = s * t;
                                                if !c.is_zero() {
                                                    v.push((pair(*i, *j), c));
                                                }
                                            }
                                        }
                                        Some(v)
                                    }
                                    _ => None,
                                });
                            }
                        }
                        out.push(row);
                    }
                }
                out
            };
            Some(HopfTables {
                left: combine(&ha.left, &hb.left),
                right: combine(&ha.right, &hb.right),
            })
        }
        _ => None,
    };
    let name = format!("{} ⊗ {}", a.name(), b.name());
    let meta = SpecMeta {
        name,
        truncated: a.meta().truncated || b.meta().truncated,
        exact_degree_max: match (a.meta().exact_degree_max, b.meta().exact_degree_max) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
        dropped_triples: a.meta().dropped_triples + b.meta().dropped_triples,
        ungraded: a.meta().ungraded || b.meta().ungraded,
        window: None,
    };
    CoalgebraSpec::from_parts(SpecParts {
        field,
        labels,
        delta,
        counit,
        grouplikes,
        group,
        grading,
        z_coord: 0,
        meta,
        hopf,
    })
}
