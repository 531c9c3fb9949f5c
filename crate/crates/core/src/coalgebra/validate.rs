use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::CoalgebraSpec;
use crate::field::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Coassociativity,
    Counit,
    Grouplike,
    Grading,
    Field,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub basis: String,
    pub detail: String,
}

/// All violated axioms; empty iff the spec is a graded pointed coalgebra
/// with the declared grouplikes.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{:?} at {}: {}", v.axiom, v.basis, v.detail)?;
        }
        Ok(())
    }
}

fn add(map: &mut HashMap<[u32; 3], Scalar>, k: [u32; 3], c: Scalar) {
    let e = map.entry(k).or_insert_with(Scalar::zero);
    *e += &c;
}

pub(super) fn validate(spec: &CoalgebraSpec) -> ValidationReport {
    let mut out = Vec::new();
    let dim = spec.dim();
    let mut push = |axiom, b: usize, detail: String| {
        out.push(Violation {
            axiom,
            basis: spec.label(b).to_string(),
            detail,
        })
    };
    for b in 0..dim {
        let d = spec.delta(b);

        for (_, _, c) in d {
            if !spec.field().contains(c) {
                push(Axiom::Field, b, format!("coefficient {c} outside {}", spec.field()));
            }
        }

        let mut lhs = HashMap::new();
        let mut rhs = HashMap::new();
        for (x, y, c) in d {
            for (u, v, c2) in spec.delta(*x as usize) {
                add(&mut lhs, [*u, *v, *y], c * c2);
            }
            for (u, v, c2) in spec.delta(*y as usize) {
                add(&mut rhs, [*x, *u, *v], c * c2);
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            let mut keys: Vec<_> = lhs.keys().chain(rhs.keys()).copied().collect();
            keys.sort();
            let z = Scalar::zero();
            let k = keys
                .into_iter()
                .find(|k| lhs.get(k).unwrap_or(&z) != rhs.get(k).unwrap_or(&z))
                .unwrap();
            push(
                Axiom::Coassociativity,
                b,
                format!(
                    "coefficient of {}⊗{}⊗{} differs",
                    spec.label(k[0] as usize),
                    spec.label(k[1] as usize),
                    spec.label(k[2] as usize)
                ),
            );
        }

        let mut left: HashMap<u32, Scalar> = HashMap::new();
        let mut right: HashMap<u32, Scalar> = HashMap::new();
        for (x, y, c) in d {
            let ex = spec.counit(*x as usize);
            if !ex.is_zero() {
                *left.entry(*y).or_insert_with(Scalar::zero) += &(ex * c);
            }
            let ey = spec.counit(*y as usize);
            if !ey.is_zero() {
                *right.entry(*x).or_insert_with(Scalar::zero) += &(ey * c);
            }
        }
        for (side, m) in [("left", left), ("right", right)] {
            let ok = m
                .iter()
                .all(|(k, v)| if *k as usize == b { v.is_one() } else { v.is_zero() })
                && m.get(&(b as u32)).is_some_and(|v| v.is_one());
            if !ok {
                push(Axiom::Counit, b, format!("{side} counit law fails"));
            }
        }

        for (x, y, _) in d {
            let gx: Vec<i64> = spec.grading(*x as usize).to_vec();
            let s: Vec<i64> = gx.iter().zip(spec.grading(*y as usize)).map(|(a, c)| a + c).collect();
            if s != spec.grading(b) {
                push(
                    Axiom::Grading,
                    b,
                    format!(
                        "term {}⊗{} has degree {:?}",
                        spec.label(*x as usize),
                        spec.label(*y as usize),
                        s
                    ),
                );
                break;
            }
        }
    }
    let z = spec.z_coord();
    for g in spec.grouplikes() {
        let b = g.basis;
        let d = spec.delta(b);
        let ok = d.len() == 1 && d[0].0 as usize == b && d[0].1 as usize == b && d[0].2.is_one();
        if !ok {
            push(Axiom::Grouplike, b, "Δ(g) ≠ g⊗g".into());
        }
        if !spec.counit(b).is_one() {
            push(Axiom::Grouplike, b, "ε(g) ≠ 1".into());
        }
        if spec.grading(b)[z] != 0 {
            push(Axiom::Grouplike, b, "nonzero z-degree".into());
        }
    }
    ValidationReport { violations: out }
}
