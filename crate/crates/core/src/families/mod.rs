//! Constructors for the coalgebra catalog: group algebras, symmetric
//! coalgebras, and Hopf–Ore extensions of group algebras built through the
//! PBW engine in [`pbw`].

mod builders;
pub mod pbw;
#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalgebra::{GroupStructure, SpecError};
use crate::field::{FieldContext, FieldError, Scalar};

pub use builders::{
    braided_part, build_a_windowed, build_family, build_group_algebra, build_symmetric_coalgebra, build_taft_r,
    check_normality, normality_residues, z_bracket_is_cocycle,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    /// A parameter constraint failed; `tag` names the constraint.
    #[error("parameter violation [{tag}]: {msg}")]
    Param { tag: String, msg: String },
    #[error("normal form exceeded the truncation (z^{z}, w^{w})")]
    TruncationOverflow { z: u32, w: u32 },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub(crate) fn violation(tag: &str, msg: impl Into<String>) -> FamilyError {
    FamilyError::Param {
        tag: tag.into(),
        msg: msg.into(),
    }
}

/// The group underlying a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// `Z/n₁ × … × Z/n_r`.
    FiniteAbelian(Vec<u64>),
    /// `Z`, with the coalgebra basis restricted to exponents in `[lo, hi]`.
    IntegersWindowed { lo: i64, hi: i64 },
}

impl GroupSpec {
    pub fn cyclic(n: u64) -> Self {
        GroupSpec::FiniteAbelian(vec![n])
    }

    pub fn window(radius: i64) -> Self {
        GroupSpec::IntegersWindowed {
            lo: -radius,
            hi: radius,
        }
    }

    pub fn structure(&self) -> GroupStructure {
        match self {
            GroupSpec::FiniteAbelian(f) => GroupStructure::new(f.clone()),
            GroupSpec::IntegersWindowed { .. } => GroupStructure::new(vec![0]),
        }
    }

    pub fn window_bounds(&self) -> Option<(i64, i64)> {
        match self {
            GroupSpec::IntegersWindowed { lo, hi } => Some((*lo, *hi)),
            GroupSpec::FiniteAbelian(_) => None,
        }
    }

    pub fn check(&self) -> Result<(), FamilyError> {
        match self {
            GroupSpec::FiniteAbelian(f) if f.is_empty() || f.contains(&0) => Err(violation(
                "group",
                "finite abelian groups need positive invariant factors",
            )),
            GroupSpec::IntegersWindowed { lo, hi } if !(*lo <= 0 && 0 <= *hi) => {
                Err(violation("group", "window must contain 0"))
            }
            _ => Ok(()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = FamilyError;

    /// `Z/2`, `Z/4xZ/4`, or `Z[-3,5]` for a window.
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("Z[").and_then(|r| r.strip_suffix(']')) {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| violation("group", "window is Z[lo,hi]"))?;
            let lo = a.trim().parse().map_err(|_| violation("group", "bad window bound"))?;
            let hi = b.trim().parse().map_err(|_| violation("group", "bad window bound"))?;
            return Ok(GroupSpec::IntegersWindowed { lo, hi });
        }
        let g = GroupStructure::parse(s).ok_or_else(|| violation("group", format!("cannot parse group {s:?}")))?;
        if !g.is_finite() {
            return Err(violation("group", "use Z[lo,hi] for the integers"));
        }
        Ok(GroupSpec::FiniteAbelian(g.factors))
    }
}

/// Family names in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Group,
    /// Symmetric coalgebra of an abelian Lie algebra (the enveloping coalgebra).
    U,
    A,
    C,
    E,
    F,
    L,
    N,
    O,
    P,
    Q,
    /// The braided part `span{z^i : i < ℓ}` of a Taft algebra.
    TaftR,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Group,
        Family::U,
        Family::A,
        Family::C,
        Family::E,
        Family::F,
        Family::L,
        Family::N,
        Family::O,
        Family::P,
        Family::Q,
        Family::TaftR,
    ];

    pub fn has_w(self) -> bool {
        matches!(
            self,
            Family::F | Family::L | Family::N | Family::O | Family::P | Family::Q
        )
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "group" | "kg" => Family::Group,
            "u" | "symmetric" | "sym" => Family::U,
            "a" => Family::A,
            "c" => Family::C,
            "e" | "taft" | "sweedler" => Family::E,
            "f" => Family::F,
            "l" => Family::L,
            "n" => Family::N,
            "o" => Family::O,
            "p" => Family::P,
            "q" => Family::Q,
            "taft-r" | "r" => Family::TaftR,
            _ => return Err(violation("family", format!("unknown family {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Group => "group",
            Family::U => "U",
            Family::A => "A",
            Family::C => "C",
            Family::E => "E",
            Family::F => "F",
            Family::L => "L",
            Family::N => "N",
            Family::O => "O",
            Family::P => "P",
            Family::Q => "Q",
            Family::TaftR => "taft-r",
        };
        f.write_str(s)
    }
}

/// Parameters shared by all constructors; each family reads what it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilyParams {
    pub group: GroupSpec,
    /// The distinguished central grouplike, as an exponent vector.
    pub e: Vec<i64>,
    /// Character values on the generators.
    pub chi: Vec<Scalar>,
    /// Twisted-additive map for the C family (values on generators).
    pub tau: Vec<Scalar>,
    /// Map η for the w-derivation (values on generators).
    pub eta: Vec<Scalar>,
    /// Order of `q = χ(e)`; derived when absent.
    pub ell: Option<u32>,
    /// Quotient parameter; each family has its own default.
    pub lambda: Option<Scalar>,
    pub xi: Scalar,
    pub z_degree_max: u32,
    pub w_degree_max: u32,
    /// Symmetric coalgebra: number of variables and total degree bound.
    pub sym_d: usize,
    pub sym_n: u32,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams::taft(2)
    }
}

impl FamilyParams {
    pub fn new(group: GroupSpec, e: Vec<i64>, chi: Vec<Scalar>) -> Self {
        let rank = group.structure().rank();
        FamilyParams {
            group,
            e,
            chi,
            tau: vec![Scalar::from_int(0); rank],
            eta: vec![Scalar::from_int(0); rank],
            ell: None,
            lambda: None,
            xi: Scalar::from_int(0),
            z_degree_max: 4,
            w_degree_max: 2,
            sym_d: 1,
            sym_n: 2,
        }
    }

    /// Sweedler (`ℓ = |G| = 2`) or Taft (`G = Z/n`, `χ(x) = ζ_n`) parameters.
    pub fn taft(n: u32) -> Self {
        let chi = if n == 2 { Scalar::from_int(-1) } else { Scalar::zeta(n) };
        FamilyParams::new(GroupSpec::cyclic(n as u64), vec![1], vec![chi])
    }

    pub fn symmetric(d: usize, n: u32) -> Self {
        let mut p = FamilyParams::new(GroupSpec::FiniteAbelian(vec![1]), vec![0], vec![Scalar::from_int(1)]);
        p.sym_d = d;
        p.sym_n = n;
        p
    }

    /// A small admissible parameter set for each family.
    pub fn example(fam: Family) -> Self {
        let int = Scalar::from_int;
        let z4 = GroupSpec::cyclic(4);
        match fam {
            Family::Group => FamilyParams::new(GroupSpec::cyclic(2), vec![0], vec![int(1)]),
            Family::U => FamilyParams::symmetric(2, 3),
            Family::A => {
                let mut p = FamilyParams::new(GroupSpec::cyclic(3), vec![1], vec![Scalar::zeta(3)]);
                p.z_degree_max = 3;
                p
            }
            Family::C => {
                let mut p = FamilyParams::new(z4, vec![2], vec![int(-1)]);
                p.tau = vec![int(1)];
                p.z_degree_max = 3;
                p
            }
            Family::E => FamilyParams::taft(2),
            Family::F => FamilyParams::taft(2),
            Family::L => {
                let mut p = FamilyParams::new(
                    GroupSpec::FiniteAbelian(vec![4, 4]),
                    vec![1, 0],
                    vec![int(-1), Scalar::zeta(4)],
                );
                p.eta = vec![int(0), int(1)];
                p
            }
            Family::N => {
                let mut p = FamilyParams::taft(2);
                p.xi = int(1);
                p
            }
            Family::O => {
                let mut p = FamilyParams::new(GroupSpec::window(4), vec![1], vec![int(-1)]);
                p.eta = vec![int(-2)];
                p.lambda = Some(int(1));
                p
            }
            Family::P => {
                let mut p = FamilyParams::new(GroupSpec::window(4), vec![1], vec![int(-1)]);
                p.eta = vec![int(1)];
                p
            }
            Family::Q => {
                let mut p = FamilyParams::new(z4, vec![1], vec![int(-1)]);
                p.lambda = Some(int(1));
                p
            }
            Family::TaftR => FamilyParams::taft(3),
        }
    }

    pub fn field(&self) -> Result<FieldContext, FieldError> {
        let mut f = FieldContext::Rational;
        let all = self
            .chi
            .iter()
            .chain(&self.tau)
            .chain(&self.eta)
            .chain(self.lambda.iter())
            .chain([&self.xi]);
        for s in all {
            if let Some(ell) = s.ell() {
                f = f.join(&FieldContext::cyclotomic(ell)?)?;
            }
        }
        Ok(f)
    }
}
