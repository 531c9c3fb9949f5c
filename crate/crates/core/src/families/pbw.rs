//! Normal forms in iterated Ore extensions of an abelian group algebra.
//!
//! Elements are combinations of PBW monomials `g z^i w^j`. Multiplication
//! pushes letters to the right with
//!
//! * `z g = χ(g) g z + τ(g) g(e − 1)`,
//! * `z^ℓ = λ(e^ℓ − 1)` when the quotient relation is present,
//! * `w g = χ(g)^ℓ g w + η(g) g(e^ℓ − 1)` and `w z = z w + δ_w(z)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::FamilyError;
use crate::coalgebra::GroupStructure;
use crate::field::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub g: Vec<i64>,
    pub z: u32,
    pub w: u32,
}

impl Mono {
    pub fn group(g: Vec<i64>) -> Self {
        Mono { g, z: 0, w: 0 }
    }
}

pub type Elem = BTreeMap<Mono, Scalar>;
pub type Tensor = BTreeMap<(Mono, Mono), Scalar>;

pub fn add_term<K: Ord>(acc: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(k) {
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

pub fn add_scaled<K: Ord + Clone>(acc: &mut BTreeMap<K, Scalar>, x: &BTreeMap<K, Scalar>, c: &Scalar) {
    for (k, v) in x {
        add_term(acc, k.clone(), v * c);
    }
}

/// Multiplicative character given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn trivial(rank: usize) -> Self {
        Character {
            values: vec![Scalar::one(); rank],
        }
    }

    pub fn eval(&self, g: &[i64]) -> Scalar {
        g.iter().zip(&self.values).fold(Scalar::one(), |acc, (&a, v)| {
            &acc * &v.powi(a).expect("character values are nonzero")
        })
    }

    pub fn pow(&self, k: u64) -> Character {
        Character {
            values: self.values.iter().map(|v| v.pow(k)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    /// Values must be roots of unity of order dividing the factor orders.
    pub fn check(&self, grp: &GroupStructure) -> Result<(), String> {
        if self.values.len() != grp.rank() {
            return Err("one character value per generator".into());
        }
        for (i, (&n, v)) in grp.factors.iter().zip(&self.values).enumerate() {
            if v.is_zero() {
                return Err(format!("χ vanishes on generator {i}"));
            }
            if n > 0 && !v.pow(n).is_one() {
                return Err(format!("χ(generator {i})^{n} ≠ 1"));
            }
        }
        Ok(())
    }
}

/// Map with `φ(gh) = φ(g) + ψ(g) φ(h)` for a character `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedAdditive {
    pub values: Vec<Scalar>,
    pub twist: Character,
}

impl TwistedAdditive {
    fn eval_power(&self, k: usize, a: i64) -> Scalar {
        let t = &self.values[k];
        let c = &self.twist.values[k];
        if a >= 0 {
            let mut s = Scalar::zero();
            let mut p = Scalar::one();
            for _ in 0..a {
                s += &p;
                p = &p * c;
            }
            &s * t
        } else {
            -(&c.powi(a).unwrap() * &self.eval_power(k, -a))
        }
    }

    pub fn eval(&self, g: &[i64]) -> Scalar {
        let mut acc = Scalar::zero();
        let mut prefix = Scalar::one();
        for (k, &a) in g.iter().enumerate() {
            acc += &(&prefix * &self.eval_power(k, a));
            prefix = &prefix * &self.twist.values[k].powi(a).unwrap();
        }
        acc
    }

    /// Checks the cocycle rule on generators: `φ(x^n) = 0` on finite
    /// factors and `φ(xy) = φ(yx)` on generator pairs.
    pub fn check(&self, grp: &GroupStructure) -> Result<(), String> {
        if self.values.len() != grp.rank() {
            return Err("one value per generator".into());
        }
        for (k, &n) in grp.factors.iter().enumerate() {
            if n > 0 && !self.eval_power(k, n as i64).is_zero() {
                return Err(format!("value on generator {k} is incompatible with its order {n}"));
            }
        }
        for a in 0..grp.rank() {
            for b in a + 1..grp.rank() {
                let one = Scalar::one();
                let l = &(&one - &self.twist.values[b]) * &self.values[a];
                let r = &(&one - &self.twist.values[a]) * &self.values[b];
                if l != r {
                    return Err(format!("generators {a} and {b} do not commute under the rule"));
                }
            }
        }
        Ok(())
    }
}

/// Second Ore variable `w` over `K`, with `θ(g) = χ(g)^ℓ g`, `θ(z) = z`.
#[derive(Clone, Debug)]
pub struct WLayer {
    pub ell: u32,
    /// `δ(g) = η(g) g (e^ℓ − 1)`; `None` means `δ(g) = 0`.
    pub eta: Option<TwistedAdditive>,
    /// `δ(z)`, an element of `K`.
    pub delta_z: Elem,
}

/// The algebra `kG[z; σ_χ, δ_τ]` (optionally modulo `z^ℓ − λ(e^ℓ − 1)`)
/// and optionally `[w; θ, δ]` on top.
#[derive(Debug)]
pub struct PbwAlgebra {
    pub group: GroupStructure,
    pub e: Vec<i64>,
    pub chi: Character,
    pub tau: Option<TwistedAdditive>,
    pub quotient: Option<(u32, Scalar)>,
    pub w: Option<WLayer>,
    pub bound_z: u32,
    pub bound_w: u32,
    w_cache: RefCell<HashMap<(u32, u32), Elem>>,
    mono_cache: RefCell<HashMap<(Mono, Mono), Elem>>,
}

/// A letter of a formal product handed to [`PbwAlgebra::normalize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Letter {
    G(Vec<i64>),
    Z,
    W,
    Scalar(Scalar),
}

impl PbwAlgebra {
    pub fn new(group: GroupStructure, e: Vec<i64>, chi: Character) -> Self {
        PbwAlgebra {
            group,
            e,
            chi,
            tau: None,
            quotient: None,
            w: None,
            bound_z: u32::MAX,
            bound_w: u32::MAX,
            w_cache: RefCell::default(),
            mono_cache: RefCell::default(),
        }
    }

    pub fn q(&self) -> Scalar {
        self.chi.eval(&self.e)
    }

    pub fn one(&self) -> Elem {
        self.mono(Mono::group(self.group.identity()))
    }

    pub fn mono(&self, m: Mono) -> Elem {
        std::iter::once((m, Scalar::one())).collect()
    }

    pub fn gen_z(&self) -> Elem {
        self.mono(Mono {
            g: self.group.identity(),
            z: 1,
            w: 0,
        })
    }

    pub fn gen_w(&self) -> Elem {
        self.mono(Mono {
            g: self.group.identity(),
            z: 0,
            w: 1,
        })
    }

    pub fn group_elem(&self, g: &[i64]) -> Elem {
        self.mono(Mono::group(self.group.reduce(g.to_vec())))
    }

    fn e_pow(&self, k: i64) -> Vec<i64> {
        self.group.pow(&self.e, k)
    }

    fn check_bounds(&self, m: &Mono) -> Result<(), FamilyError> {
        if m.z > self.bound_z || m.w > self.bound_w {
            return Err(FamilyError::TruncationOverflow { z: m.z, w: m.w });
        }
        Ok(())
    }

    fn left_group(&self, h: &[i64], x: &Elem) -> Elem {
        x.iter()
            .map(|(m, c)| {
                (
                    Mono {
                        g: self.group.mul(h, &m.g),
                        z: m.z,
                        w: m.w,
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    fn left_z_mono(&self, m: &Mono, out: &mut Elem, c: &Scalar) -> Result<(), FamilyError> {
        let chi = self.chi.eval(&m.g);
        match self.quotient {
            Some((ell, ref lambda)) if m.z + 1 == ell => {
                let f = &(&chi * lambda) * c;
                let ge = self.group.mul(&m.g, &self.e_pow(ell as i64));
                add_term(out, Mono { g: ge, z: 0, w: m.w }, f.clone());
                add_term(
                    out,
                    Mono {
                        g: m.g.clone(),
                        z: 0,
                        w: m.w,
                    },
                    -f,
                );
            }
            _ => {
                let n = Mono {
                    g: m.g.clone(),
                    z: m.z + 1,
                    w: m.w,
                };
                self.check_bounds(&n)?;
                add_term(out, n, &chi * c);
            }
        }
        if let Some(tau) = &self.tau {
            let t = &tau.eval(&m.g) * c;
            if !t.is_zero() {
                let ge = self.group.mul(&m.g, &self.e);
                add_term(out, Mono { g: ge, z: m.z, w: m.w }, t.clone());
                add_term(out, m.clone(), -t);
            }
        }
        Ok(())
    }

    fn left_z(&self, x: &Elem) -> Result<Elem, FamilyError> {
        let mut out = Elem::new();
        for (m, c) in x {
            self.left_z_mono(m, &mut out, c)?;
        }
        Ok(out)
    }

    /// `w · (z^i w^j)`.
    fn w_times(&self, i: u32, j: u32) -> Result<Elem, FamilyError> {
        if let Some(v) = self.w_cache.borrow().get(&(i, j)) {
            return Ok(v.clone());
        }
        let layer = self.w.as_ref().expect("w layer");
        let id = self.group.identity();
        let v = if i == 0 {
            let n = Mono { g: id, z: 0, w: j + 1 };
            self.check_bounds(&n)?;
            self.mono(n)
        } else {
            let mut v = self.left_z(&self.w_times(i - 1, j)?)?;
            let rest = self.mono(Mono { g: id, z: i - 1, w: j });
            let d = self.mul(&layer.delta_z, &rest)?;
            add_scaled(&mut v, &d, &Scalar::one());
            v
        };
        self.w_cache.borrow_mut().insert((i, j), v.clone());
        Ok(v)
    }

    fn left_w(&self, x: &Elem) -> Result<Elem, FamilyError> {
        let layer = self.w.as_ref().ok_or(FamilyError::Param {
            tag: "w".into(),
            msg: "algebra has no second Ore variable".into(),
        })?;
        let theta = self.chi.pow(layer.ell as u64);
        let el = self.e_pow(layer.ell as i64);
        let mut out = Elem::new();
        for (m, c) in x {
            let tail = self.w_times(m.z, m.w)?;
            let f = &theta.eval(&m.g) * c;
            add_scaled(&mut out, &self.left_group(&m.g, &tail), &f);
            if let Some(eta) = &layer.eta {
                let t = &eta.eval(&m.g) * c;
                if !t.is_zero() {
                    add_term(
                        &mut out,
                        Mono {
                            g: self.group.mul(&m.g, &el),
                            z: m.z,
                            w: m.w,
                        },
                        t.clone(),
                    );
                    add_term(&mut out, m.clone(), -t);
                }
            }
        }
        Ok(out)
    }

    fn mono_times(&self, a: &Mono, b: &Mono) -> Result<Elem, FamilyError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.mono_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let mut t = self.mono(b.clone());
        for _ in 0..a.w {
            t = self.left_w(&t)?;
        }
        for _ in 0..a.z {
            t = self.left_z(&t)?;
        }
        let t = self.left_group(&a.g, &t);
        self.mono_cache.borrow_mut().insert(key, t.clone());
        Ok(t)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem, FamilyError> {
        let mut out = Elem::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let p = self.mono_times(ma, mb)?;
                add_scaled(&mut out, &p, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Normal form of a formal product of letters.
    pub fn normalize(&self, word: &[Letter]) -> Result<Elem, FamilyError> {
        let mut t = self.one();
        for l in word.iter().rev() {
            t = match l {
                Letter::G(g) => self.left_group(&self.group.reduce(g.clone()), &t),
                Letter::Z => self.left_z(&t)?,
                Letter::W => self.left_w(&t)?,
                Letter::Scalar(s) => t
                    .into_iter()
                    .map(|(m, c)| (m, &c * s))
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            };
        }
        Ok(t)
    }

    /// `s · t` in `H ⊗ H`.
    pub fn mul_tensor(&self, s: &Tensor, t: &Tensor) -> Result<Tensor, FamilyError> {
        let mut out = Tensor::new();
        for ((a, b), c) in s {
            for ((x, y), d) in t {
                let l = self.mono_times(a, x)?;
                let r = self.mono_times(b, y)?;
                let cd = c * d;
                for (ml, cl) in &l {
                    let f = cl * &cd;
                    for (mr, cr) in &r {
                        add_term(&mut out, (ml.clone(), mr.clone()), &f * cr);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn tensor_unit(&self) -> Tensor {
        let id = Mono::group(self.group.identity());
        std::iter::once(((id.clone(), id), Scalar::one())).collect()
    }

    /// `Δ(z) = z⊗1 + e⊗z`.
    pub fn delta_z(&self) -> Tensor {
        let id = Mono::group(self.group.identity());
        let z = Mono {
            g: self.group.identity(),
            z: 1,
            w: 0,
        };
        let mut t = Tensor::new();
        add_term(&mut t, (z.clone(), id), Scalar::one());
        add_term(&mut t, (Mono::group(self.e.clone()), z), Scalar::one());
        t
    }

    /// The element `[z]^ℓ = Σ_{i=1}^{ℓ−1} [ℓ−1]!/([i]![ℓ−i]!) e^{ℓ−i} z^i ⊗ z^{ℓ−i}`.
    pub fn z_bracket(&self, ell: u32) -> Result<Tensor, FamilyError> {
        let q = self.q();
        let fact = |n: u32| crate::field::q_factorial(n as u64, &q);
        let top = fact(ell - 1);
        let id = self.group.identity();
        let mut t = Tensor::new();
        for i in 1..ell {
            let den = &fact(i) * &fact(ell - i);
            let c = top.checked_div(&den).map_err(|_| FamilyError::Param {
                tag: "q-integer-nonzero".into(),
                msg: format!("[i]_q vanishes for some i < {ell}"),
            })?;
            add_term(
                &mut t,
                (
                    Mono {
                        g: self.e_pow((ell - i) as i64),
                        z: i,
                        w: 0,
                    },
                    Mono {
                        g: id.clone(),
                        z: ell - i,
                        w: 0,
                    },
                ),
                c,
            );
        }
        Ok(t)
    }

    /// `Δ(w) = w⊗1 + e^ℓ⊗w + [z]^ℓ`.
    pub fn delta_w(&self) -> Result<Tensor, FamilyError> {
        let ell = self.w.as_ref().expect("w layer").ell;
        let id = Mono::group(self.group.identity());
        let w = Mono {
            g: self.group.identity(),
            z: 0,
            w: 1,
        };
        let mut t = self.z_bracket(ell)?;
        add_term(&mut t, (w.clone(), id), Scalar::one());
        add_term(&mut t, (Mono::group(self.e_pow(ell as i64)), w), Scalar::one());
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> PbwAlgebra {
        PbwAlgebra::new(
            GroupStructure::new(vec![3]),
            vec![1],
            Character {
                values: vec![Scalar::zeta(3)],
            },
        )
    }

    #[test]
    fn z_commutes_past_group_with_character() {
        let a = z3();
        let r = a.normalize(&[Letter::Z, Letter::G(vec![1])]).unwrap();
        let expect = std::iter::once((Mono { g: vec![1], z: 1, w: 0 }, Scalar::zeta(3))).collect::<Elem>();
        assert_eq!(r, expect);
        let zz = a.normalize(&[Letter::Z, Letter::Z]).unwrap();
        assert_eq!(zz, a.mono(Mono { g: vec![0], z: 2, w: 0 }));
    }

    #[test]
    fn derivation_term_in_c_family() {
        let mut a = PbwAlgebra::new(
            GroupStructure::new(vec![4]),
            vec![2],
            Character {
                values: vec![Scalar::from_int(-1)],
            },
        );
        a.tau = Some(TwistedAdditive {
            values: vec![Scalar::one()],
            twist: a.chi.clone(),
        });
        let r = a.normalize(&[Letter::Z, Letter::G(vec![1])]).unwrap();
        // z x = -x z + x(x^2 - 1)
        let mut expect = Elem::new();
        add_term(&mut expect, Mono { g: vec![1], z: 1, w: 0 }, Scalar::from_int(-1));
        add_term(&mut expect, Mono { g: vec![3], z: 0, w: 0 }, Scalar::one());
        add_term(&mut expect, Mono { g: vec![1], z: 0, w: 0 }, Scalar::from_int(-1));
        assert_eq!(r, expect);
    }

    #[test]
    fn associativity_on_small_monomials() {
        let mut a = PbwAlgebra::new(
            GroupStructure::new(vec![4]),
            vec![1],
            Character {
                values: vec![Scalar::from_int(-1)],
            },
        );
        a.quotient = Some((2, Scalar::one()));
        a.w = Some(WLayer {
            ell: 2,
            eta: None,
            delta_z: {
                let mut d = Elem::new();
                add_term(&mut d, Mono { g: vec![0], z: 1, w: 0 }, Scalar::from_int(-2));
                add_term(&mut d, Mono { g: vec![2], z: 1, w: 0 }, Scalar::from_int(-2));
                d
            },
        });
        let monos: Vec<Elem> = [
            Mono { g: vec![1], z: 0, w: 0 },
            Mono { g: vec![0], z: 1, w: 0 },
            Mono { g: vec![0], z: 0, w: 1 },
            Mono { g: vec![3], z: 1, w: 1 },
        ]
        .into_iter()
        .map(|m| a.mono(m))
        .collect();
        for x in &monos {
            for y in &monos {
                for z in &monos {
                    let l = a.mul(&a.mul(x, y).unwrap(), z).unwrap();
                    let r = a.mul(x, &a.mul(y, z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn twisted_additive_eval() {
        let chi = Character {
            values: vec![Scalar::from_int(-1)],
        };
        let tau = TwistedAdditive {
            values: vec![Scalar::one()],
            twist: chi,
        };
        // τ(x^2) = τ(x) + χ(x)τ(x) = 0, τ(x^3) = 1
        assert!(tau.eval(&[2]).is_zero());
        assert!(tau.eval(&[3]).is_one());
        assert!(tau.check(&GroupStructure::new(vec![4])).is_ok());
        assert!(tau.check(&GroupStructure::new(vec![3])).is_err());
    }
}
