use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic;
use super::FieldError;

/// The coefficient field: either Q or the cyclotomic field Q(ζ_ell).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldContext {
    Rational,
    Cyclotomic { ell: u32 },
}

impl FieldContext {
    pub fn cyclotomic(ell: u32) -> Result<Self, FieldError> {
        if cyclotomic::phi(ell).is_none() {
            return Err(FieldError::UnsupportedOrder(ell));
        }
        Ok(FieldContext::Cyclotomic { ell })
    }

    pub fn ell(&self) -> Option<u32> {
        match self {
            FieldContext::Rational => None,
            FieldContext::Cyclotomic { ell } => Some(*ell),
        }
    }

    /// Coefficients of Φ_ell, lowest degree first; `None` over Q.
    pub fn phi_coeffs(&self) -> Option<&'static [i64]> {
        match self {
            FieldContext::Rational => None,
            FieldContext::Cyclotomic { ell } => cyclotomic::phi(*ell),
        }
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi_coeffs().map_or(1, |p| p.len() - 1)
    }

    /// The primitive root ζ_ell (or 1 over Q).
    pub fn zeta(&self) -> Scalar {
        match self {
            FieldContext::Rational => Scalar::one(),
            FieldContext::Cyclotomic { ell } => Scalar::zeta(*ell),
        }
    }

    /// True when `s` is an element of this field in canonical representation.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (_, Scalar::Rat(_)) => true,
            (FieldContext::Cyclotomic { ell }, Scalar::Cyc(c)) => c.ell == *ell,
            (FieldContext::Rational, Scalar::Cyc(_)) => false,
        }
    }

    /// Smallest context containing both.
    pub fn join(&self, other: &FieldContext) -> Result<FieldContext, FieldError> {
        match (self, other) {
            (FieldContext::Rational, o) | (o, FieldContext::Rational) => Ok(*o),
            (FieldContext::Cyclotomic { ell: a }, FieldContext::Cyclotomic { ell: b }) => {
                if a == b {
                    Ok(*self)
                } else {
                    Err(FieldError::ContextMismatch(*a, *b))
                }
            }
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldContext::Rational => write!(f, "Q"),
            FieldContext::Cyclotomic { ell } => write!(f, "Q(zeta{ell})"),
        }
    }
}

/// Element of Q(ζ_ell) that is not rational: coefficients on the power basis
/// `1, ζ, …, ζ^(d-1)` with `d = deg Φ_ell`, at least one non-constant
/// coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycElem {
    ell: u32,
    coeffs: Box<[BigRational]>,
}

impl CycElem {
    pub fn ell(&self) -> u32 {
        self.ell
    }
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

/// Exact scalar. Rational values are always stored as `Rat`, whichever
/// field they are considered in, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Cyc(CycElem),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(rat(n))
    }

    pub fn from_frac(p: i64, q: i64) -> Result<Self, FieldError> {
        if q == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q))))
    }

    /// ζ_ell as an element of Q(ζ_ell).
    pub fn zeta(ell: u32) -> Self {
        Self::zeta_pow(ell, 1)
    }

    /// ζ_ell^k, reduced.
    pub fn zeta_pow(ell: u32, k: i64) -> Self {
        let phi = cyclotomic::phi(ell).expect("supported order");
        let k = k.rem_euclid(ell as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Self::from_poly(ell, phi, v)
    }

    /// Builds an element of Q(ζ_ell) from polynomial coefficients in ζ.
    pub fn from_coeffs(ell: u32, coeffs: Vec<BigRational>) -> Result<Self, FieldError> {
        let phi = cyclotomic::phi(ell).ok_or(FieldError::UnsupportedOrder(ell))?;
        Ok(Self::from_poly(ell, phi, coeffs))
    }

    fn from_poly(ell: u32, phi: &[i64], mut v: Vec<BigRational>) -> Self {
        let d = phi.len() - 1;
        if v.len() > d {
            for k in (d..v.len()).rev() {
                let c = std::mem::take(&mut v[k]);
                if c.is_zero() {
                    continue;
                }
                for (j, p) in phi.iter().enumerate().take(d) {
                    if *p != 0 {
                        let t = &c * rat(*p);
                        v[k - d + j] -= t;
                    }
                }
            }
            v.truncate(d);
        }
        v.resize(d, BigRational::zero());
        if v.iter().skip(1).all(|c| c.is_zero()) {
            Scalar::Rat(v.into_iter().next().unwrap_or_else(BigRational::zero))
        } else {
            Scalar::Cyc(CycElem {
                ell,
                coeffs: v.into_boxed_slice(),
            })
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    /// Order of the cyclotomic field this element needs, if any.
    pub fn ell(&self) -> Option<u32> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Cyc(c) => Some(c.ell),
        }
    }

    fn coeff_vec(&self, d: usize) -> Vec<BigRational> {
        match self {
            Scalar::Rat(r) => {
                let mut v = vec![BigRational::zero(); d.max(1)];
                v[0] = r.clone();
                v
            }
            Scalar::Cyc(c) => c.coeffs.to_vec(),
        }
    }

    fn common_ell(&self, other: &Scalar) -> Result<Option<u32>, FieldError> {
        match (self.ell(), other.ell()) {
            (None, x) | (x, None) => Ok(x),
            (Some(a), Some(b)) if a == b => Ok(Some(a)),
            (Some(a), Some(b)) => Err(FieldError::ContextMismatch(a, b)),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        match self.common_ell(other)? {
            None => Ok(Scalar::Rat(self.as_rational().unwrap() + other.as_rational().unwrap())),
            Some(ell) => {
                let phi = cyclotomic::phi(ell).unwrap();
                let d = phi.len() - 1;
                let mut a = self.coeff_vec(d);
                for (x, y) in a.iter_mut().zip(other.coeff_vec(d)) {
                    *x += y;
                }
                Ok(Self::from_poly(ell, phi, a))
            }
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a * b)),
            (Scalar::Rat(r), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(r)) => {
                if r.is_zero() {
                    return Ok(Scalar::zero());
                }
                let coeffs: Vec<BigRational> = c.coeffs.iter().map(|x| x * r).collect();
                Ok(Scalar::Cyc(CycElem {
                    ell: c.ell,
                    coeffs: coeffs.into_boxed_slice(),
                }))
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                if a.ell != b.ell {
                    return Err(FieldError::ContextMismatch(a.ell, b.ell));
                }
                let phi = cyclotomic::phi(a.ell).unwrap();
                let d = phi.len() - 1;
                let mut prod = vec![BigRational::zero(); 2 * d - 1];
                for (i, x) in a.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] += x * y;
                        }
                    }
                }
                Ok(Self::from_poly(a.ell, phi, prod))
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Cyc(c) => Ok(cyc_inverse(c)),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Scalar, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Parses `"p/q"`, `"p"`, `"zetaN"`, `"zetaN^k"` with an optional leading
    /// sign, e.g. `"-zeta8^3"`.
    pub fn parse(s: &str) -> Result<Scalar, FieldError> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) if rest.starts_with("zeta") => (true, rest),
            _ => (false, t),
        };
        if let Some(rest) = body.strip_prefix("zeta") {
            let (n, k) = match rest.split_once('^') {
                Some((n, k)) => (n, k),
                None => (rest, "1"),
            };
            let ell: u32 = n.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            let k: i64 = k.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            if cyclotomic::phi(ell).is_none() {
                return Err(FieldError::UnsupportedOrder(ell));
            }
            let z = Scalar::zeta_pow(ell, k);
            return Ok(if neg { -z } else { z });
        }
        parse_rational(body).map(Scalar::Rat)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let err = || FieldError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| err())?)),
    }
}

/// Inverse in Q(ζ) by solving the d×d multiplication-matrix system.
fn cyc_inverse(c: &CycElem) -> Scalar {
    let phi = cyclotomic::phi(c.ell).unwrap();
    let d = phi.len() - 1;
    let a = Scalar::Cyc(c.clone());
    // columns: a * ζ^j
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
    for j in 0..d {
        let col = &a * &Scalar::zeta_pow(c.ell, j as i64);
        let v = col.coeff_vec(d);
        for i in 0..d {
            m[i][j] = v[i].clone();
        }
    }
    m[0][d] = BigRational::one();
    for col in 0..d {
        let piv = (col..d)
            .find(|&r| !m[r][col].is_zero())
            .expect("nonzero element is invertible");
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=d {
                    let t = &f * &m[col][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    let sol: Vec<BigRational> = m.into_iter().map(|row| row[d].clone()).collect();
    Scalar::from_poly(c.ell, phi, sol)
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar context mismatch")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect("scalar context mismatch")
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$checked(rhs).expect("scalar context mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Cyc(c) => Scalar::Cyc(CycElem {
                ell: c.ell,
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
            }),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, rhs) {
            *a += b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, rhs) {
            *a -= b;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Cyc(c) => {
                let mut first = true;
                for (k, x) in c.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let mono = match k {
                        0 => String::new(),
                        1 => format!("zeta{}", c.ell),
                        _ => format!("zeta{}^{}", c.ell, k),
                    };
                    let mag = x.abs();
                    let sign = if x.is_negative() {
                        "-"
                    } else if first {
                        ""
                    } else {
                        "+"
                    };
                    if k == 0 {
                        write!(f, "{sign}{}", fmt_rat(&mag))?;
                    } else if mag.is_one() {
                        write!(f, "{sign}{mono}")?;
                    } else {
                        write!(f, "{sign}{}*{mono}", fmt_rat(&mag))?;
                    }
                    first = false;
                }
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    ell: u32,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
enum ScalarRepr {
    #[serde(rename = "rat")]
    Rat(String),
    #[serde(rename = "cyc")]
    Cyc(CycRepr),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Rat(r) => ScalarRepr::Rat(fmt_rat(r)),
            Scalar::Cyc(c) => ScalarRepr::Cyc(CycRepr {
                ell: c.ell,
                coeffs: c.coeffs.iter().map(fmt_rat).collect(),
            }),
        };
        repr.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LooseScalar {
    Repr(ScalarRepr),
    Text(String),
    Int(i64),
}

/// Accepts the tagged form, a string understood by [`Scalar::parse`], or an integer.
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = match LooseScalar::deserialize(d)? {
            LooseScalar::Repr(r) => r,
            LooseScalar::Text(s) => return Scalar::parse(&s).map_err(D::Error::custom),
            LooseScalar::Int(n) => return Ok(Scalar::from_int(n)),
        };
        match repr {
            ScalarRepr::Rat(s) => parse_rational(&s).map(Scalar::Rat).map_err(D::Error::custom),
            ScalarRepr::Cyc(c) => {
                let coeffs = c
                    .coeffs
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(D::Error::custom)?;
                Scalar::from_coeffs(c.ell, coeffs).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = Scalar::zeta(4);
        assert_eq!(&z * &z, Scalar::from_int(-1));
    }

    #[test]
    fn rational_inverse() {
        let a = Scalar::from_frac(3, 4).unwrap();
        assert_eq!(a.inv().unwrap(), Scalar::from_frac(4, 3).unwrap());
        assert_eq!(Scalar::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn zeta3_plus_zeta3_squared() {
        let z = Scalar::zeta(3);
        assert_eq!(&z + &(&z * &z), Scalar::from_int(-1));
    }

    #[test]
    fn cyclotomic_inverse_roundtrip() {
        for ell in [3u32, 5, 8, 9, 12] {
            let z = Scalar::zeta(ell);
            let a = &(&z * &z) + &Scalar::from_frac(2, 3).unwrap();
            let b = a.inv().unwrap();
            assert_eq!(&a * &b, Scalar::one(), "ell = {ell}");
            assert_eq!(z.inv().unwrap(), Scalar::zeta_pow(ell, -1));
        }
    }

    #[test]
    fn context_mismatch_detected() {
        let a = Scalar::zeta(3);
        let b = Scalar::zeta(5);
        assert_eq!(a.checked_mul(&b), Err(FieldError::ContextMismatch(3, 5)));
        assert!(a.checked_mul(&Scalar::from_int(2)).is_ok());
    }

    #[test]
    fn json_forms() {
        let r = Scalar::from_frac(-3, 6).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"rat":"-1/2"}"#);
        let z = Scalar::zeta(3);
        let js = serde_json::to_string(&z).unwrap();
        assert_eq!(js, r#"{"cyc":{"ell":3,"coeffs":["0","1"]}}"#);
        let back: Scalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, z);
        let frac: Scalar = serde_json::from_str(r#"{"rat":"4/8"}"#).unwrap();
        assert_eq!(frac, Scalar::from_frac(1, 2).unwrap());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse("zeta4^2").unwrap(), Scalar::from_int(-1));
        assert_eq!(Scalar::parse("-zeta3").unwrap(), -Scalar::zeta(3));
        assert_eq!(Scalar::parse("2/6").unwrap(), Scalar::from_frac(1, 3).unwrap());
        assert!(Scalar::parse("zeta99").is_err());
    }

    #[test]
    fn display() {
        let z = Scalar::zeta(3);
        assert_eq!(format!("{}", -(&z + &Scalar::from_int(2))), "-2-zeta3");
        assert_eq!(format!("{}", Scalar::from_frac(1, 2).unwrap()), "1/2");
    }
}
