//! q-integers, q-factorials and Gaussian binomials.

use num_traits::{One, Zero};

use super::{cyclotomic, FieldError, Scalar};

/// Multiplicative order of a nonzero scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultOrder {
    Finite(u64),
    Infinite,
}

impl MultOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            MultOrder::Finite(n) => Some(n),
            MultOrder::Infinite => None,
        }
    }
}

/// Smallest `n ≥ 1` with `q^n = 1`.
pub fn multiplicative_order(q: &Scalar) -> Result<MultOrder, FieldError> {
    if q.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    match q {
        Scalar::Rat(r) => {
            if r.is_one() {
                Ok(MultOrder::Finite(1))
            } else if (-r).is_one() {
                Ok(MultOrder::Finite(2))
            } else {
                Ok(MultOrder::Infinite)
            }
        }
        Scalar::Cyc(c) => {
            let ell = c.ell() as u64;
            let deg = cyclotomic::degree(c.ell()).unwrap() as u64;
            // roots of unity in Q(ζ_ell) have order dividing lcm(2, ell)
            let bound = (ell * deg).max(2 * ell);
            let mut p = q.clone();
            for n in 1..=bound {
                if p.is_one() {
                    return Ok(MultOrder::Finite(n));
                }
                p = &p * q;
            }
            Ok(MultOrder::Infinite)
        }
    }
}

/// `[n]_q = 1 + q + … + q^(n-1)`.
pub fn q_int(n: u64, q: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    let mut p = Scalar::one();
    for _ in 0..n {
        acc += &p;
        p = &p * q;
    }
    acc
}

/// `[n]_q! = [1]_q [2]_q ⋯ [n]_q`.
pub fn q_factorial(n: u64, q: &Scalar) -> Scalar {
    (1..=n).fold(Scalar::one(), |acc, i| &acc * &q_int(i, q))
}

/// Product formula `∏_{i=1}^{m} [n-m+i]_q / [i]_q`; caller guarantees the
/// denominators do not vanish.
fn binomial_product(n: u64, m: u64, q: &Scalar) -> Scalar {
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for i in 1..=m {
        num = &num * &q_int(n - m + i, q);
        den = &den * &q_int(i, q);
    }
    num.checked_div(&den).expect("nonvanishing q-integers")
}

fn ordinary_binomial(n: u64, m: u64) -> Scalar {
    let m = m.min(n - m);
    let mut acc = num_bigint::BigInt::one();
    for i in 0..m {
        acc = acc * (n - i) / (i + 1);
    }
    Scalar::Rat(num_rational::BigRational::from_integer(acc))
}

/// Gaussian binomial `(n choose m)_q`.
///
/// When `q` is a primitive `ℓ`-th root of unity with `ℓ ≥ 2`, the value is
/// assembled from the factorization `(r_n choose r_m)_q (q_n choose q_m)`
/// with `n = q_n ℓ + r_n`, which never divides by a vanishing q-integer.
pub fn q_binomial(n: u64, m: u64, q: &Scalar) -> Result<Scalar, FieldError> {
    if m > n {
        return Err(FieldError::OutOfRange { n, m });
    }
    if m == 0 || m == n {
        return Ok(Scalar::one());
    }
    match multiplicative_order(q) {
        Ok(MultOrder::Finite(1)) => Ok(ordinary_binomial(n, m)),
        Ok(MultOrder::Finite(ell)) => {
            let (qn, rn) = (n / ell, n % ell);
            let (qm, rm) = (m / ell, m % ell);
            if rn < rm {
                return Ok(Scalar::zero());
            }
            let head = binomial_product(rn, rm, q);
            Ok(&head * &ordinary_binomial(qn, qm))
        }
        Ok(MultOrder::Infinite) => Ok(binomial_product(n, m, q)),
        Err(FieldError::ZeroInput) => {
            // q = 0: [k]_0 = 1 for k ≥ 1, so every binomial is 1
            Ok(Scalar::one())
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: u64, m: u64, q: &Scalar) -> Scalar {
        // oracle: (n, m)_q = (n-1, m-1)_q + q^m (n-1, m)_q
        let mut rows: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
        for k in 1..=n {
            let prev = &rows[k as usize - 1];
            let mut row = Vec::with_capacity(k as usize + 1);
            for j in 0..=k {
                let left = if j == 0 {
                    Scalar::zero()
                } else {
                    prev[j as usize - 1].clone()
                };
                let right = if j == k {
                    Scalar::zero()
                } else {
                    &q.pow(j) * &prev[j as usize]
                };
                row.push(&left + &right);
            }
            rows.push(row);
        }
        rows[n as usize][m as usize].clone()
    }

    fn sample_qs() -> Vec<Scalar> {
        vec![
            Scalar::one(),
            Scalar::from_int(2),
            Scalar::from_int(-1),
            Scalar::zeta(3),
            Scalar::zeta(4),
            Scalar::zeta(5),
            Scalar::zeta(6),
        ]
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(&Scalar::one()).unwrap(), MultOrder::Finite(1));
        assert_eq!(multiplicative_order(&Scalar::zeta(3)).unwrap(), MultOrder::Finite(3));
        assert_eq!(multiplicative_order(&Scalar::from_int(2)).unwrap(), MultOrder::Infinite);
        assert_eq!(multiplicative_order(&-Scalar::zeta(3)).unwrap(), MultOrder::Finite(6));
        assert_eq!(
            multiplicative_order(&Scalar::zeta_pow(9, 3)).unwrap(),
            MultOrder::Finite(3)
        );
        let not_root = &Scalar::zeta(4) + &Scalar::one();
        assert_eq!(multiplicative_order(&not_root).unwrap(), MultOrder::Infinite);
        assert_eq!(multiplicative_order(&Scalar::zero()), Err(FieldError::ZeroInput));
    }

    #[test]
    fn named_values() {
        for q in sample_qs() {
            assert_eq!(q_binomial(5, 0, &q).unwrap(), Scalar::one());
        }
        assert_eq!(q_binomial(4, 2, &Scalar::zeta(4)).unwrap(), Scalar::zero());
        // [3]_2 = 1 + 2 + 4
        assert_eq!(q_binomial(3, 1, &Scalar::from_int(2)).unwrap(), Scalar::from_int(7));
        assert_eq!(
            q_binomial(2, 3, &Scalar::one()),
            Err(FieldError::OutOfRange { n: 2, m: 3 })
        );
    }

    #[test]
    fn matches_pascal_oracle() {
        for q in sample_qs() {
            for n in 0..=12 {
                for m in 0..=n {
                    assert_eq!(q_binomial(n, m, &q).unwrap(), pascal(n, m, &q), "n={n} m={m} q={q}");
                }
            }
        }
    }

    #[test]
    fn root_of_unity_factorization_and_vanishing() {
        for ell in 2u64..=6 {
            let q = if ell == 2 {
                Scalar::from_int(-1)
            } else {
                Scalar::zeta(ell as u32)
            };
            for n in 0..=12u64 {
                for m in 0..=n {
                    let (rn, rm) = (n % ell, m % ell);
                    let v = pascal(n, m, &q);
                    assert_eq!(v.is_zero(), rn < rm, "ell={ell} n={n} m={m}");
                    if rn >= rm {
                        let f = &pascal(rn, rm, &q) * &pascal(n / ell, m / ell, &Scalar::one());
                        assert_eq!(v, f);
                    }
                }
            }
        }
    }

    #[test]
    fn nonvanishing_off_roots_of_unity() {
        for q in [Scalar::one(), Scalar::from_int(2)] {
            for n in 0..=12 {
                for m in 0..=n {
                    assert!(!q_binomial(n, m, &q).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn factorial_small() {
        let q = Scalar::from_int(2);
        // [1][2][3] = 1 * 3 * 7
        assert_eq!(q_factorial(3, &q), Scalar::from_int(21));
        assert_eq!(q_factorial(0, &q), Scalar::one());
    }
}
