//! Cyclotomic polynomial table.
//!
//! `phi(n)` is the n-th cyclotomic polynomial with integer coefficients,
//! lowest degree first. The table is built once by dividing `x^n - 1` by
//! every `phi(d)` with `d | n, d < n`.

use std::sync::OnceLock;

/// Largest supported order of a root of unity.
pub const MAX_ORDER: u32 = 64;

fn table() -> &'static Vec<Vec<i64>> {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut phis: Vec<Vec<i64>> = vec![Vec::new(); MAX_ORDER as usize + 1];
        for n in 1..=MAX_ORDER as usize {
            // x^n - 1
            let mut num = vec![0i64; n + 1];
            num[0] = -1;
            num[n] = 1;
            for d in 1..n {
                if n % d == 0 {
                    num = exact_div(&num, &phis[d]);
                }
            }
            phis[n] = num;
        }
        phis
    })
}

/// Divides `num` by the monic polynomial `den`; the division must be exact.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Coefficients of the `n`-th cyclotomic polynomial, or `None` if `n` is
/// zero or above [`MAX_ORDER`].
pub fn phi(n: u32) -> Option<&'static [i64]> {
    if n == 0 || n > MAX_ORDER {
        return None;
    }
    Some(&table()[n as usize])
}

/// Degree of the `n`-th cyclotomic polynomial (Euler's totient of `n`).
pub fn degree(n: u32) -> Option<usize> {
    phi(n).map(|p| p.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials() {
        assert_eq!(phi(1).unwrap(), &[-1, 1]);
        assert_eq!(phi(2).unwrap(), &[1, 1]);
        assert_eq!(phi(3).unwrap(), &[1, 1, 1]);
        assert_eq!(phi(4).unwrap(), &[1, 0, 1]);
        assert_eq!(phi(6).unwrap(), &[1, -1, 1]);
        assert_eq!(phi(8).unwrap(), &[1, 0, 0, 0, 1]);
        assert_eq!(phi(9).unwrap(), &[1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn degrees_are_totients() {
        fn totient(n: u32) -> usize {
            (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
        }
        for n in 1..=MAX_ORDER {
            assert_eq!(degree(n).unwrap(), totient(n), "n = {n}");
            assert_eq!(*phi(n).unwrap().last().unwrap(), 1, "monic");
        }
        assert!(phi(65).is_none());
        assert!(phi(0).is_none());
    }
}
