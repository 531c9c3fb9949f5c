//! Exact coefficient fields and q-combinatorics.

pub mod cyclotomic;
mod qcomb;
mod scalar;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use qcomb::{multiplicative_order, q_binomial, q_factorial, q_int, MultOrder};
pub use scalar::{CycElem, FieldContext, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live in different cyclotomic fields (zeta{0} vs zeta{1})")]
    ContextMismatch(u32, u32),
    #[error("zero has no multiplicative order")]
    ZeroInput,
    #[error("q-binomial ({n} choose {m}) out of range")]
    OutOfRange { n: u64, m: u64 },
    #[error("cyclotomic order {0} unsupported (1..=64)")]
    UnsupportedOrder(u32),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Arithmetic needed by the exact linear-algebra layer.
///
/// Implemented for [`Scalar`] (Q and Q(ζ)) and for plain [`BigRational`].
pub trait Field: Clone + PartialEq + Debug + Send + Sync + Zero + One + Neg<Output = Self> {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn try_inv(&self) -> Option<Self>;
}

macro_rules! impl_field {
    ($t:ty, $inv:expr) => {
        impl Field for $t {
            fn add_ref(&self, other: &Self) -> Self {
                <&$t as Add<&$t>>::add(self, other)
            }
            fn sub_ref(&self, other: &Self) -> Self {
                <&$t as Sub<&$t>>::sub(self, other)
            }
            fn mul_ref(&self, other: &Self) -> Self {
                <&$t as Mul<&$t>>::mul(self, other)
            }
            fn try_inv(&self) -> Option<Self> {
                let f: fn(&$t) -> Option<$t> = $inv;
                f(self)
            }
        }
    };
}

impl_field!(Scalar, |s| s.inv().ok());
impl_field!(BigRational, |r| if r.is_zero() { None } else { Some(r.recip()) });

/// Binary operation selector for [`scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Checked scalar arithmetic with explicit error reporting.
pub fn scalar_arith(op: ArithOp, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar, FieldError> {
    let rhs = || b.ok_or(FieldError::Parse("missing second operand".into()));
    match op {
        ArithOp::Add => a.checked_add(rhs()?),
        ArithOp::Sub => a.checked_sub(rhs()?),
        ArithOp::Mul => a.checked_mul(rhs()?),
        ArithOp::Inv => a.inv(),
        ArithOp::Neg => Ok(-a),
    }
}
