//! Exact integer and rational arithmetic, Fibonacci/Lucas sequences, and the
//! identity verification suites.

mod fib;
pub mod identities;

pub use fib::{fib, lucas, FibCache};
pub use identities::{
    verify_identity_suite, verify_inner_sum_identity, verify_row_simplifications, IdentityIndex,
    IdentityOutcome, IdentityReport,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Arbitrary-size signed integer.
pub type ExactInt = BigInt;

/// Exact fraction, always kept in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("sequence index must be non-negative, got {0}")]
    NegativeIndex(i64),
    #[error("identity requires 2 <= j <= i, got i={i}, j={j}")]
    IndexOrder { i: i64, j: i64 },
}

/// `(-1)^k` as an exact integer.
pub fn alt_sign(k: i64) -> ExactInt {
    if k.rem_euclid(2) == 0 {
        ExactInt::one()
    } else {
        -ExactInt::one()
    }
}

pub(crate) fn rat(num: i64, den: i64) -> ExactRational {
    ExactRational::new(ExactInt::from(num), ExactInt::from(den))
}

pub(crate) fn int_rat(v: &ExactInt) -> ExactRational {
    ExactRational::from_integer(v.clone())
}
