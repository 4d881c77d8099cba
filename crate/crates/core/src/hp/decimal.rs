//! Exact decimal rendering of [`HpReal`] values.
//!
//! Rounding is round-half-even applied to the exact binary value, so the
//! printed digits depend only on the value, never on an intermediate
//! conversion.

use alloc::format;
use alloc::string::String;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::HpReal;
use crate::exact::{ExactInt, ExactRational};

fn pow10(k: u32) -> ExactInt {
    num_traits::pow(ExactInt::from(10), k as usize)
}

fn scale_pow10(x: &ExactRational, k: i64) -> ExactRational {
    if k >= 0 {
        x * ExactRational::from_integer(pow10(k as u32))
    } else {
        x / ExactRational::from_integer(pow10((-k) as u32))
    }
}

/// `x` rounded to the nearest integer, ties to even.
pub fn round_half_even(x: &ExactRational) -> ExactInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    // 0 <= r < denom
    let twice: ExactInt = &r * 2u32;
    match twice.cmp(x.denom()) {
        core::cmp::Ordering::Less => q,
        core::cmp::Ordering::Greater => q + 1,
        core::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// `round(x · 10^decimals)`, ties to even.
pub fn round_scaled(x: &HpReal, decimals: i64) -> Option<ExactInt> {
    Some(round_half_even(&scale_pow10(&x.to_ratio()?, decimals)))
}

/// `floor(log10 |x|)`, computed exactly. `None` for zero or non-finite `x`.
pub fn decimal_exponent(x: &HpReal) -> Option<i64> {
    let e2 = x.binary_exponent()?;
    let r = x.to_ratio()?.abs();
    // |x| lies in [2^{e2-1}, 2^{e2}); start from the estimate and correct.
    let mut k = libm::floor((e2 - 1) as f64 * core::f64::consts::LOG10_2) as i64;
    let one = ExactRational::one();
    loop {
        let scaled = scale_pow10(&r, -k);
        if scaled < one {
            k -= 1;
        } else if scaled >= ExactRational::from_integer(ExactInt::from(10)) {
            k += 1;
        } else {
            return Some(k);
        }
    }
}

fn digits_with_point(mag: &ExactInt, decimals: usize) -> String {
    let s = mag.to_str_radix(10);
    if decimals == 0 {
        return s;
    }
    let s = if s.len() <= decimals { format!("{}{}", "0".repeat(decimals + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - decimals);
    format!("{int}.{frac}")
}

/// Fixed-point rendering with exactly `decimals` digits after the point.
pub fn format_fixed(x: &HpReal, decimals: usize) -> String {
    let Some(v) = round_scaled(x, decimals as i64) else {
        return String::from("nan");
    };
    let body = digits_with_point(&v.abs(), decimals);
    if v.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific rendering with `significant` digits, e.g. `8.16298e-7`.
pub fn format_sci(x: &HpReal, significant: usize) -> String {
    let significant = significant.max(1);
    if !x.is_finite() {
        return String::from("nan");
    }
    if x.is_zero() {
        return format!("{}e0", digits_with_point(&ExactInt::zero(), significant - 1));
    }
    let mut exp = decimal_exponent(x).expect("finite nonzero");
    let mut m = round_scaled(x, significant as i64 - 1 - exp).expect("finite");
    if m.abs() >= pow10(significant as u32) {
        // rounding carried into a new leading digit
        exp += 1;
        m = round_scaled(x, significant as i64 - 1 - exp).expect("finite");
    }
    let body = digits_with_point(&m.abs(), significant - 1);
    let sign = if m.is_negative() { "-" } else { "" };
    format!("{sign}{body}e{exp}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hp::Precision;

    const P: Precision = Precision::bits(256);

    fn hp(num: i64, den: i64) -> HpReal {
        HpReal::from_ratio(&rat(num, den), P)
    }

    #[test]
    fn half_even_ties() {
        assert_eq!(round_half_even(&rat(5, 2)), ExactInt::from(2));
        assert_eq!(round_half_even(&rat(7, 2)), ExactInt::from(4));
        assert_eq!(round_half_even(&rat(-5, 2)), ExactInt::from(-2));
        assert_eq!(round_half_even(&rat(-7, 2)), ExactInt::from(-4));
        assert_eq!(round_half_even(&rat(26, 10)), ExactInt::from(3));
        // exactly representable binary tie: 0.125 to 2 decimals
        assert_eq!(format_fixed(&HpReal::from_f64(0.125, P), 2), "0.12");
        assert_eq!(format_fixed(&HpReal::from_f64(0.375, P), 2), "0.38");
    }

    #[test]
    fn fixed_rendering() {
        assert_eq!(format_fixed(&hp(1, 3), 9), "0.333333333");
        assert_eq!(format_fixed(&hp(2, 3), 9), "0.666666667");
        assert_eq!(format_fixed(&hp(1, 1), 9), "1.000000000");
        assert_eq!(format_fixed(&hp(-1, 16), 3), "-0.062");
        assert_eq!(format_fixed(&hp(12345, 1), 0), "12345");
        assert_eq!(format_fixed(&hp(1, 4), 9), "0.250000000");
    }

    #[test]
    fn exponent_and_sci() {
        assert_eq!(decimal_exponent(&hp(1, 1)), Some(0));
        assert_eq!(decimal_exponent(&hp(999, 1000)), Some(-1));
        assert_eq!(decimal_exponent(&hp(1, 500)), Some(-3));
        assert_eq!(decimal_exponent(&hp(-12345, 1)), Some(4));
        assert_eq!(format_sci(&hp(816_297_876_891, 1_000_000_000_000_000_000), 6), "8.16298e-7");
        assert_eq!(format_sci(&hp(9_999_997, 10_000_000), 6), "1.00000e0");
        assert_eq!(format_sci(&hp(-25, 1), 3), "-2.50e1");
        assert_eq!(format_sci(&HpReal::zero(P), 3), "0.00e0");
        let tiny = HpReal::pow2(-3000, P);
        assert!(format_sci(&tiny, 4).ends_with("e-904"));
    }
}
