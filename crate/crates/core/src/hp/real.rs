use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::exact::{ExactInt, ExactRational};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision in bits of mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(usize);

impl Precision {
    /// 512 bits, about 154 decimal digits.
    pub const DEFAULT: Precision = Precision(512);
    /// Lowest precision accepted by the eigensolvers.
    pub const MIN: Precision = Precision(64);

    pub const fn bits(bits: usize) -> Self {
        Precision(bits)
    }

    pub const fn get(self) -> usize {
        self.0
    }

    pub const fn doubled(self) -> Self {
        Precision(self.0 * 2)
    }

    /// Approximate number of decimal digits carried.
    pub fn decimal_digits(self) -> usize {
        self.0 * 30103 / 100000
    }

    /// `2^{-7p/8}`: the convergence tolerance used when none is given.
    pub fn default_tolerance(self) -> HpReal {
        HpReal::pow2(-((self.0 * 7 / 8) as i64), self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Binary floating-point number with an explicit precision.
///
/// Binary operations run at the larger precision of the two operands and
/// round to nearest-even.
#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    prec: usize,
}

impl HpReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        HpReal { value, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec.0), prec.0)
    }

    pub fn from_u64(v: u64, prec: Precision) -> Self {
        Self::wrap(BigFloat::from_u64(v, prec.0), prec.0)
    }

    /// Nearest representable value to `v`.
    pub fn from_f64(v: f64, prec: Precision) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec.0.max(64)), prec.0)
    }

    /// `2^k`.
    pub fn pow2(k: i64, prec: Precision) -> Self {
        // mantissa 0.1b, so the value is 2^{e-1}
        let e = (k + 1) as astro_float::Exponent;
        let mut v = BigFloat::from_words(&[1u64 << 63], Sign::Pos, e);
        v.set_precision(prec.0, RM).expect("precision");
        Self::wrap(v, prec.0)
    }

    /// Nearest representable value to the integer `v`.
    pub fn from_int(v: &ExactInt, prec: Precision) -> Self {
        if v.is_zero() {
            return Self::zero(prec);
        }
        let (sign, digits) = v.to_u64_digits();
        let sign = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
        let bits = (digits.len() * 64) as astro_float::Exponent;
        let mut f = BigFloat::from_words(&digits, sign, bits);
        f.set_precision(prec.0, RM).expect("precision");
        Self::wrap(f, prec.0)
    }

    /// Nearest representable value (within one rounding of the quotient) to
    /// the fraction `v`.
    pub fn from_ratio(v: &ExactRational, prec: Precision) -> Self {
        let guard = Precision(prec.0 + 64);
        let num = Self::from_int(v.numer(), guard);
        let den = Self::from_int(v.denom(), guard);
        Self::wrap(num.value.div(&den.value, prec.0, RM), prec.0)
    }

    pub fn precision(&self) -> Precision {
        Precision(self.prec)
    }

    /// The same value rounded to `prec`.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut v = self.value.clone();
        v.set_precision(prec.0, RM).expect("precision");
        Self::wrap(v, prec.0)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    /// Newton iteration from an `f64` seed at 32 guard bits. Within one ulp,
    /// not always correctly rounded.
    pub fn sqrt(&self) -> Self {
        let Some(e) = self.binary_exponent() else {
            return Self::wrap(self.value.sqrt(self.prec, RM), self.prec);
        };
        if self.is_negative() {
            return Self::wrap(self.value.sqrt(self.prec, RM), self.prec);
        }
        let work = self.prec + 32;
        let half = e.div_euclid(2);
        // m in [1/4, 1), scaled exactly
        let m = self.value.mul(&Self::pow2(-2 * half, Precision(64)).value, work, RM);
        let seed = Self::from_f64(libm::sqrt(Self::wrap(m, work).to_f64()), Precision(work));
        let mut x = seed.value.mul(&Self::pow2(half, Precision(64)).value, work, RM);
        let a = self.value.clone();
        let halve = Self::pow2(-1, Precision(64)).value;
        let mut bits = 50;
        while bits < work {
            // each step doubles the correct bits, so it only needs that many
            let p = (2 * bits + 16).min(work);
            let q = a.div(&x, p, RM);
            x = x.add(&q, p, RM).mul(&halve, p, RM);
            bits *= 2;
        }
        x.set_precision(self.prec, RM).expect("precision");
        Self::wrap(x, self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.prec, RM), self.prec)
    }

    pub fn powi(&self, k: usize) -> Self {
        Self::wrap(self.value.powi(k, self.prec, RM), self.prec)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn max(&self, other: &Self) -> Self {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Exponent `e` with `|self| = m·2^e`, `1/2 <= m < 1`. `None` for zero
    /// and non-finite values.
    pub fn binary_exponent(&self) -> Option<i64> {
        if self.is_zero() || !self.is_finite() {
            return None;
        }
        self.value.exponent().map(|e| e as i64)
    }

    /// Nearest `f64`; saturates to `0` or `±inf` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, e, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if self.value.is_zero() {
            return 0.0;
        }
        let top = *words.last().expect("mantissa");
        let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
        let m = top as f64 + next as f64 / 18446744073709551616.0;
        let v = libm::ldexp(m, e - 64);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// The exact dyadic rational this value represents. `None` for
    /// non-finite values.
    pub fn to_ratio(&self) -> Option<ExactRational> {
        if !self.is_finite() {
            return None;
        }
        if self.value.is_zero() {
            return Some(ExactRational::zero());
        }
        let (words, _, sign, e, _) = self.value.as_raw_parts()?;
        let digits: Vec<u32> = words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect();
        let mut mantissa = BigInt::from(BigUint::new(digits));
        if sign == Sign::Neg {
            mantissa = -mantissa;
        }
        let shift = e as i64 - 64 * words.len() as i64;
        Some(if shift >= 0 {
            ExactRational::from_integer(mantissa << shift as usize)
        } else {
            ExactRational::new(mantissa, BigInt::one() << (-shift) as usize)
        })
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({}, {} bits)", super::decimal::format_sci(self, 20), self.prec)
    }
}

impl fmt::Display for HpReal {
    /// Scientific notation; `{:.N}` selects `N` significant digits
    /// (default 20).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20).max(1);
        f.write_str(&super::decimal::format_sci(self, digits))
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                let p = self.prec.max(rhs.prec);
                HpReal::wrap(BigFloat::$method(&self.value, &rhs.value, p, RM), p)
            }
        }
        impl $tr<HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                <&HpReal as $tr<&HpReal>>::$method(&self, &rhs)
            }
        }
        impl $tr<&HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                <&HpReal as $tr<&HpReal>>::$method(&self, rhs)
            }
        }
        impl $tr<HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                <&HpReal as $tr<&HpReal>>::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(BigFloat::neg(&self.value), self.prec)
    }
}

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        -&self
    }
}

/// Transcendental functions and constants at a fixed precision.
///
/// Holds the constant cache the underlying library needs; create one per
/// thread and reuse it.
pub struct HpContext {
    prec: Precision,
    consts: Consts,
}

impl fmt::Debug for HpContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HpContext").field("prec", &self.prec).finish()
    }
}

impl HpContext {
    pub fn new(prec: Precision) -> Self {
        HpContext { prec, consts: Consts::new().expect("constant cache allocation") }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn int(&self, v: i64) -> HpReal {
        HpReal::from_i64(v, self.prec)
    }

    pub fn ratio(&self, num: i64, den: i64) -> HpReal {
        HpReal::from_ratio(&crate::exact::rat(num, den), self.prec)
    }

    pub fn pi(&mut self) -> HpReal {
        HpReal::wrap(self.consts.pi(self.prec.0, RM), self.prec.0)
    }

    /// The golden ratio `(1 + √5)/2`.
    pub fn phi(&mut self) -> HpReal {
        (self.int(5).sqrt() + self.int(1)) / self.int(2)
    }

    pub fn sin(&mut self, x: &HpReal) -> HpReal {
        HpReal::wrap(x.value.sin(self.prec.0, RM, &mut self.consts), self.prec.0)
    }

    pub fn cos(&mut self, x: &HpReal) -> HpReal {
        HpReal::wrap(x.value.cos(self.prec.0, RM, &mut self.consts), self.prec.0)
    }

    /// `1 / sin x`.
    pub fn csc(&mut self, x: &HpReal) -> HpReal {
        self.sin(x).recip()
    }

    pub fn acos(&mut self, x: &HpReal) -> HpReal {
        HpReal::wrap(x.value.acos(self.prec.0, RM, &mut self.consts), self.prec.0)
    }

    /// Natural logarithm.
    pub fn ln(&mut self, x: &HpReal) -> HpReal {
        HpReal::wrap(x.value.ln(self.prec.0, RM, &mut self.consts), self.prec.0)
    }

    pub fn log10(&mut self, x: &HpReal) -> HpReal {
        HpReal::wrap(x.value.log10(self.prec.0, RM, &mut self.consts), self.prec.0)
    }

    /// `x^y` for `x > 0`, as `exp(y·ln x)` with 64 guard bits.
    ///
    /// The library's own `pow` does not terminate when the result is exactly
    /// representable (`4^{1/2}`), so it is not used.
    pub fn pow(&mut self, x: &HpReal, y: &HpReal) -> HpReal {
        let g = self.prec.0 + 64;
        let l = x.value.ln(g, RM, &mut self.consts);
        let e = l.mul(&y.value, g, RM).exp(g, RM, &mut self.consts);
        HpReal::wrap(e, g).with_precision(self.prec)
    }
}

/// Scalar operations needed by the eigen kernels, implemented for `f64` and
/// [`HpReal`] so one algorithm serves both precisions.
pub trait Real: Clone + PartialOrd + fmt::Debug {
    /// What is needed to create constants: nothing for `f64`, the precision
    /// for [`HpReal`].
    type Ctx: Copy + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64_in(v: i64, ctx: Self::Ctx) -> Self;
    fn from_int_in(v: &ExactInt, ctx: Self::Ctx) -> Self;
    fn precision_bits_in(ctx: Self::Ctx) -> usize;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Real for f64 {
    type Ctx = ();

    fn ctx(&self) {}

    fn from_i64_in(v: i64, _: ()) -> Self {
        v as f64
    }

    fn from_int_in(v: &ExactInt, _: ()) -> Self {
        HpReal::from_int(v, Precision(64)).to_f64()
    }

    fn precision_bits_in(_: ()) -> usize {
        53
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        libm::fabs(*self)
    }

    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Real for HpReal {
    type Ctx = Precision;

    fn ctx(&self) -> Precision {
        self.precision()
    }

    fn from_i64_in(v: i64, ctx: Precision) -> Self {
        HpReal::from_i64(v, ctx)
    }

    fn from_int_in(v: &ExactInt, ctx: Precision) -> Self {
        HpReal::from_int(v, ctx)
    }

    fn precision_bits_in(ctx: Precision) -> usize {
        ctx.get()
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        HpReal::abs(self)
    }

    fn sqrt(&self) -> Self {
        HpReal::sqrt(self)
    }

    fn is_zero(&self) -> bool {
        HpReal::is_zero(self)
    }

    fn is_finite(&self) -> bool {
        HpReal::is_finite(self)
    }

    fn to_f64(&self) -> f64 {
        HpReal::to_f64(self)
    }
}

/// `|a - b| <= rel·max(|a|, |b|)`.
pub fn rel_close(a: &HpReal, b: &HpReal, rel: &HpReal) -> bool {
    (a - b).abs() <= rel * &a.abs().max(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::Signed;

    const P: Precision = Precision::bits(256);

    #[test]
    fn integer_round_trip() {
        for v in [0i64, 1, -1, 7, -123456789, i64::MAX, i64::MIN + 1] {
            let x = HpReal::from_i64(v, P);
            assert_eq!(x.to_ratio().unwrap(), rat(v, 1));
        }
        let big: ExactInt = ExactInt::from(3) + (ExactInt::from(5) << 64usize) + (ExactInt::from(11) << 190usize);
        let x = HpReal::from_int(&big, P);
        assert_eq!(x.to_ratio().unwrap(), ExactRational::from_integer(big.clone()));
        assert_eq!(HpReal::from_int(&-big.clone(), P).to_ratio().unwrap(), ExactRational::from_integer(-big));
    }

    #[test]
    fn dyadic_fraction_is_exact() {
        let x = HpReal::from_f64(0.375, P);
        assert_eq!(x.to_ratio().unwrap(), rat(3, 8));
        assert_eq!(HpReal::pow2(-10, P).to_ratio().unwrap(), rat(1, 1024));
        assert_eq!(HpReal::pow2(3, P).to_ratio().unwrap(), rat(8, 1));
    }

    #[test]
    fn ratio_conversion_rounds_correctly() {
        let third = HpReal::from_ratio(&rat(1, 3), P);
        let err = (third.to_ratio().unwrap() - rat(1, 3)) * ExactRational::from_integer(ExactInt::one() << 256usize);
        // within one ulp at 256 bits (|1/3| < 1, so ulp <= 2^-256)
        assert!(err.abs() <= rat(1, 1));
    }

    #[test]
    fn arithmetic_and_ordering() {
        let a = HpReal::from_i64(7, P);
        let b = HpReal::from_i64(2, P);
        assert_eq!((&a + &b).to_f64(), 9.0);
        assert_eq!((&a - &b).to_f64(), 5.0);
        assert_eq!((&a * &b).to_f64(), 14.0);
        assert_eq!((&a / &b).to_f64(), 3.5);
        assert_eq!((-&a).to_f64(), -7.0);
        assert!(b < a);
        assert!(HpReal::from_i64(4, P).sqrt() == b);
        assert!((HpReal::from_i64(2, P).sqrt().to_f64() - core::f64::consts::SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn constants() {
        let mut cx = HpContext::new(P);
        assert!((cx.pi().to_f64() - core::f64::consts::PI).abs() < 1e-15);
        let phi = cx.phi();
        // golden ratio solves x² = x + 1
        assert!(rel_close(&phi.square(), &(&phi + cx.int(1)), &HpReal::pow2(-250, P)));
        let third_pi = cx.pi() / cx.int(3);
        assert!(rel_close(&cx.cos(&third_pi), &cx.ratio(1, 2), &HpReal::pow2(-250, P)));
        let half = cx.ratio(1, 2);
        assert!(rel_close(&cx.acos(&half), &third_pi, &HpReal::pow2(-250, P)));
        let thousand = cx.int(1000);
        assert!(rel_close(&cx.log10(&thousand), &cx.int(3), &HpReal::pow2(-250, P)));
        // exact results must not stall
        assert_eq!(cx.pow(&cx.int(4), &half), cx.int(2));
        assert_eq!(cx.pow(&cx.int(1), &half), cx.int(1));
        assert!(rel_close(&cx.pow(&cx.int(2), &cx.ratio(3, 2)), &cx.int(8).sqrt(), &HpReal::pow2(-250, P)));
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(HpReal::from_f64(-0.1, P).to_f64(), -0.1);
        assert_eq!(HpReal::from_i64(0, P).to_f64(), 0.0);
        let tiny = HpReal::pow2(-2000, P);
        assert_eq!(tiny.to_f64(), 0.0);
        assert_eq!(HpReal::pow2(-1000, P).to_f64(), libm::ldexp(1.0, -1000));
    }

    #[test]
    fn sqrt_within_an_ulp() {
        for bits in [64usize, 128, 256, 512, 2048] {
            let prec = Precision::bits(bits);
            let one = HpReal::one(prec);
            for v in [2.0, 0.25, 1e-200, 3e250, 7.0, 1.0, 0.5] {
                let x = HpReal::from_f64(v, prec);
                let s = x.sqrt();
                let r = (&(&s * &s) / &x - &one).abs();
                assert!(r <= HpReal::pow2(2 - bits as i64, prec), "{bits} bits, {v}");
            }
            assert_eq!(HpReal::from_i64(4, prec).sqrt(), HpReal::from_i64(2, prec));
            assert!(HpReal::zero(prec).sqrt().is_zero());
        }
    }
}
