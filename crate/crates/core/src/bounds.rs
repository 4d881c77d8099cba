//! `c_n`, `C_n` and the closed-form bounds on them.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::exact::{alt_sign, int_rat, rat, ExactInt, ExactRational, FibCache};
use crate::hp::{
    adaptive_eval, lambda_max_sym, AdaptiveConfig, AdaptiveError, AdaptiveOutcome, EigenError, HpContext, HpReal,
    Precision,
};
use crate::matrices::{self, build_z, IntSymMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("precision control failed: {0}")]
    Adaptive(AdaptiveError<EigenError>),
}

impl From<MatrixError> for BoundsError {
    fn from(_: MatrixError) -> Self {
        BoundsError::ZeroDimension
    }
}

impl From<AdaptiveError<EigenError>> for BoundsError {
    fn from(e: AdaptiveError<EigenError>) -> Self {
        match e {
            AdaptiveError::Inner(e) => BoundsError::Eigen(e),
            e => BoundsError::Adaptive(e),
        }
    }
}

/// Every quantity the bounds module can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `c_n = 1/λ_max(Z_n)`.
    ExactCn,
    /// `1/‖Z_n‖_F` from the matrix entries.
    FrobeniusLemma,
    /// The closed-form Frobenius bound in golden-ratio form.
    TheoremMain,
    /// The same bound with the parity resolved.
    CorollaryOddEven,
    Mattila,
    Altinisik,
    /// `C_n = ¼csc²(π/(4n+2))`.
    ExactUpperCn,
    /// `√(Σ k²(2n−2k+1))`, an upper bound on `C_n`.
    IhmOldUpper,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::ExactCn,
        BoundKind::FrobeniusLemma,
        BoundKind::TheoremMain,
        BoundKind::CorollaryOddEven,
        BoundKind::Mattila,
        BoundKind::Altinisik,
        BoundKind::ExactUpperCn,
        BoundKind::IhmOldUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::ExactCn => "exact_cn",
            BoundKind::FrobeniusLemma => "frobenius_lemma",
            BoundKind::TheoremMain => "theorem_main",
            BoundKind::CorollaryOddEven => "corollary_odd_even",
            BoundKind::Mattila => "mattila",
            BoundKind::Altinisik => "altinisik",
            BoundKind::ExactUpperCn => "exact_Cn",
            BoundKind::IhmOldUpper => "ihm_old_upper",
        }
    }

    /// True for the lower bounds on `c_n`.
    pub fn is_lower_bound(self) -> bool {
        matches!(
            self,
            BoundKind::FrobeniusLemma
                | BoundKind::TheoremMain
                | BoundKind::CorollaryOddEven
                | BoundKind::Mattila
                | BoundKind::Altinisik
        )
    }

    /// Evaluates the quantity at `prec`. `ExactCn` runs the eigensolver at
    /// that precision without precision doubling.
    pub fn evaluate(self, n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
        check_n(n)?;
        Ok(match self {
            BoundKind::ExactCn => c_from_z(&build_z(n)?, prec)?,
            BoundKind::FrobeniusLemma => bound_frobenius(n, prec)?,
            BoundKind::TheoremMain => bound_theorem_main(n, prec)?,
            BoundKind::CorollaryOddEven => bound_corollary(n, prec)?,
            BoundKind::Mattila => bound_mattila(n, prec)?,
            BoundKind::Altinisik => bound_altinisik(n, prec)?,
            BoundKind::ExactUpperCn => c_upper_closed_form(n, prec)?,
            BoundKind::IhmOldUpper => ihm_old_upper(n, prec)?,
        })
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown bound kind `{0}`")]
pub struct UnknownBound(pub alloc::string::String);

impl FromStr for BoundKind {
    type Err = UnknownBound;

    /// Accepts the canonical names and the hyphenated CLI spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: alloc::string::String = s.chars().map(|c| if c == '-' { '_' } else { c }).collect();
        Ok(match norm.as_str() {
            "exact_cn" | "cn" => BoundKind::ExactCn,
            "frobenius_lemma" | "frobenius" => BoundKind::FrobeniusLemma,
            "theorem_main" => BoundKind::TheoremMain,
            "corollary_odd_even" | "corollary" => BoundKind::CorollaryOddEven,
            "mattila" => BoundKind::Mattila,
            "altinisik" => BoundKind::Altinisik,
            "exact_Cn" | "exact_upper_cn" | "Cn" => BoundKind::ExactUpperCn,
            "ihm_old_upper" => BoundKind::IhmOldUpper,
            _ => return Err(UnknownBound(s.into())),
        })
    }
}

fn check_n(n: usize) -> Result<(), BoundsError> {
    if n == 0 {
        Err(BoundsError::ZeroDimension)
    } else {
        Ok(())
    }
}

fn guard(prec: Precision) -> Precision {
    Precision::bits(prec.get() + 64)
}

/// `1/λ_max(z)` at a single precision.
pub fn c_from_z(z: &IntSymMatrix, prec: Precision) -> Result<HpReal, EigenError> {
    Ok(lambda_max_sym(z, prec, &prec.default_tolerance())?.recip())
}

/// `c_n` stable to `target_digits` significant digits.
pub fn c_exact(n: usize, target_digits: u32) -> Result<AdaptiveOutcome, BoundsError> {
    c_exact_with(n, target_digits, AdaptiveConfig::for_digits(target_digits))
}

pub fn c_exact_with(n: usize, target_digits: u32, cfg: AdaptiveConfig) -> Result<AdaptiveOutcome, BoundsError> {
    check_n(n)?;
    let z = build_z(n)?;
    Ok(adaptive_eval(target_digits, cfg, |p| c_from_z(&z, p))?)
}

/// `1/√(‖Z_n‖_F²)` with the squared norm summed from the entries.
pub fn bound_frobenius(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    let f = matrices::frobenius_sq_direct(n)?;
    Ok(HpReal::from_int(&f, guard(prec)).sqrt().recip().with_precision(prec))
}

/// Coefficients of `a₄(φ^{4n}+φ^{−4n}) + a₂(φ^{2n}+φ^{−2n}) + b·n(φ^{2n}−φ^{−2n}) + c`.
struct PhiForm {
    a4: ExactRational,
    a2: ExactRational,
    c: ExactRational,
}

fn eval_phi_form(n: usize, form: &PhiForm, prec: Precision) -> HpReal {
    let g = guard(prec);
    let mut cx = HpContext::new(g);
    let phi = cx.phi();
    let p2 = phi.powi(2 * n);
    let m2 = p2.recip();
    let p4 = p2.square();
    let m4 = p4.recip();
    let q = |r: &ExactRational| HpReal::from_ratio(r, g);
    // 2/(5√5)
    let b = cx.int(2) / (cx.int(5) * cx.int(5).sqrt());
    let s = q(&form.a4) * (p4 + m4)
        + q(&form.a2) * (&p2 + &m2)
        + b * cx.int(n as i64) * (p2 - m2)
        + q(&form.c);
    s.sqrt().recip().with_precision(prec)
}

/// The squared-Frobenius closed form written in powers of the golden ratio;
/// the bound is its inverse square root.
pub fn bound_theorem_main(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    let sign = int_rat(&alt_sign(n as i64));
    let form = PhiForm {
        a4: rat(1, 25),
        a2: (rat(3, 1) + &sign) / rat(25, 1),
        c: (rat(13, 1) * &sign - rat(33, 1)) / rat(50, 1) + rat(n as i64, 1),
    };
    Ok(eval_phi_form(n, &form, prec))
}

/// The parity-resolved form: `2/25` and `n − 23/25` for odd `n`, `4/25`
/// and `n − 2/5` for even `n`.
pub fn bound_corollary(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    let nn = rat(n as i64, 1);
    let form = if n % 2 == 1 {
        PhiForm { a4: rat(1, 25), a2: rat(2, 25), c: nn - rat(23, 25) }
    } else {
        PhiForm { a4: rat(1, 25), a2: rat(4, 25), c: nn - rat(2, 5) }
    };
    Ok(eval_phi_form(n, &form, prec))
}

/// `(48/(n⁴+56n²+48n))^{(n−1)/2}` for even `n`,
/// `(48/(n⁴+50n²+48n−51))^{(n−1)/2}` for odd `n`.
pub fn bound_mattila(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    let m = ExactInt::from(n as u64);
    let m2 = &m * &m;
    let den = if n.is_multiple_of(2) {
        &m2 * &m2 + ExactInt::from(56) * &m2 + ExactInt::from(48) * &m
    } else {
        &m2 * &m2 + ExactInt::from(50) * &m2 + ExactInt::from(48) * &m - ExactInt::from(51)
    };
    let r = ExactRational::new(ExactInt::from(48), den);
    Ok(if n % 2 == 1 {
        HpReal::from_ratio(&num_traits::pow(r, (n - 1) / 2), prec)
    } else {
        HpReal::from_ratio(&num_traits::pow(r, n - 1), guard(prec)).sqrt().with_precision(prec)
    })
}

/// `2/(2F_nF_{n+1} + (−1)^n + 1)` as an exact fraction.
pub fn altinisik_exact(n: usize) -> Result<ExactRational, BoundsError> {
    check_n(n)?;
    let fib = FibCache::with_len(n + 1);
    let den = ExactInt::from(2) * fib.f(n) * fib.f(n + 1) + alt_sign(n as i64) + ExactInt::one();
    Ok(ExactRational::new(ExactInt::from(2), den))
}

pub fn bound_altinisik(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    Ok(HpReal::from_ratio(&altinisik_exact(n)?, prec))
}

/// `C_n = ¼csc²(π/(4n+2))`.
pub fn c_upper_closed_form(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    let mut cx = HpContext::new(guard(prec));
    let x = cx.pi() / cx.int(4 * n as i64 + 2);
    let s = cx.sin(&x);
    Ok((cx.int(4) * s.square()).recip().with_precision(prec))
}

/// `4n²/π² + 4n/π² + 1/12 + 1/π²`.
pub fn c_upper_asymptotic(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    let mut cx = HpContext::new(guard(prec));
    let pi2 = cx.pi().square();
    let nn = cx.int(n as i64);
    let v = (cx.int(4) * &nn * &nn + cx.int(4) * &nn + cx.int(1)) / pi2 + cx.ratio(1, 12);
    Ok(v.with_precision(prec))
}

/// `Σ_{k=1}^n k²(2n−2k+1)`.
pub fn ihm_old_upper_sq(n: usize) -> ExactInt {
    (1..=n as u64)
        .map(|k| ExactInt::from(k * k) * ExactInt::from(2 * (n as u64 - k) + 1))
        .fold(ExactInt::zero(), |a, b| a + b)
}

pub fn ihm_old_upper(n: usize, prec: Precision) -> Result<HpReal, BoundsError> {
    check_n(n)?;
    Ok(HpReal::from_int(&ihm_old_upper_sq(n), guard(prec)).sqrt().with_precision(prec))
}

/// Chebyshev polynomial of the second kind by the three-term recurrence.
pub fn chebyshev_u(k: usize, x: &HpReal) -> HpReal {
    let p = x.precision();
    let two_x = HpReal::from_i64(2, p) * x;
    let mut prev = HpReal::one(p);
    if k == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for _ in 1..k {
        let next = &two_x * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The trigonometric form `sin((k+1)·arccos x)/√(1−x²)`, for `|x| < 1`.
pub fn chebyshev_u_trig(k: usize, x: &HpReal, cx: &mut HpContext) -> HpReal {
    let theta = cx.acos(x);
    let s = cx.sin(&(theta * cx.int(k as i64 + 1)));
    s / (cx.int(1) - x.square()).sqrt()
}

/// `4cos²(jπ/(2n+1))` for `j = 1..n`, ascending.
pub fn b_eigenvalues_closed_form(n: usize, prec: Precision) -> Result<Vec<HpReal>, BoundsError> {
    check_n(n)?;
    let mut cx = HpContext::new(guard(prec));
    let pi = cx.pi();
    // cos is decreasing on [0, π/2], so j = n gives the smallest value
    let vals = (1..=n)
        .rev()
        .map(|j| {
            let c = cx.cos(&(&pi * cx.int(j as i64) / cx.int(2 * n as i64 + 1)));
            (cx.int(4) * c.square()).with_precision(prec)
        })
        .collect();
    Ok(vals)
}

/// `c_n·φ^{2n}/5`, which tends to 1 if `c_n ∼ 5φ^{−2n}`.
pub fn conjecture_ratio(n: usize, target_digits: u32) -> Result<HpReal, BoundsError> {
    let c = c_exact(n, target_digits)?;
    let mut cx = HpContext::new(c.precision);
    let phi = cx.phi();
    Ok(c.value * phi.powi(2 * n) / cx.int(5))
}

/// Number of common significant digits, `floor(−log₁₀(|a−b|/|a|))`.
///
/// `None` when `a == b` (unbounded agreement) or `a` is zero.
pub fn sig_digits(a: &HpReal, b: &HpReal) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let diff = (a - b).abs();
    if diff.is_zero() {
        return None;
    }
    crate::hp::decimal::decimal_exponent(&(diff / a.abs())).map(|e| -e - 1)
}

/// `(c − b)/c`, the relative gap between `c_n` and a lower bound.
pub fn relative_error(c: &HpReal, bound: &HpReal) -> HpReal {
    (c - bound) / c
}

/// The exact squared Frobenius norm from the closed form, checked to be an
/// integer.
pub fn frobenius_sq_exact(n: usize) -> Result<ExactInt, BoundsError> {
    let r = matrices::frobenius_sq_closed_form(n)?;
    debug_assert!(r.denom().is_one() && r.numer().is_positive());
    Ok(r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::decimal::format_fixed;
    use crate::hp::eigenvalues_sym;
    use crate::matrices::{build_b, build_w};
    use proptest::prelude::*;

    const P: Precision = Precision::bits(256);

    fn f9(x: &HpReal) -> alloc::string::String {
        format_fixed(x, 9)
    }

    fn rel(a: &HpReal, b: &HpReal) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    #[test]
    fn exact_cn_table_values() {
        assert_eq!(f9(&c_exact(1, 9).unwrap().value), "1.000000000");
        assert_eq!(f9(&c_exact(2, 9).unwrap().value), "0.381966011");
        assert_eq!(f9(&c_exact(7, 9).unwrap().value), "0.005816999");
        assert_eq!(f9(&c_exact(10, 9).unwrap().value), "0.000330004");
        assert_eq!(c_exact(0, 9).unwrap_err(), BoundsError::ZeroDimension);
    }

    #[test]
    fn c2_is_golden_conjugate_squared() {
        let cx = HpContext::new(P);
        let expected = (cx.int(3) - cx.int(5).sqrt()) / cx.int(2);
        let got = c_exact(2, 60).unwrap().value;
        assert!(rel(&got, &expected) < 1e-60);
    }

    #[test]
    fn theorem_and_corollary_values() {
        assert_eq!(f9(&bound_theorem_main(1, P).unwrap()), "1.000000000");
        assert_eq!(f9(&bound_theorem_main(2, P).unwrap()), "0.377964473");
        assert_eq!(f9(&bound_theorem_main(5, P).unwrap()), "0.037037037");
        assert_eq!(f9(&bound_corollary(3, P).unwrap()), "0.196116135");
        assert_eq!(f9(&bound_corollary(4, P).unwrap()), "0.086710997");
        for n in 1..=60 {
            assert_eq!(bound_theorem_main(n, P).unwrap(), bound_corollary(n, P).unwrap(), "n={n}");
        }
    }

    #[test]
    fn theorem_matches_frobenius_closed_form() {
        for n in (1..=300).step_by(7) {
            let b = bound_theorem_main(n, P).unwrap();
            let f = HpReal::from_int(&frobenius_sq_exact(n).unwrap(), P);
            let prod = &b * &f.sqrt();
            assert!(rel(&prod, &HpReal::one(P)) < 1e-70, "n={n}");
            assert!(rel(&bound_frobenius(n, P).unwrap(), &b) < 1e-70);
        }
    }

    #[test]
    fn prior_bounds_values() {
        assert_eq!(f9(&bound_mattila(1, P).unwrap()), "1.000000000");
        assert_eq!(f9(&bound_mattila(2, P).unwrap()), "0.377964473");
        assert_eq!(f9(&bound_mattila(3, P).unwrap()), "0.076923077");
        assert_eq!(f9(&bound_altinisik(2, P).unwrap()), "0.333333333");
        assert_eq!(f9(&bound_altinisik(3, P).unwrap()), "0.166666667");
        assert_eq!(f9(&bound_altinisik(10, P).unwrap()), "0.000204248");
        assert_eq!(altinisik_exact(3).unwrap(), rat(1, 6));
    }

    #[test]
    fn upper_closed_form_and_asymptotics() {
        assert_eq!(c_upper_closed_form(1, P).unwrap().to_f64(), 1.0);
        let mut cx = HpContext::new(P);
        let phi2 = cx.phi().square();
        assert!(rel(&c_upper_closed_form(2, P).unwrap(), &phi2) < 1e-70);
        assert_eq!(f9(&c_upper_closed_form(3, P).unwrap()), "5.048917340");
        let a1 = c_upper_asymptotic(1, P).unwrap().to_f64();
        assert!((a1 - 0.9952).abs() < 1e-3, "{a1}");
        for n in [10usize, 50, 200] {
            let r = (c_upper_closed_form(n, P).unwrap() - c_upper_asymptotic(n, P).unwrap()).abs().to_f64();
            let scaled = r * (n * n) as f64;
            assert!(scaled < 0.02, "n={n}: {scaled}");
        }
        let r200 = (c_upper_closed_form(2000, P).unwrap() - c_upper_asymptotic(2000, P).unwrap()).to_f64();
        let lim = core::f64::consts::PI.powi(2) / 960.0;
        assert!((r200 * 4e6 - lim).abs() < 1e-4);
    }

    #[test]
    fn ihm_upper_dominates() {
        assert_eq!(ihm_old_upper_sq(1), ExactInt::from(1));
        assert_eq!(ihm_old_upper_sq(2), ExactInt::from(7));
        for n in 1..=50 {
            assert!(ihm_old_upper(n, P).unwrap() >= c_upper_closed_form(n, P).unwrap(), "n={n}");
        }
    }

    #[test]
    fn b_spectrum_matches_eigensolver() {
        assert_eq!(b_eigenvalues_closed_form(1, P).unwrap()[0].to_f64(), 1.0);
        for n in [2usize, 10, 17] {
            let closed = b_eigenvalues_closed_form(n, P).unwrap();
            let num = eigenvalues_sym(&build_b(n).unwrap(), P, &P.default_tolerance()).unwrap();
            for (a, b) in closed.iter().zip(&num.eigenvalues) {
                assert!((a - b).abs().to_f64() < 1e-30, "n={n}");
            }
            let c_up = c_upper_closed_form(n, P).unwrap();
            assert!(rel(&closed[0].recip(), &c_up) < 1e-60);
            let w_max = lambda_max_sym(&build_w(n).unwrap(), P, &P.default_tolerance()).unwrap();
            assert!(rel(&(&w_max * &num.eigenvalues[0]), &HpReal::one(P)) < 1e-60);
        }
    }

    #[test]
    fn chebyshev_examples() {
        let half = HpReal::from_f64(0.5, P);
        assert!(chebyshev_u(2, &half).abs().to_f64() < 1e-70);
        assert_eq!(chebyshev_u(0, &HpReal::from_f64(123.0, P)).to_f64(), 1.0);
        // U_3(1/2) = det(A_3 − I)
        assert_eq!(chebyshev_u(3, &half).to_f64(), -1.0);
        let a3 = crate::matrices::build_a(3).unwrap();
        let shifted = (1..=3).fold(a3, |m, i| m.with_diagonal_shift(i, &ExactInt::from(-1)));
        assert_eq!(shifted.determinant(), ExactInt::from(-1));
    }

    #[test]
    fn conjecture_ratio_approaches_one() {
        let r2 = conjecture_ratio(2, 12).unwrap().to_f64();
        assert!((r2 - 0.5236).abs() < 1e-4, "{r2}");
        let r20 = conjecture_ratio(20, 12).unwrap().to_f64();
        let r40 = conjecture_ratio(40, 12).unwrap().to_f64();
        assert!((r20 - 1.0).abs() < 0.01);
        assert!((r40 - 1.0).abs() < (r20 - 1.0).abs());
    }

    #[test]
    fn significant_digits_metric() {
        let a = HpReal::from_f64(1.0, P);
        assert_eq!(sig_digits(&a, &HpReal::from_f64(1.0005, P)), Some(3));
        assert_eq!(sig_digits(&a, &HpReal::from_f64(1.5, P)), Some(0));
        assert_eq!(sig_digits(&a, &a), None);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in BoundKind::ALL {
            assert_eq!(k.name().parse::<BoundKind>().unwrap(), k);
        }
        assert_eq!("theorem-main".parse::<BoundKind>().unwrap(), BoundKind::TheoremMain);
        assert!("nope".parse::<BoundKind>().is_err());
        let v = BoundKind::Altinisik.evaluate(3, P).unwrap();
        assert_eq!(f9(&v), "0.166666667");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn chebyshev_recurrence_matches_trig_form(k in 0usize..=60, x in -0.999f64..0.999) {
            let mut cx = HpContext::new(P);
            let xv = HpReal::from_f64(x, P);
            let rec = chebyshev_u(k, &xv);
            let trig = chebyshev_u_trig(k, &xv, &mut cx);
            prop_assert!((rec - trig).abs().to_f64() < 1e-60);
        }
    }
}
