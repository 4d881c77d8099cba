//! Power GCD matrices on divisor-closed sets and the eigenvalue bounds
//! `c_n·min J_α ≤ λ_min(A)`, `λ_max(A) ≤ C_n·max J_α` with `J_α` the
//! Jordan totient.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::bounds::{c_exact_with, c_upper_closed_form, BoundsError};
use crate::exact::ExactInt;
use crate::hp::{
    eigenvalues_sym, jacobi_eigenvalues, AdaptiveConfig, EigenError, EigenResult, HpContext, HpReal, Precision,
    RealSymMatrix, MAX_SWEEPS,
};
use crate::matrices::IntSymMatrix;

/// Largest set size accepted by default.
pub const DEFAULT_SIZE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ApplicationError {
    #[error("set must be nonempty")]
    EmptySet,
    #[error("set elements must be positive and strictly increasing")]
    NotIncreasing,
    #[error("set is not divisor-closed: {divisor} divides {element} but is missing")]
    NotDivisorClosed { element: u64, divisor: u64 },
    #[error("set size {size} exceeds the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("exponent must be positive and finite")]
    InvalidAlpha,
    #[error("argument must be a positive integer")]
    NonPositive,
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Exponent of a power GCD matrix. Integer exponents keep the matrix exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Integer(u32),
    Real(f64),
}

impl Alpha {
    pub fn new(v: f64) -> Result<Alpha, ApplicationError> {
        if !(v.is_finite() && v > 0.0) {
            return Err(ApplicationError::InvalidAlpha);
        }
        if v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(Alpha::Integer(v as u32))
        } else {
            Ok(Alpha::Real(v))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Alpha::Integer(k) => k as f64,
            Alpha::Real(v) => v,
        }
    }

    fn hp(self, prec: Precision) -> HpReal {
        match self {
            Alpha::Integer(k) => HpReal::from_u64(k as u64, prec),
            Alpha::Real(v) => HpReal::from_f64(v, prec),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Integer(k) => write!(f, "{k}"),
            Alpha::Real(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Alpha {
    type Err = ApplicationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: f64 = s.trim().parse().map_err(|_| ApplicationError::InvalidAlpha)?;
        Alpha::new(v)
    }
}

/// Prime factorization by trial division, as `(p, e)` pairs.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `J_k(m) = ∏ p^{k(e−1)}(p^k − 1)` over `m = ∏ p^e`.
pub fn jordan_totient_exact(m: u64, k: u32) -> Result<ExactInt, ApplicationError> {
    if m == 0 || k == 0 {
        return Err(ApplicationError::NonPositive);
    }
    Ok(factorize(m).into_iter().fold(ExactInt::from(1), |acc, (p, e)| {
        let pk: ExactInt = num_traits::pow(ExactInt::from(p), k as usize);
        acc * num_traits::pow(pk.clone(), (e - 1) as usize) * (pk - 1)
    }))
}

/// `m^α ∏_{p|m} (1 − p^{−α})`.
pub fn jordan_totient(m: u64, alpha: Alpha, prec: Precision) -> Result<HpReal, ApplicationError> {
    match alpha {
        Alpha::Integer(k) => Ok(HpReal::from_int(&jordan_totient_exact(m, k)?, prec)),
        Alpha::Real(_) => {
            if m == 0 {
                return Err(ApplicationError::NonPositive);
            }
            let mut cx = HpContext::new(prec);
            let a = alpha.hp(prec);
            let mut acc = cx.pow(&cx.int(m as i64), &a);
            for (p, _) in factorize(m) {
                let pa = cx.pow(&cx.int(p as i64), &a);
                acc = acc * (cx.int(1) - pa.recip());
            }
            Ok(acc)
        }
    }
}

/// Checks that `set` is strictly increasing, positive and divisor-closed.
pub fn validate_divisor_closed(set: &[u64]) -> Result<(), ApplicationError> {
    if set.is_empty() {
        return Err(ApplicationError::EmptySet);
    }
    if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ApplicationError::NotIncreasing);
    }
    for &x in set {
        let mut d = 1;
        while d * d <= x {
            if x % d == 0 {
                for div in [d, x / d] {
                    if set.binary_search(&div).is_err() {
                        return Err(ApplicationError::NotDivisorClosed { element: x, divisor: div });
                    }
                }
            }
            d += 1;
        }
    }
    Ok(())
}

/// The matrix `(gcd(x_i, x_j)^α)` on a divisor-closed set.
#[derive(Debug, Clone)]
pub struct PowerGcdMatrix {
    set: Vec<u64>,
    alpha: Alpha,
}

impl PowerGcdMatrix {
    pub fn new(set: Vec<u64>, alpha: Alpha) -> Result<Self, ApplicationError> {
        Self::with_cap(set, alpha, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(set: Vec<u64>, alpha: Alpha, cap: usize) -> Result<Self, ApplicationError> {
        validate_divisor_closed(&set)?;
        if set.len() > cap {
            return Err(ApplicationError::TooLarge { size: set.len(), cap });
        }
        if let Alpha::Real(v) = alpha {
            Alpha::new(v)?;
        }
        Ok(PowerGcdMatrix { set, alpha })
    }

    pub fn set(&self) -> &[u64] {
        &self.set
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.set.len()
    }

    /// The exact matrix, for integer exponents.
    pub fn exact(&self) -> Option<IntSymMatrix> {
        let Alpha::Integer(k) = self.alpha else {
            return None;
        };
        let s = &self.set;
        Some(
            IntSymMatrix::from_upper_fn(s.len(), |i, j| {
                num_traits::pow(ExactInt::from(s[i - 1].gcd(&s[j - 1])), k as usize)
            })
            .expect("nonempty"),
        )
    }

    /// `x^α` for each element. Every gcd of two elements, and every prime
    /// dividing one, is again an element.
    fn powers(&self, prec: Precision) -> Vec<HpReal> {
        let mut cx = HpContext::new(prec);
        let a = self.alpha.hp(prec);
        self.set.iter().map(|&x| cx.pow(&cx.int(x as i64), &a)).collect()
    }

    fn power_of(&self, powers: &[HpReal], x: u64) -> HpReal {
        let k = self.set.binary_search(&x).expect("divisor-closed");
        powers[k].clone()
    }

    pub fn to_real(&self, prec: Precision) -> RealSymMatrix<HpReal> {
        let powers = self.powers(prec);
        let s = &self.set;
        RealSymMatrix::from_upper_fn(s.len(), |i, j| self.power_of(&powers, s[i].gcd(&s[j])))
    }

    /// `J_α(x)` for each element; agrees with [`jordan_totient`].
    pub fn totients(&self, prec: Precision) -> Result<Vec<HpReal>, ApplicationError> {
        if let Alpha::Integer(k) = self.alpha {
            return self.set.iter().map(|&x| Ok(HpReal::from_int(&jordan_totient_exact(x, k)?, prec))).collect();
        }
        let powers = self.powers(prec);
        let one = HpReal::one(prec);
        Ok(self
            .set
            .iter()
            .zip(&powers)
            .map(|(&x, xa)| {
                factorize(x)
                    .into_iter()
                    .fold(xa.clone(), |acc, (p, _)| acc * (&one - &self.power_of(&powers, p).recip()))
            })
            .collect())
    }

    pub fn eigenvalues(&self, prec: Precision) -> Result<EigenResult, ApplicationError> {
        let tol = prec.default_tolerance();
        Ok(match self.exact() {
            Some(m) => eigenvalues_sym(&m, prec, &tol)?,
            None => jacobi_eigenvalues(self.to_real(prec), &tol, MAX_SWEEPS)?,
        })
    }
}

/// `c_n` and `C_n` for one dimension.
#[derive(Debug, Clone)]
pub struct ExtremalConstants {
    pub c_n: HpReal,
    pub upper_c_n: HpReal,
}

impl ExtremalConstants {
    pub fn compute(n: usize, target_digits: u32, prec: Precision) -> Result<Self, ApplicationError> {
        let c = c_exact_with(n, target_digits, AdaptiveConfig::starting_at(prec))?;
        Ok(ExtremalConstants { c_n: c.value.with_precision(prec), upper_c_n: c_upper_closed_form(n, prec)? })
    }
}

/// Extremal eigenvalues of a power GCD matrix next to their bounds.
#[derive(Debug, Clone)]
pub struct GcdBoundsReport {
    pub set: Vec<u64>,
    pub alpha: Alpha,
    pub lambda_min: HpReal,
    pub lambda_max: HpReal,
    pub lower_bound: HpReal,
    pub upper_bound: HpReal,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl GcdBoundsReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Precision used for a requested digit count.
pub fn precision_for_digits(target_digits: u32) -> Precision {
    AdaptiveConfig::for_digits(target_digits).start.max(Precision::bits(256))
}

/// Computes both sides of the two inequalities. They count as holding when
/// violated by no more than a relative `10^{-(target_digits−1)}`, which
/// absorbs rounding in the equality cases.
pub fn gcd_matrix_bounds(set: &[u64], alpha: Alpha, target_digits: u32) -> Result<GcdBoundsReport, ApplicationError> {
    let m = PowerGcdMatrix::new(set.to_vec(), alpha)?;
    let prec = precision_for_digits(target_digits);
    let consts = ExtremalConstants::compute(m.dim(), target_digits.max(2), prec)?;
    gcd_matrix_bounds_with(&m, &consts, target_digits, prec)
}

/// As [`gcd_matrix_bounds`], reusing precomputed constants for `|S|`.
pub fn gcd_matrix_bounds_with(
    m: &PowerGcdMatrix,
    consts: &ExtremalConstants,
    target_digits: u32,
    prec: Precision,
) -> Result<GcdBoundsReport, ApplicationError> {
    let eig = m.eigenvalues(prec)?;
    let totients = m.totients(prec)?;
    let jmin = totients.iter().fold(totients[0].clone(), |a, b| a.min(b));
    let jmax = totients.iter().fold(totients[0].clone(), |a, b| a.max(b));
    let lower_bound = &consts.c_n * &jmin;
    let upper_bound = &consts.upper_c_n * &jmax;
    let slack = HpReal::from_ratio(
        &crate::exact::ExactRational::new(
            ExactInt::from(1),
            num_traits::pow(ExactInt::from(10), target_digits.saturating_sub(1) as usize),
        ),
        prec,
    );
    let one = HpReal::one(prec);
    let lambda_min = eig.min().clone();
    let lambda_max = eig.max().clone();
    let lower_holds = lower_bound <= &lambda_min * &(&one + &slack);
    let upper_holds = lambda_max <= &upper_bound * &(&one + &slack);
    Ok(GcdBoundsReport {
        set: m.set().to_vec(),
        alpha: m.alpha(),
        lambda_min,
        lambda_max,
        lower_bound,
        upper_bound,
        lower_holds,
        upper_holds,
    })
}

/// Every divisor-closed subset of `{1..max_elem}` with `1..=max_size`
/// elements, each sorted ascending.
pub fn divisor_closed_sets(max_elem: u64, max_size: usize) -> Vec<Vec<u64>> {
    // Build sets by adding elements in increasing order; an element may join
    // once all of its proper divisors are present.
    let mut out = Vec::new();
    let mut cur: Vec<u64> = Vec::new();
    fn rec(next: u64, max_elem: u64, max_size: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_size {
            return;
        }
        for x in next..=max_elem {
            let ok = (1..x).filter(|d| x % d == 0).all(|d| cur.binary_search(&d).is_ok());
            if ok {
                cur.push(x);
                rec(x + 1, max_elem, max_size, cur, out);
                cur.pop();
            }
        }
    }
    rec(1, max_elem, max_size, &mut cur, &mut out);
    out
}

/// Parses `"a..b"` (inclusive) or a comma-separated list.
pub fn parse_set(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| alloc::format!("bad range start in `{s}`"))?;
        let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| alloc::format!("bad range end in `{s}`"))?;
        if a > b {
            return Err(alloc::format!("empty range `{s}`"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|_| alloc::format!("bad set element `{t}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: Precision = Precision::bits(256);

    fn mobius(m: u64) -> i64 {
        let f = factorize(m);
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn mobius_sum(m: u64, k: u32) -> ExactInt {
        (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .map(|d| num_traits::pow(ExactInt::from(d), k as usize) * ExactInt::from(mobius(m / d)))
            .fold(ExactInt::from(0), |a, b| a + b)
    }

    #[test]
    fn totient_examples() {
        assert_eq!(jordan_totient_exact(1, 1).unwrap(), ExactInt::from(1));
        assert_eq!(jordan_totient_exact(6, 1).unwrap(), ExactInt::from(2));
        assert_eq!(jordan_totient_exact(4, 2).unwrap(), ExactInt::from(12));
        assert!(jordan_totient_exact(0, 1).is_err());
    }

    #[test]
    fn totient_matches_mobius_sum() {
        for m in 1..=200u64 {
            for k in 1..=3 {
                assert_eq!(jordan_totient_exact(m, k).unwrap(), mobius_sum(m, k), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn real_exponent_totient_agrees_with_integer_path() {
        for m in [1u64, 6, 12, 30, 97] {
            let exact = jordan_totient(m, Alpha::Integer(2), P).unwrap();
            let real = jordan_totient(m, Alpha::Real(2.0), P).unwrap();
            assert!(((&exact - &real) / &exact).abs().to_f64() < 1e-60, "m={m}");
        }
        // J_{1/2}(4) = 2·(1 − 1/√2)
        let v = jordan_totient(4, Alpha::Real(0.5), P).unwrap().to_f64();
        assert!((v - 2.0 * (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn matrix_totients_match_single_evaluations() {
        let set = alloc::vec![1u64, 2, 3, 4, 6, 9, 12, 18];
        for alpha in [Alpha::Real(0.5), Alpha::Real(1.7), Alpha::Integer(3)] {
            let m = PowerGcdMatrix::new(set.clone(), alpha).unwrap();
            for (&x, t) in set.iter().zip(m.totients(P).unwrap()) {
                let single = jordan_totient(x, alpha, P).unwrap();
                assert!(((&t - &single) / &single).abs().to_f64() < 1e-70, "x={x} α={alpha}");
            }
        }
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("2".parse::<Alpha>().unwrap(), Alpha::Integer(2));
        assert_eq!("0.5".parse::<Alpha>().unwrap(), Alpha::Real(0.5));
        assert!("-1".parse::<Alpha>().is_err());
        assert!("0".parse::<Alpha>().is_err());
        assert!("x".parse::<Alpha>().is_err());
    }

    #[test]
    fn set_validation() {
        assert!(validate_divisor_closed(&[1, 2, 3, 4, 6, 12]).is_ok());
        assert_eq!(
            validate_divisor_closed(&[1, 4]),
            Err(ApplicationError::NotDivisorClosed { element: 4, divisor: 2 })
        );
        assert_eq!(validate_divisor_closed(&[2, 1]), Err(ApplicationError::NotIncreasing));
        assert_eq!(validate_divisor_closed(&[]), Err(ApplicationError::EmptySet));
        assert!(PowerGcdMatrix::new((1..=13).collect(), Alpha::Integer(1)).is_err());
        assert_eq!(parse_set("1..8").unwrap(), (1..=8).collect::<Vec<_>>());
        assert_eq!(parse_set("1, 2,4").unwrap(), [1, 2, 4]);
        assert!(parse_set("3..1").is_err());
    }

    #[test]
    fn divisor_closed_subset_counts() {
        let sets = divisor_closed_sets(30, 8);
        let mut by_size = [0usize; 9];
        for s in &sets {
            assert!(validate_divisor_closed(s).is_ok());
            by_size[s.len()] += 1;
        }
        assert_eq!(by_size[1..], [1, 10, 48, 156, 406, 930, 1960, 3864]);
    }

    #[test]
    fn singleton_and_pair() {
        let r = gcd_matrix_bounds(&[1], Alpha::Integer(1), 12).unwrap();
        assert_eq!(r.lambda_min.to_f64(), 1.0);
        assert_eq!(r.lower_bound.to_f64(), 1.0);
        assert!(r.holds());
        // A = W_2 here, so both bounds are attained
        let r = gcd_matrix_bounds(&[1, 2], Alpha::Integer(1), 12).unwrap();
        assert!(r.holds());
        assert!(((&r.lambda_min - &r.lower_bound) / &r.lambda_min).abs().to_f64() < 1e-11);
        assert!(((&r.lambda_max - &r.upper_bound) / &r.lambda_max).abs().to_f64() < 1e-11);
    }

    #[test]
    fn first_eight_integers_strict() {
        let r = gcd_matrix_bounds(&(1..=8).collect::<Vec<_>>(), Alpha::Integer(1), 12).unwrap();
        assert!(r.lower_bound < r.lambda_min);
        assert!(r.lambda_max < r.upper_bound);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn initial_segments_are_positive_definite(n in 1u64..=10, alpha in 0.1f64..3.0) {
            let m = PowerGcdMatrix::new((1..=n).collect(), Alpha::new(alpha).unwrap()).unwrap();
            let eig = m.eigenvalues(Precision::bits(128)).unwrap();
            prop_assert!(eig.min().to_f64() > 0.0);
        }
    }
}
