//! Named verification suites behind the `verify` command.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use extremal_core::bounds::{
    b_eigenvalues_closed_form, c_upper_asymptotic, c_upper_closed_form, ihm_old_upper,
};
use extremal_core::exact::{verify_identity_suite, verify_row_simplifications, ExactInt, ExactRational, FibCache, IdentityReport};
use extremal_core::hp::{eigenvalues_sym, lambda_max_sym, HpContext};
use extremal_core::matrices::{
    build_a, build_b, build_w, build_z, frobenius_sq_closed_form, frobenius_sq_direct, frobenius_sq_recurrence,
    lemma_a, lemma_b_norm_sq, FrobDecomposition,
};
use extremal_core::{HpReal, IntSymMatrix, Precision};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Matrices,
    Eigen,
    All,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identities" => Ok(Suite::Identities),
            "matrices" => Ok(Suite::Matrices),
            "eigen" => Ok(Suite::Eigen),
            "all" => Ok(Suite::All),
            _ => Err(CliError::Usage(format!("unknown suite `{s}` (expected identities, matrices, eigen or all)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { suite, name: name.into(), passed, detail: detail.into() });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}::{} {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail)?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Eigen suite working precision.
pub const EIGEN_PREC: Precision = Precision::bits(256);

pub fn run(suite: Suite, max_n: usize) -> Result<VerifyReport, CliError> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let mut report = VerifyReport::default();
    if matches!(suite, Suite::Identities | Suite::All) {
        identities(&mut report, max_n);
    }
    if matches!(suite, Suite::Matrices | Suite::All) {
        matrices(&mut report, max_n)?;
    }
    if matches!(suite, Suite::Eigen | Suite::All) {
        eigen(&mut report, max_n)?;
    }
    Ok(report)
}

/// The summation identity suite plus the row simplifications for `1..=max_n`.
pub fn identity_report(max_n: usize) -> IdentityReport {
    let rows: Vec<IdentityReport> = (1..=max_n).into_par_iter().map(verify_row_simplifications).collect();
    let mut report = verify_identity_suite(max_n);
    for r in rows {
        report.extend(r);
    }
    report
}

fn identities(report: &mut VerifyReport, max_n: usize) {
    for o in identity_report(max_n).outcomes {
        let detail = match o.first_failure {
            None => format!("({} indices)", o.checked),
            Some(at) => format!("first failure at {at}"),
        };
        report.push("identities", o.name, o.passed(), detail);
    }
}

/// First `n` in `range` where `pred` fails, checked in parallel.
fn first_failure(range: std::ops::RangeInclusive<usize>, pred: impl Fn(usize) -> bool + Sync) -> Option<usize> {
    range.collect::<Vec<_>>().into_par_iter().filter(|&n| !pred(n)).min()
}

fn summarize(report: &mut VerifyReport, suite: &'static str, name: &str, hi: usize, failure: Option<usize>) {
    let detail = match failure {
        None => format!("(n = 1..{hi})"),
        Some(n) => format!("first failure at n={n}"),
    };
    report.push(suite, name, failure.is_none(), detail);
}

fn identity_product(a: &IntSymMatrix, b: &IntSymMatrix) -> bool {
    a.product(b).iter().enumerate().all(|(r, row)| {
        row.iter().enumerate().all(|(c, v)| *v == ExactInt::from(u8::from(r == c)))
    })
}

fn matrices(report: &mut VerifyReport, max_n: usize) -> Result<(), CliError> {
    let s = "matrices";
    let closed = first_failure(1..=max_n, |n| {
        frobenius_sq_closed_form(n).ok() == frobenius_sq_direct(n).ok().map(ExactRational::from_integer)
    });
    summarize(report, s, "frobenius_closed_form_equals_direct", max_n, closed);

    let rec = frobenius_sq_recurrence(max_n);
    let rec_fail = first_failure(1..=max_n, |n| frobenius_sq_direct(n).ok().as_ref() == Some(&rec[n - 1]));
    summarize(report, s, "frobenius_block_recurrence", max_n, rec_fail);

    let fib = FibCache::with_len(2 * max_n + 2);
    let lemma = first_failure(1..=max_n, |n| {
        let d = FrobDecomposition::of(&build_z(n).expect("n >= 1"));
        d.a_n == lemma_a(&fib, n) && d.b_norm_sq == lemma_b_norm_sq(&fib, n)
    });
    summarize(report, s, "first_row_lemma_formulas", max_n, lemma);

    let small = max_n.min(100);
    let inv = first_failure(1..=small, |n| identity_product(&build_b(n).unwrap(), &build_w(n).unwrap()));
    summarize(report, s, "b_inverts_w", small, inv);

    let corner = first_failure(1..=small, |n| {
        build_b(n).unwrap().with_diagonal_shift(n, &ExactInt::from(1)) == build_a(n).unwrap()
    });
    summarize(report, s, "a_is_b_plus_corner", small, corner);

    let det_n = max_n.min(30);
    let det = first_failure(1..=det_n, |n| build_z(n).unwrap().determinant() == ExactInt::from(1));
    summarize(report, s, "z_unit_determinant", det_n, det);
    Ok(())
}

fn rel_diff(a: &HpReal, b: &HpReal) -> HpReal {
    ((a - b) / b).abs()
}

/// Eigenvalue sum against the trace and product against the exact
/// determinant.
pub fn trace_det_consistent(m: &IntSymMatrix, prec: Precision) -> Result<bool, CliError> {
    let tol = prec.default_tolerance();
    let eig = eigenvalues_sym(m, prec, &tol)?;
    let n = m.dim();
    let fro = HpReal::from_int(&m.frobenius_sq(), prec).sqrt();
    let sum = eig.eigenvalues.iter().fold(HpReal::zero(prec), |a, b| a + b);
    let trace = HpReal::from_int(&m.trace(), prec);
    let trace_ok = (&sum - &trace).abs() <= &tol * &fro * HpReal::from_u64(n as u64, prec);
    let prod = eig.eigenvalues.iter().fold(HpReal::one(prec), |a, b| a * b);
    let det = HpReal::from_int(&m.determinant(), prec);
    let det_ok = if det.is_zero() {
        prod.abs() <= tol
    } else {
        rel_diff(&prod, &det) <= &tol * HpReal::from_u64(10, prec)
    };
    Ok(trace_ok && det_ok)
}

fn eigen(report: &mut VerifyReport, max_n: usize) -> Result<(), CliError> {
    let s = "eigen";
    let p = EIGEN_PREC;
    let tol = p.default_tolerance();
    let bound = HpReal::from_f64(1e-30, p);
    let results: Vec<Result<[bool; 5], CliError>> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let b = build_b(n).unwrap();
            let eig_b = eigenvalues_sym(&b, p, &tol)?;
            let closed = b_eigenvalues_closed_form(n, p)?;
            let spectrum = eig_b.eigenvalues.iter().zip(&closed).all(|(x, y)| (x - y).abs() <= bound);
            let w_max = lambda_max_sym(&build_w(n).unwrap(), p, &tol)?;
            let reciprocal = (&w_max * eig_b.min() - HpReal::one(p)).abs() <= bound;
            let c_up = c_upper_closed_form(n, p)?;
            let inverse_min = rel_diff(&eig_b.min().recip(), &c_up) <= bound;
            let mut cx = HpContext::new(p);
            let pi = cx.pi();
            let eig_a = eigenvalues_sym(&build_a(n).unwrap(), p, &tol)?;
            let cosine = eig_a.eigenvalues.iter().enumerate().all(|(k, v)| {
                let angle = &pi * cx.int(k as i64 + 1) / cx.int(n as i64 + 1);
                (v - (cx.int(2) - cx.int(2) * cx.cos(&angle))).abs() <= bound
            });
            let upper = ihm_old_upper(n, p)? >= c_up;
            Ok([spectrum, reciprocal, inverse_min, cosine, upper])
        })
        .collect();
    let names = [
        "b_spectrum_closed_form",
        "w_max_times_b_min_is_one",
        "b_min_reciprocal_is_upper_constant",
        "a_spectrum_cosine",
        "old_upper_bound_dominates",
    ];
    let mut first = [None; 5];
    for (i, r) in results.into_iter().enumerate() {
        for (k, ok) in r?.iter().enumerate() {
            if !ok && first[k].is_none() {
                first[k] = Some(i + 1);
            }
        }
    }
    for (name, f) in names.iter().zip(first) {
        summarize(report, s, name, max_n, f);
    }

    let td_n = max_n.min(20);
    let mut td_fail = None;
    for n in 1..=td_n {
        let ok = trace_det_consistent(&build_w(n).unwrap(), p)?
            && trace_det_consistent(&build_b(n).unwrap(), p)?
            && trace_det_consistent(&build_a(n).unwrap(), p)?;
        if !ok {
            td_fail = Some(n);
            break;
        }
    }
    summarize(report, s, "trace_and_determinant", td_n, td_fail);

    let mut worst = 0.0f64;
    let mut asym_fail = None;
    for n in 10..=200usize {
        let r = (c_upper_closed_form(n, p)? - c_upper_asymptotic(n, p)?).abs().to_f64() * (n * n) as f64;
        worst = worst.max(r);
        if r >= 0.02 && asym_fail.is_none() {
            asym_fail = Some(n);
        }
    }
    let detail = match asym_fail {
        None => format!("(n = 10..200, max n²·residual = {worst:.6})"),
        Some(n) => format!("first failure at n={n}"),
    };
    report.push(s, "asymptotic_remainder", asym_fail.is_none(), detail);
    Ok(())
}
