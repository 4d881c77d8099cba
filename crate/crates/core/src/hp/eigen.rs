//! Symmetric eigenvalues by cyclic Jacobi rotations, and a power-iteration
//! fast path for the largest eigenvalue of a positive semidefinite matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::real::{HpReal, Precision, Real};
use crate::matrices::IntSymMatrix;

/// Sweep budget for the Jacobi solver.
pub const MAX_SWEEPS: usize = 60;

/// Iteration budget for the power method before falling back to Jacobi.
pub const POWER_MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigenError {
    #[error("precision of {bits} bits is below the 64-bit minimum")]
    PrecisionTooLow { bits: usize },
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("Jacobi iteration did not converge in {sweeps} sweeps; relative off-diagonal norm {residual:e}")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("non-finite value encountered")]
    NotFinite,
}

/// Dense symmetric matrix over a [`Real`] scalar.
#[derive(Debug, Clone)]
pub struct RealSymMatrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> RealSymMatrix<R> {
    /// Evaluates `f(i, j)` for `0 <= i <= j < n` (0-based) and mirrors it.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data: Vec<Option<R>> = vec![None; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[j * n + i] = Some(v.clone());
                data[i * n + j] = Some(v);
            }
        }
        RealSymMatrix { n, data: data.into_iter().map(|v| v.expect("filled")).collect() }
    }

    pub fn from_int(m: &IntSymMatrix, ctx: R::Ctx) -> Self {
        Self::from_upper_fn(m.dim(), |i, j| R::from_int_in(m.at(i, j), ctx))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(r, c)`.
    pub fn at(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.n + c] = v;
    }

    pub fn ctx(&self) -> R::Ctx {
        self.data[0].ctx()
    }

    pub fn frobenius_norm(&self) -> R {
        let mut acc = R::from_i64_in(0, self.ctx());
        for v in &self.data {
            acc = acc.add(&v.mul(v));
        }
        acc.sqrt()
    }

    fn off_diagonal_norm(&self) -> R {
        let mut acc = R::from_i64_in(0, self.ctx());
        for r in 0..self.n {
            for c in 0..self.n {
                if r != c {
                    let v = self.at(r, c);
                    acc = acc.add(&v.mul(v));
                }
            }
        }
        acc.sqrt()
    }

    fn mul_vec(&self, x: &[R]) -> Vec<R> {
        (0..self.n)
            .map(|r| {
                let mut acc = R::from_i64_in(0, self.ctx());
                for (c, xc) in x.iter().enumerate() {
                    acc = acc.add(&self.at(r, c).mul(xc));
                }
                acc
            })
            .collect()
    }
}

/// Sorted eigenvalues plus convergence diagnostics.
#[derive(Debug, Clone)]
pub struct EigenResult<R = HpReal> {
    /// Ascending.
    pub eigenvalues: Vec<R>,
    /// Off-diagonal Frobenius norm left after the final sweep.
    pub achieved_offdiag_norm: R,
    pub precision_bits: usize,
}

impl<R: Real> EigenResult<R> {
    pub fn min(&self) -> &R {
        &self.eigenvalues[0]
    }

    pub fn max(&self) -> &R {
        self.eigenvalues.last().expect("nonempty")
    }
}

fn sort_ascending<R: Real>(v: &mut [R]) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
}

/// Cyclic Jacobi: sweeps over all `(p, q)` pairs until the off-diagonal
/// Frobenius norm is at most `tol·‖M‖_F`.
pub fn jacobi_eigenvalues<R: Real>(
    mut a: RealSymMatrix<R>,
    tol: &R,
    max_sweeps: usize,
) -> Result<EigenResult<R>, EigenError> {
    let ctx = a.ctx();
    let zero = R::from_i64_in(0, ctx);
    if !(*tol > zero) {
        return Err(EigenError::NonPositiveTolerance);
    }
    let n = a.n;
    let norm = a.frobenius_norm();
    if !norm.is_finite() {
        return Err(EigenError::NotFinite);
    }
    let threshold = tol.mul(&norm);
    // pivots this small cannot keep the off-diagonal norm above threshold
    let negligible = threshold.div(&R::from_i64_in(n.max(1) as i64, ctx));
    let one = R::from_i64_in(1, ctx);
    let two = R::from_i64_in(2, ctx);

    let mut sweeps = 0;
    let off = loop {
        let off = a.off_diagonal_norm();
        if off <= threshold {
            break off;
        }
        if sweeps == max_sweeps {
            let residual = if norm.is_zero() { 0.0 } else { off.div(&norm).to_f64() };
            return Err(EigenError::NoConvergence { sweeps, residual });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q).clone();
                if apq.abs() <= negligible {
                    continue;
                }
                let app = a.at(p, p).clone();
                let aqq = a.at(q, q).clone();
                // t = tan of the rotation angle, the smaller root of t² + 2τt - 1 = 0
                let tau = aqq.sub(&app).div(&two.mul(&apq));
                let root = one.add(&tau.mul(&tau)).sqrt();
                let t = if tau >= zero {
                    one.div(&tau.add(&root))
                } else {
                    one.div(&tau.sub(&root))
                };
                let c = one.div(&one.add(&t.mul(&t)).sqrt());
                let s = t.mul(&c);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.at(k, p).clone();
                    let akq = a.at(k, q).clone();
                    let new_kp = c.mul(&akp).sub(&s.mul(&akq));
                    let new_kq = s.mul(&akp).add(&c.mul(&akq));
                    a.set(k, p, new_kp.clone());
                    a.set(p, k, new_kp);
                    a.set(k, q, new_kq.clone());
                    a.set(q, k, new_kq);
                }
                let shift = t.mul(&apq);
                a.set(p, p, app.sub(&shift));
                a.set(q, q, aqq.add(&shift));
                a.set(p, q, zero.clone());
                a.set(q, p, zero.clone());
            }
        }
        sweeps += 1;
    };

    let mut eigenvalues: Vec<R> = (0..n).map(|i| a.at(i, i).clone()).collect();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(EigenError::NotFinite);
    }
    sort_ascending(&mut eigenvalues);
    Ok(EigenResult { eigenvalues, achieved_offdiag_norm: off, precision_bits: R::precision_bits_in(ctx) })
}

/// Largest eigenvalue of a positive semidefinite matrix.
///
/// Power iteration from the column with the largest diagonal entry, stopping
/// when the estimated error of the Rayleigh quotient (the last change scaled
/// by the observed contraction rate) is below `tol` relative. Falls back to
/// Jacobi when the contraction is too slow or the result fails the
/// `λ_max >= max_i M_ii` sanity check.
pub fn lambda_max_psd<R: Real>(m: &RealSymMatrix<R>, tol: &R) -> Result<R, EigenError> {
    let ctx = m.ctx();
    let zero = R::from_i64_in(0, ctx);
    if !(*tol > zero) {
        return Err(EigenError::NonPositiveTolerance);
    }
    let n = m.n;
    let (k, max_diag) = (0..n).map(|i| (i, m.at(i, i))).fold((0, m.at(0, 0)), |best, cur| {
        if *cur.1 > *best.1 {
            cur
        } else {
            best
        }
    });
    let max_diag = max_diag.clone();
    if !(max_diag > zero) {
        // a PSD matrix with zero diagonal is zero
        return Ok(zero);
    }
    let one = R::from_i64_in(1, ctx);
    let mut x: Vec<R> = (0..n).map(|r| m.at(r, k).clone()).collect();
    let mut prev: Option<R> = None;
    let mut prev_change: Option<R> = None;
    let slow = R::from_i64_in(95, ctx).div(&R::from_i64_in(100, ctx));
    let mut estimate = None;
    for iter in 0..POWER_MAX_ITERATIONS {
        let y = m.mul_vec(&x);
        let mut xy = zero.clone();
        let mut xx = zero.clone();
        for (xi, yi) in x.iter().zip(&y) {
            xy = xy.add(&xi.mul(yi));
            xx = xx.add(&xi.mul(xi));
        }
        let lambda = xy.div(&xx);
        if !lambda.is_finite() {
            return Err(EigenError::NotFinite);
        }
        if let Some(p) = &prev {
            let change = lambda.sub(p).abs();
            let bound = tol.mul(&lambda.abs());
            let rate = prev_change.as_ref().filter(|c| !c.is_zero()).map(|c| change.div(c));
            let err = match &rate {
                Some(r) if *r < one => change.mul(&one.max_of(&r.div(&one.sub(r)))),
                Some(_) => change.mul(&R::from_i64_in(1000, ctx)),
                None => change.clone(),
            };
            if err <= bound {
                estimate = Some(lambda);
                break;
            }
            if iter > 50 && rate.as_ref().is_some_and(|r| *r > slow) {
                break;
            }
            prev_change = Some(change);
        }
        // rescale by the largest component
        let scale = y.iter().fold(zero.clone(), |acc, v| acc.max_of(&v.abs()));
        if scale.is_zero() {
            return Ok(zero);
        }
        x = y.iter().map(|v| v.div(&scale)).collect();
        prev = Some(lambda);
    }
    match estimate {
        Some(l) if l >= max_diag.mul(&one.sub(tol)) => Ok(l),
        _ => Ok(jacobi_eigenvalues(m.clone(), tol, MAX_SWEEPS)?.max().clone()),
    }
}

trait MaxOf {
    fn max_of(&self, o: &Self) -> Self;
}

impl<R: Real> MaxOf for R {
    fn max_of(&self, o: &Self) -> Self {
        if *o > *self {
            o.clone()
        } else {
            self.clone()
        }
    }
}

fn check_args(prec: Precision, tol: &HpReal) -> Result<(), EigenError> {
    if prec < Precision::MIN {
        return Err(EigenError::PrecisionTooLow { bits: prec.get() });
    }
    if !(tol.is_finite() && *tol > HpReal::zero(prec)) {
        return Err(EigenError::NonPositiveTolerance);
    }
    Ok(())
}

/// All eigenvalues of an exact symmetric matrix at `prec`, each within
/// roughly `tol·‖M‖_F` of the true value.
pub fn eigenvalues_sym(m: &IntSymMatrix, prec: Precision, tol: &HpReal) -> Result<EigenResult, EigenError> {
    check_args(prec, tol)?;
    jacobi_eigenvalues(RealSymMatrix::from_int(m, prec), &tol.with_precision(prec), MAX_SWEEPS)
}

/// Largest eigenvalue of an exact positive semidefinite matrix at `prec`.
pub fn lambda_max_sym(m: &IntSymMatrix, prec: Precision, tol: &HpReal) -> Result<HpReal, EigenError> {
    check_args(prec, tol)?;
    lambda_max_psd(&RealSymMatrix::from_int(m, prec), &tol.with_precision(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactInt;
    use crate::hp::HpContext;
    use crate::matrices::{build_a, build_w, build_z};

    const P: Precision = Precision::bits(256);

    fn tol() -> HpReal {
        P.default_tolerance()
    }

    fn close(a: &HpReal, b: &HpReal, rel: f64) -> bool {
        let d = (a - b).abs().to_f64();
        d <= rel * b.abs().to_f64().max(1e-300)
    }

    #[test]
    fn z2_eigenvalues() {
        let z2 = build_z(2).unwrap();
        let res = eigenvalues_sym(&z2, P, &tol()).unwrap();
        let cx = HpContext::new(P);
        let s5 = cx.int(5).sqrt();
        let lo = (cx.int(3) - &s5) / cx.int(2);
        let hi = (cx.int(3) + &s5) / cx.int(2);
        assert!(close(res.min(), &lo, 1e-70));
        assert!(close(res.max(), &hi, 1e-70));
        assert_eq!(res.precision_bits, 256);
        assert!(close(&lambda_max_sym(&z2, P, &tol()).unwrap(), &hi, 1e-70));
        assert!(close(&lambda_max_sym(&build_w(2).unwrap(), P, &tol()).unwrap(), &hi, 1e-70));
    }

    #[test]
    fn identity_and_one_by_one() {
        let id = IntSymMatrix::identity(3).unwrap();
        let res = eigenvalues_sym(&id, P, &tol()).unwrap();
        assert_eq!(res.eigenvalues.len(), 3);
        assert!(res.eigenvalues.iter().all(|v| *v == HpReal::one(P)));
        assert_eq!(lambda_max_sym(&build_w(1).unwrap(), P, &tol()).unwrap(), HpReal::one(P));
    }

    #[test]
    fn toeplitz_spectrum() {
        let res = eigenvalues_sym(&build_a(4).unwrap(), P, &tol()).unwrap();
        let mut cx = HpContext::new(P);
        let pi = cx.pi();
        for (k, v) in res.eigenvalues.iter().enumerate() {
            let angle = &pi * cx.int(k as i64 + 1) / cx.int(5);
            let expected = cx.int(2) - cx.int(2) * cx.cos(&angle);
            assert!(close(v, &expected, 1e-70), "k={k}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let z = build_z(2).unwrap();
        assert_eq!(
            eigenvalues_sym(&z, Precision::bits(32), &tol()).unwrap_err(),
            EigenError::PrecisionTooLow { bits: 32 }
        );
        assert_eq!(eigenvalues_sym(&z, P, &HpReal::zero(P)).unwrap_err(), EigenError::NonPositiveTolerance);
        assert_eq!(lambda_max_sym(&z, P, &-tol()).unwrap_err(), EigenError::NonPositiveTolerance);
    }

    #[test]
    fn sweep_budget_is_enforced() {
        let z = build_z(6).unwrap();
        let m: RealSymMatrix<HpReal> = RealSymMatrix::from_int(&z, P);
        match jacobi_eigenvalues(m, &tol(), 1) {
            Err(EigenError::NoConvergence { sweeps: 1, residual }) => assert!(residual > 0.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn f64_kernel_matches() {
        let z = build_z(5).unwrap();
        let m: RealSymMatrix<f64> = RealSymMatrix::from_int(&z, ());
        let res = jacobi_eigenvalues(m.clone(), &1e-15, MAX_SWEEPS).unwrap();
        let hp = eigenvalues_sym(&z, P, &tol()).unwrap();
        for (a, b) in res.eigenvalues.iter().zip(&hp.eigenvalues) {
            assert!((a - b.to_f64()).abs() <= 1e-12 * b.to_f64().abs().max(1.0));
        }
        let top = lambda_max_psd(&m, &1e-15).unwrap();
        assert!((top - hp.max().to_f64()).abs() <= 1e-12 * top);
    }

    #[test]
    fn power_method_matches_jacobi_on_clustered_spectrum() {
        // W_n has slowly separating top eigenvalues for larger n.
        for n in [3usize, 8, 20] {
            let w = build_w(n).unwrap();
            let jac = eigenvalues_sym(&w, P, &tol()).unwrap();
            let pw = lambda_max_sym(&w, P, &tol()).unwrap();
            assert!(close(&pw, jac.max(), 1e-60), "n={n}");
        }
        // J - I: eigenvalues {n-1, -1, ..., -1} is not PSD but the top is dominant
        let all_ones = IntSymMatrix::from_upper_fn(4, |_, _| ExactInt::from(1)).unwrap();
        let v = lambda_max_sym(&all_ones, P, &tol()).unwrap();
        assert!(close(&v, &HpReal::from_i64(4, P), 1e-70));
    }
}
