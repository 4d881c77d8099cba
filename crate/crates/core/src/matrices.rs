//! Exact integer matrices `Z_n`, `W_n`, `B_n`, `A_n` and the Frobenius-norm
//! quantities of `Z_n`.
//!
//! Indices in the public accessors are 1-based.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::{identities, ExactInt, ExactRational, FibCache};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entries ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
}

/// Dense symmetric matrix with exact integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSymMatrix {
    n: usize,
    // row-major, both triangles stored
    data: Vec<ExactInt>,
}

impl IntSymMatrix {
    /// Builds the matrix from `f(i, j)` evaluated for `1 <= i <= j <= n`; the
    /// lower triangle mirrors it.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExactInt) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::ZeroDimension);
        }
        let mut data = vec![ExactInt::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i + 1, j + 1);
                data[j * n + i] = v.clone();
                data[i * n + j] = v;
            }
        }
        Ok(IntSymMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<ExactInt>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::ZeroDimension);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare { row: row + 1, len: r.len(), n });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(MatrixError::NotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(IntSymMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        Self::from_upper_fn(n, |i, j| if i == j { ExactInt::one() } else { ExactInt::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &ExactInt {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index ({i},{j}) out of range");
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> &ExactInt {
        &self.data[r * self.n + c]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExactInt]> {
        self.data.chunks(self.n)
    }

    pub fn trace(&self) -> ExactInt {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> ExactInt {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Returns `self` with `delta` added to entry `(i, i)`.
    pub fn with_diagonal_shift(&self, i: usize, delta: &ExactInt) -> Self {
        let mut out = self.clone();
        out.data[(i - 1) * self.n + (i - 1)] += delta;
        out
    }

    /// `PᵀMP` for the permutation taking row `k` to row `perm[k]` (0-based).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut data = vec![ExactInt::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                data[perm[r] * n + perm[c]] = self.at(r, c).clone();
            }
        }
        IntSymMatrix { n, data }
    }

    /// Row-major dense product `self · rhs`.
    pub fn product(&self, rhs: &IntSymMatrix) -> Vec<Vec<ExactInt>> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        (0..n)
            .map(|r| (0..n).map(|c| (0..n).map(|k| self.at(r, k) * rhs.at(k, c)).sum()).collect())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> ExactInt {
        let n = self.n;
        let mut m: Vec<Vec<ExactInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut sign = ExactInt::one();
        let mut prev = ExactInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return ExactInt::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn max_abs_entry(&self) -> ExactInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

/// `(Z_n)_{i,j}`: `1 + Σ_{k=i+1}^n F_{k-i}²` on the diagonal and
/// `(-1)^{j-i}(F_{j-i} + Σ_{k=j+1}^n F_{k-i}F_{k-j})` above it.
pub fn build_z(n: usize) -> Result<IntSymMatrix, MatrixError> {
    if n == 0 {
        return Err(MatrixError::ZeroDimension);
    }
    let fib = FibCache::with_len(2 * n + 1);
    // tail[d][r] = Σ_{m=1}^{r} F_{m+d} F_m, i.e. the k-sum with m = k - j
    let tail: Vec<Vec<ExactInt>> = (0..n)
        .map(|d| {
            let mut acc = ExactInt::zero();
            let mut col = Vec::with_capacity(n);
            col.push(ExactInt::zero());
            for m in 1..n {
                acc += fib.f(m + d) * fib.f(m);
                col.push(acc.clone());
            }
            col
        })
        .collect();
    IntSymMatrix::from_upper_fn(n, |i, j| {
        let d = j - i;
        if d == 0 {
            ExactInt::one() + &tail[0][n - i]
        } else {
            let v = fib.f(d) + &tail[d][n - j];
            if d % 2 == 0 {
                v
            } else {
                -v
            }
        }
    })
}

/// The min-matrix, `(W_n)_{i,j} = min(i, j)`.
pub fn build_w(n: usize) -> Result<IntSymMatrix, MatrixError> {
    IntSymMatrix::from_upper_fn(n, |i, _| ExactInt::from(i))
}

/// `W_n⁻¹`: tridiagonal, diagonal `(2, …, 2, 1)`, off-diagonal `-1`.
pub fn build_b(n: usize) -> Result<IntSymMatrix, MatrixError> {
    IntSymMatrix::from_upper_fn(n, |i, j| match j - i {
        0 if i == n => ExactInt::one(),
        0 => ExactInt::from(2),
        1 => ExactInt::from(-1),
        _ => ExactInt::zero(),
    })
}

/// `B_n + e_n e_nᵀ`: tridiagonal Toeplitz with diagonal 2 and off-diagonal -1.
pub fn build_a(n: usize) -> Result<IntSymMatrix, MatrixError> {
    IntSymMatrix::from_upper_fn(n, |i, j| match j - i {
        0 => ExactInt::from(2),
        1 => ExactInt::from(-1),
        _ => ExactInt::zero(),
    })
}

/// `‖Z_n‖_F²` by summing the squared entries of `Z_n`.
pub fn frobenius_sq_direct(n: usize) -> Result<ExactInt, MatrixError> {
    Ok(build_z(n)?.frobenius_sq())
}

/// `(1/25)L_{4n} + ((3+(-1)^n)/25)L_{2n} + (2/5)nF_{2n} + (13(-1)^n-33)/50 + n`.
pub fn frobenius_sq_closed_form(n: usize) -> Result<ExactRational, MatrixError> {
    if n == 0 {
        return Err(MatrixError::ZeroDimension);
    }
    let fib = FibCache::with_len(4 * n);
    Ok(identities::frobenius_closed(&fib, n as i64))
}

/// Block split `Z_n = [[a_n, b_nᵀ], [b_n, Z_{n-1}]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobDecomposition {
    pub n: usize,
    pub a_n: ExactInt,
    pub b_norm_sq: ExactInt,
    pub frob_sq: ExactInt,
}

impl FrobDecomposition {
    /// Reads `a_n` and `‖b_n‖²` off the first column of `z`.
    pub fn of(z: &IntSymMatrix) -> Self {
        let n = z.dim();
        let b_norm_sq = (1..n).map(|r| z.at(r, 0) * z.at(r, 0)).sum();
        FrobDecomposition { n, a_n: z.at(0, 0).clone(), b_norm_sq, frob_sq: z.frobenius_sq() }
    }
}

/// `a_n = 1 + F_n F_{n-1}`.
pub fn lemma_a(fib: &FibCache, n: usize) -> ExactInt {
    ExactInt::one() + fib.f_signed(n as i64) * fib.f_signed(n as i64 - 1)
}

/// `‖b_n‖² = Σ_{j=2}^n (F_{j-1} + Σ_{k=j+1}^n F_{k-1}F_{k-j})²`.
pub fn lemma_b_norm_sq(fib: &FibCache, n: usize) -> ExactInt {
    (2..=n)
        .map(|j| {
            let mut s = fib.f(j - 1).clone();
            for k in (j + 1)..=n {
                s += fib.f(k - 1) * fib.f(k - j);
            }
            &s * &s
        })
        .sum()
}

/// `‖Z_1‖_F², …, ‖Z_{n_max}‖_F²` from the block recurrence
/// `‖Z_n‖_F² = ‖Z_{n-1}‖_F² + a_n² + 2‖b_n‖²`, with `a_n`, `‖b_n‖²` taken from
/// their Fibonacci formulas.
pub fn frobenius_sq_recurrence(n_max: usize) -> Vec<ExactInt> {
    let fib = FibCache::with_len(2 * n_max + 2);
    let mut out = Vec::with_capacity(n_max);
    let mut acc = ExactInt::one();
    if n_max >= 1 {
        out.push(acc.clone());
    }
    for n in 2..=n_max {
        let a = lemma_a(&fib, n);
        acc += &a * &a + lemma_b_norm_sq(&fib, n) * 2;
        out.push(acc.clone());
    }
    out
}
