//! Exhaustive enumeration of `K_n`, the nonsingular lower triangular
//! (0,1)-matrices, and the extremal Gram eigenvalues over it.
//!
//! A matrix is stored as a bit word over its strictly-lower entries; the
//! diagonal is all ones. The lowest bit is entry `(2,1)`, then `(3,1)`,
//! `(3,2)`, `(4,1)` and so on, row-major.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::exact::ExactInt;
use crate::hp::{eigenvalues_sym, jacobi_eigenvalues, EigenError, HpReal, Precision, RealSymMatrix, MAX_SWEEPS};
use crate::matrices::IntSymMatrix;

/// Largest `n` scanned without an override.
pub const DEFAULT_CAP: usize = 7;
/// Largest `n` accepted at all.
pub const HARD_CAP: usize = 9;
/// Relative width of the hardware-precision candidate band.
pub const CANDIDATE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    ResourceLimit { n: usize, cap: usize },
    #[error("bit word {bits:#x} out of range for n = {n}")]
    WordOutOfRange { n: usize, bits: u64 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Upper limit on `n` for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanCap(usize);

impl ScanCap {
    /// Raises the cap to `n`, at most [`HARD_CAP`].
    pub fn with_override(n: usize) -> Result<Self, OracleError> {
        if n > HARD_CAP {
            return Err(OracleError::ResourceLimit { n, cap: HARD_CAP });
        }
        Ok(ScanCap(n.max(DEFAULT_CAP)))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<(), OracleError> {
        if n == 0 {
            Err(OracleError::ZeroDimension)
        } else if n > self.0 {
            Err(OracleError::ResourceLimit { n, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for ScanCap {
    fn default() -> Self {
        ScanCap(DEFAULT_CAP)
    }
}

/// Number of strictly-lower entries, `n(n−1)/2`.
pub fn word_width(n: usize) -> u32 {
    (n * (n - 1) / 2) as u32
}

/// `#K_n = 2^{n(n−1)/2}`.
pub fn kn_size(n: usize) -> u64 {
    1u64 << word_width(n)
}

/// One element of `K_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriBitMatrix {
    n: usize,
    bits: u64,
}

impl TriBitMatrix {
    pub fn new(n: usize, bits: u64) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroDimension);
        }
        if n > HARD_CAP || bits >= kn_size(n) {
            return Err(OracleError::WordOutOfRange { n, bits });
        }
        Ok(TriBitMatrix { n, bits })
    }

    pub fn identity(n: usize) -> Result<Self, OracleError> {
        Self::new(n, 0)
    }

    /// The matrix with every lower entry equal to one.
    pub fn all_ones(n: usize) -> Result<Self, OracleError> {
        if n == 0 || n > HARD_CAP {
            return Err(OracleError::ZeroDimension);
        }
        Self::new(n, kn_size(n) - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_all_ones(&self) -> bool {
        self.bits == kn_size(self.n) - 1
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        assert!(i >= 1 && j >= 1 && i <= self.n && j <= self.n, "index out of range");
        if i == j {
            1
        } else if j > i {
            0
        } else {
            let pos = (i - 1) * (i - 2) / 2 + (j - 1);
            ((self.bits >> pos) & 1) as u8
        }
    }

    /// Row `i` (0-based) as a column bitmask, diagonal included.
    fn row_masks(&self) -> [u16; HARD_CAP] {
        let mut rows = [0u16; HARD_CAP];
        let mut pos = 0;
        for (i, row) in rows.iter_mut().enumerate().take(self.n) {
            let mut m = 1u16 << i;
            for j in 0..i {
                if (self.bits >> pos) & 1 == 1 {
                    m |= 1 << j;
                }
                pos += 1;
            }
            *row = m;
        }
        rows
    }

    fn col_masks(&self) -> [u16; HARD_CAP] {
        let rows = self.row_masks();
        let mut cols = [0u16; HARD_CAP];
        for (i, r) in rows.iter().enumerate().take(self.n) {
            for (j, c) in cols.iter_mut().enumerate().take(self.n) {
                if r >> j & 1 == 1 {
                    *c |= 1 << i;
                }
            }
        }
        cols
    }

    fn gram_of(masks: &[u16; HARD_CAP], n: usize) -> IntSymMatrix {
        IntSymMatrix::from_upper_fn(n, |i, j| ExactInt::from((masks[i - 1] & masks[j - 1]).count_ones()))
            .expect("n >= 1")
    }

    /// `XXᵀ`, exactly.
    pub fn gram(&self) -> IntSymMatrix {
        Self::gram_of(&self.row_masks(), self.n)
    }

    /// `XᵀX`, exactly.
    pub fn gram_transposed(&self) -> IntSymMatrix {
        Self::gram_of(&self.col_masks(), self.n)
    }

    /// `XXᵀ` in hardware floats.
    pub fn gram_f64(&self) -> RealSymMatrix<f64> {
        let rows = self.row_masks();
        RealSymMatrix::from_upper_fn(self.n, |i, j| (rows[i] & rows[j]).count_ones() as f64)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (1..=self.n).map(|i| (1..=self.n).map(|j| self.entry(i, j)).collect()).collect()
    }
}

impl fmt::Display for TriBitMatrix {
    /// `[[1,0],[1,1]]` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (r, row) in self.to_rows().iter().enumerate() {
            if r > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Every element of `K_n` in increasing bit-word order.
pub fn enumerate_kn(n: usize, cap: ScanCap) -> Result<impl Iterator<Item = TriBitMatrix>, OracleError> {
    cap.check(n)?;
    Ok((0..kn_size(n)).map(move |bits| TriBitMatrix { n, bits }))
}

/// Hardware-precision scan state over a contiguous range of bit words.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPartial {
    pub n: usize,
    pub count: u64,
    pub min_f64: f64,
    pub max_f64: f64,
    /// `(word, λ_min)` for words within the candidate band of `min_f64`.
    pub min_candidates: Vec<(u64, f64)>,
    /// `(word, λ_max)` for words within the candidate band of `max_f64`.
    pub max_candidates: Vec<(u64, f64)>,
    /// Words whose hardware-precision smallest eigenvalue was not positive.
    pub non_positive_definite: Vec<u64>,
}

impl ScanPartial {
    pub fn empty(n: usize) -> Self {
        ScanPartial {
            n,
            count: 0,
            min_f64: f64::INFINITY,
            max_f64: f64::NEG_INFINITY,
            min_candidates: Vec::new(),
            max_candidates: Vec::new(),
            non_positive_definite: Vec::new(),
        }
    }

    fn push(&mut self, bits: u64, lo: f64, hi: f64) {
        self.count += 1;
        if lo <= 0.0 {
            self.non_positive_definite.push(bits);
        }
        if lo <= self.min_f64 * (1.0 + CANDIDATE_BAND) || self.min_candidates.is_empty() {
            self.min_candidates.push((bits, lo));
            if lo < self.min_f64 {
                self.min_f64 = lo;
                self.prune();
            }
        }
        if hi >= self.max_f64 * (1.0 - CANDIDATE_BAND) || self.max_candidates.is_empty() {
            self.max_candidates.push((bits, hi));
            if hi > self.max_f64 {
                self.max_f64 = hi;
                self.prune();
            }
        }
    }

    fn prune(&mut self) {
        let lo = self.min_f64 * (1.0 + CANDIDATE_BAND);
        let hi = self.max_f64 * (1.0 - CANDIDATE_BAND);
        self.min_candidates.retain(|&(_, v)| v <= lo);
        self.max_candidates.retain(|&(_, v)| v >= hi);
    }

    fn normalize(&mut self) {
        self.prune();
        self.min_candidates.sort_unstable_by_key(|c| c.0);
        self.max_candidates.sort_unstable_by_key(|c| c.0);
        self.non_positive_definite.sort_unstable();
    }

    /// Combines two partial scans of disjoint ranges. The result does not
    /// depend on the order or grouping of merges.
    pub fn merge(mut self, other: ScanPartial) -> ScanPartial {
        assert_eq!(self.n, other.n, "merging scans of different dimensions");
        self.count += other.count;
        self.min_f64 = self.min_f64.min(other.min_f64);
        self.max_f64 = self.max_f64.max(other.max_f64);
        self.min_candidates.extend(other.min_candidates);
        self.max_candidates.extend(other.max_candidates);
        self.non_positive_definite.extend(other.non_positive_definite);
        self.normalize();
        self
    }

    pub fn min_words(&self) -> Vec<u64> {
        self.min_candidates.iter().map(|c| c.0).collect()
    }

    pub fn max_words(&self) -> Vec<u64> {
        self.max_candidates.iter().map(|c| c.0).collect()
    }
}

/// Smallest and largest eigenvalue of `XXᵀ` in hardware floats.
pub fn extremes_f64(x: TriBitMatrix) -> (f64, f64) {
    if x.n == 1 {
        return (1.0, 1.0);
    }
    let res = jacobi_eigenvalues(x.gram_f64(), &1e-15, MAX_SWEEPS).expect("small Gram matrices converge");
    (*res.min(), *res.max())
}

/// Scans the bit words in `range`.
pub fn scan_words(n: usize, range: Range<u64>, cap: ScanCap) -> Result<ScanPartial, OracleError> {
    cap.check(n)?;
    if range.end > kn_size(n) {
        return Err(OracleError::WordOutOfRange { n, bits: range.end });
    }
    let mut part = ScanPartial::empty(n);
    for bits in range {
        let (lo, hi) = extremes_f64(TriBitMatrix { n, bits });
        part.push(bits, lo, hi);
    }
    part.normalize();
    Ok(part)
}

/// Extremal eigenvalues over `K_n`, verified at high precision.
#[derive(Debug, Clone)]
pub struct ExtremalRecord {
    pub n: usize,
    pub min_value: HpReal,
    pub max_value: HpReal,
    pub argmin: TriBitMatrix,
    pub argmax: TriBitMatrix,
    pub count_enumerated: u64,
    /// Candidates re-evaluated at high precision for each extreme.
    pub min_candidates: usize,
    pub max_candidates: usize,
    pub non_positive_definite: usize,
}

impl ExtremalRecord {
    pub fn summary(&self) -> String {
        alloc::format!(
            "n={} count={} min={} argmin={} max={} argmax={}",
            self.n,
            self.count_enumerated,
            crate::hp::decimal::format_sci(&self.min_value, 15),
            self.argmin,
            crate::hp::decimal::format_sci(&self.max_value, 15),
            self.argmax
        )
    }
}

fn pick<F>(n: usize, words: &[u64], prec: Precision, want_min: bool, key: F) -> Result<(u64, HpReal), OracleError>
where
    F: Fn(&crate::hp::EigenResult) -> HpReal,
{
    let tol = prec.default_tolerance();
    // ties closer than this are resolved by the lower word
    let tie = HpReal::pow2(-(prec.get() as i64 / 2), prec);
    let mut best: Option<(u64, HpReal)> = None;
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &w in &sorted {
        let g = TriBitMatrix { n, bits: w }.gram();
        let v = key(&eigenvalues_sym(&g, prec, &tol)?);
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let margin = &tie * &b.abs();
                if want_min {
                    v < b - &margin
                } else {
                    v > b + &margin
                }
            }
        };
        if better {
            best = Some((w, v));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Turns a complete scan into an [`ExtremalRecord`].
pub fn finalize(part: &ScanPartial, prec: Precision) -> Result<ExtremalRecord, OracleError> {
    let n = part.n;
    if part.count != kn_size(n) {
        return Err(OracleError::WordOutOfRange { n, bits: part.count });
    }
    let (wmin, vmin) = pick(n, &part.min_words(), prec, true, |r| r.min().clone())?;
    let (wmax, vmax) = pick(n, &part.max_words(), prec, false, |r| r.max().clone())?;
    Ok(ExtremalRecord {
        n,
        min_value: vmin,
        max_value: vmax,
        argmin: TriBitMatrix { n, bits: wmin },
        argmax: TriBitMatrix { n, bits: wmax },
        count_enumerated: part.count,
        min_candidates: part.min_candidates.len(),
        max_candidates: part.max_candidates.len(),
        non_positive_definite: part.non_positive_definite.len(),
    })
}

/// Full sequential scan of `K_n`.
pub fn gram_extremal_scan(n: usize, cap: ScanCap, prec: Precision) -> Result<ExtremalRecord, OracleError> {
    cap.check(n)?;
    finalize(&scan_words(n, 0..kn_size(n), cap)?, prec)
}

/// Checks `min σ_min(X)² = c_n` and `max σ_max(X)² = C_n` on the record's
/// extremal matrices, with the singular values taken from `XᵀX` to relative
/// accuracy `1e-12`.
pub fn singular_value_relation_holds(rec: &ExtremalRecord, prec: Precision) -> Result<bool, OracleError> {
    let tol = prec.default_tolerance();
    let lo = eigenvalues_sym(&rec.argmin.gram_transposed(), prec, &tol)?;
    let hi = eigenvalues_sym(&rec.argmax.gram_transposed(), prec, &tol)?;
    let sigma_min = lo.min().sqrt();
    let sigma_max = hi.max().sqrt();
    let rel = HpReal::from_f64(1e-12, prec);
    Ok(crate::hp::rel_close(&sigma_min.square(), &rec.min_value, &rel)
        && crate::hp::rel_close(&sigma_max.square(), &rec.max_value, &rel))
}

pub fn singular_value_relation_check(n: usize, cap: ScanCap, prec: Precision) -> Result<bool, OracleError> {
    singular_value_relation_holds(&gram_extremal_scan(n, cap, prec)?, prec)
}
