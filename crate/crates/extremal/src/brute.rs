//! Thread-parallel exhaustive scan of `K_n`.

use rayon::prelude::*;

use extremal_core::bounds::{c_exact, c_upper_closed_form};
use extremal_core::oracle::{finalize, kn_size, scan_words, singular_value_relation_holds, ScanCap, ScanPartial};
use extremal_core::{ExtremalRecord, HpReal, Precision};

use crate::error::CliError;
use crate::matrix_io::format_rows;
use crate::render::render_metric;

/// Bit words per work item.
const CHUNK: u64 = 1 << 12;

/// Same result as the sequential scan; the word range is split into chunks
/// whose partial results are merged.
pub fn parallel_scan(n: usize, cap: ScanCap, prec: Precision) -> Result<ExtremalRecord, CliError> {
    cap.check(n)?;
    let total = kn_size(n);
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK)).map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(total))).collect();
    let part = chunks
        .into_par_iter()
        .map(|(a, b)| scan_words(n, a..b, cap))
        .try_reduce(|| ScanPartial::empty(n), |x, y| Ok(x.merge(y)))?;
    Ok(finalize(&part, prec)?)
}

/// A scan together with its deviations from `c_n` and `C_n`.
#[derive(Debug, Clone)]
pub struct BruteReport {
    pub record: ExtremalRecord,
    pub c_n: HpReal,
    pub upper_c_n: HpReal,
    /// `|min/c_n − 1|`.
    pub min_deviation: HpReal,
    /// `|max/C_n − 1|`.
    pub max_deviation: HpReal,
    pub singular_values_consistent: bool,
}

impl BruteReport {
    pub fn run(n: usize, cap: ScanCap, prec: Precision) -> Result<Self, CliError> {
        let record = parallel_scan(n, cap, prec)?;
        let digits = (prec.decimal_digits() as u32 / 2).max(20);
        let c_n = c_exact(n, digits)?.value.with_precision(prec);
        let upper_c_n = c_upper_closed_form(n, prec)?;
        let one = HpReal::one(prec);
        let min_deviation = (&record.min_value / &c_n - &one).abs();
        let max_deviation = (&record.max_value / &upper_c_n - &one).abs();
        let singular_values_consistent = singular_value_relation_holds(&record, prec)?;
        Ok(BruteReport { record, c_n, upper_c_n, min_deviation, max_deviation, singular_values_consistent })
    }

    /// Both extremes within `rel` of the predictions.
    pub fn agrees(&self, rel: f64) -> bool {
        self.min_deviation.to_f64() < rel && self.max_deviation.to_f64() < rel
    }

    pub fn render(&self, digits: u32) -> String {
        let r = &self.record;
        let show = |x: &HpReal| extremal_core::hp::decimal::format_fixed(x, digits as usize);
        let mut s = String::new();
        s += &format!("n = {}\n", r.n);
        s += &format!("count_enumerated = {}\n", r.count_enumerated);
        s += &format!("min_eigenvalue = {}\n", show(&r.min_value));
        s += &format!("c_n = {}\n", show(&self.c_n));
        s += &format!("min_deviation = {}\n", render_metric(&self.min_deviation, digits.max(4)));
        s += &format!("max_eigenvalue = {}\n", show(&r.max_value));
        s += &format!("C_n = {}\n", show(&self.upper_c_n));
        s += &format!("max_deviation = {}\n", render_metric(&self.max_deviation, digits.max(4)));
        s += &format!("argmax_all_ones = {}\n", r.argmax.is_all_ones());
        s += &format!("singular_values_consistent = {}\n", self.singular_values_consistent);
        s += &format!("argmin (word {:#x}):\n{}", r.argmin.bits(), format_rows(&r.argmin.to_rows()));
        s += &format!("argmax (word {:#x}):\n{}", r.argmax.bits(), format_rows(&r.argmax.to_rows()));
        s
    }
}
