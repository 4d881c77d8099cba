//! Row computations for the `table1`, `bounds`, `errors` and `conjecture`
//! commands. Rows are computed in parallel and returned in index order.

use rayon::prelude::*;

use extremal_core::bounds::{
    self, bound_altinisik, bound_corollary, bound_frobenius, bound_mattila, bound_theorem_main, c_exact_with, c_from_z,
    relative_error, sig_digits, BoundKind,
};
use extremal_core::hp::{adaptive_eval, AdaptiveConfig, AdaptiveError, HpContext};
use extremal_core::matrices::build_z;
use extremal_core::{EigenError, HpReal, Precision};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::render::{render_metric, render_value, Table};

/// Extra significant digits demanded of `c_n` beyond the printed decimals.
const C_GUARD_DIGITS: u32 = 10;

fn c_value(n: usize, cfg: &RunConfig) -> Result<HpReal, CliError> {
    let out = c_exact_with(n, cfg.digits + C_GUARD_DIGITS, AdaptiveConfig::starting_at(cfg.prec))?;
    Ok(out.value)
}

fn par_rows<T: Send>(
    cfg: &RunConfig,
    f: impl Fn(usize) -> Result<T, CliError> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    cfg.validate()?;
    cfg.range().collect::<Vec<_>>().into_par_iter().map(f).collect()
}

/// One row of the bounds comparison.
#[derive(Debug, Clone)]
pub struct BoundTableRow {
    pub n: usize,
    pub c_n: HpReal,
    pub theorem_main: HpReal,
    pub altinisik: HpReal,
    pub mattila: HpReal,
    /// `c_n − theorem_main`.
    pub abs_err: HpReal,
    /// `abs_err / c_n`.
    pub rel_err: HpReal,
    pub sig_digits: Option<i64>,
}

impl BoundTableRow {
    pub fn compute(n: usize, cfg: &RunConfig) -> Result<Self, CliError> {
        let c_n = c_value(n, cfg)?;
        let theorem_main = bound_theorem_main(n, cfg.prec)?;
        let abs_err = &c_n - &theorem_main;
        let rel_err = relative_error(&c_n, &theorem_main);
        Ok(BoundTableRow {
            n,
            sig_digits: sig_digits(&c_n, &theorem_main),
            altinisik: bound_altinisik(n, cfg.prec)?,
            mattila: bound_mattila(n, cfg.prec)?,
            c_n,
            theorem_main,
            abs_err,
            rel_err,
        })
    }
}

pub const TABLE1_HEADERS: [&str; 5] = ["n", "c_n", "bound_theorem", "bound_altinisik", "bound_mattila"];

pub fn table1_rows(cfg: &RunConfig) -> Result<Vec<BoundTableRow>, CliError> {
    par_rows(cfg, |n| BoundTableRow::compute(n, cfg))
}

pub fn table1_table(rows: &[BoundTableRow], digits: u32) -> Table {
    let mut t = Table::new(TABLE1_HEADERS);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            render_value(&r.c_n, digits),
            render_value(&r.theorem_main, digits),
            render_value(&r.altinisik, digits),
            render_value(&r.mattila, digits),
        ]);
    }
    t
}

/// The full comparison including the error of the main bound.
pub fn bound_rows_table(rows: &[BoundTableRow], digits: u32) -> Table {
    let mut t = Table::new(TABLE1_HEADERS.iter().copied().chain(["abs_err", "rel_err", "sig_digits"]));
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            render_value(&r.c_n, digits),
            render_value(&r.theorem_main, digits),
            render_value(&r.altinisik, digits),
            render_value(&r.mattila, digits),
            render_metric(&r.abs_err, digits),
            render_metric(&r.rel_err, digits),
            r.sig_digits.map_or_else(|| "inf".into(), |d| d.to_string()),
        ]);
    }
    t
}

fn column_name(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::ExactCn => "c_n",
        BoundKind::FrobeniusLemma => "bound_frobenius",
        BoundKind::TheoremMain => "bound_theorem",
        BoundKind::CorollaryOddEven => "bound_corollary",
        BoundKind::Mattila => "bound_mattila",
        BoundKind::Altinisik => "bound_altinisik",
        BoundKind::ExactUpperCn => "C_n",
        BoundKind::IhmOldUpper => "bound_ihm_upper",
    }
}

/// A table of `c_n` next to the selected quantities.
pub fn bounds_table(cfg: &RunConfig, kinds: &[BoundKind]) -> Result<Table, CliError> {
    let kinds: Vec<BoundKind> = kinds.iter().copied().filter(|k| *k != BoundKind::ExactCn).collect();
    let rows = par_rows(cfg, |n| {
        let mut row = vec![n.to_string(), render_value(&c_value(n, cfg)?, cfg.digits)];
        for k in &kinds {
            row.push(render_value(&k.evaluate(n, cfg.prec)?, cfg.digits));
        }
        Ok(row)
    })?;
    let mut t = Table::new(["n", "c_n"].into_iter().chain(kinds.iter().map(|k| column_name(*k))));
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

/// Per-n errors of the three lower bounds, all from one precision.
#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub n: usize,
    pub c_n: HpReal,
    pub theorem_main: HpReal,
    pub mattila: HpReal,
    pub altinisik: HpReal,
    pub sig_digits_theorem: Option<i64>,
    /// Precision at which the relative error of the main bound stabilised.
    pub precision: Precision,
}

impl ErrorRow {
    fn at(n: usize, z: &extremal_core::IntSymMatrix, prec: Precision) -> Result<Self, EigenError> {
        let bound = |r: Result<HpReal, bounds::BoundsError>| r.expect("n >= 1");
        let c_n = c_from_z(z, prec)?;
        let theorem_main = bound(bound_theorem_main(n, prec));
        Ok(ErrorRow {
            n,
            sig_digits_theorem: sig_digits(&c_n, &theorem_main),
            mattila: bound(bound_mattila(n, prec)),
            altinisik: bound(bound_altinisik(n, prec)),
            c_n,
            theorem_main,
            precision: prec,
        })
    }

    pub fn abs_err(&self, bound: &HpReal) -> HpReal {
        &self.c_n - bound
    }

    pub fn rel_err(&self, bound: &HpReal) -> HpReal {
        relative_error(&self.c_n, bound)
    }

    /// Doubles the precision until the main bound's relative error is stable
    /// to `digits` significant digits. That error falls to about `1e-245` by
    /// `n = 300`, so `c_n` itself needs far more digits than are printed.
    pub fn compute(n: usize, digits: u32, start: Precision) -> Result<Self, CliError> {
        let z = build_z(n).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut last = None;
        let res = adaptive_eval(digits, AdaptiveConfig::starting_at(start), |p| {
            let row = ErrorRow::at(n, &z, p)?;
            let rel = row.rel_err(&row.theorem_main);
            last = Some(row);
            Ok::<_, EigenError>(rel)
        });
        match res {
            Ok(_) => Ok(last.expect("at least one evaluation")),
            Err(AdaptiveError::Inner(e)) => Err(e.into()),
            Err(e) => Err(CliError::Numerical(e.to_string())),
        }
    }
}

pub const ERROR_HEADERS: [&str; 13] = [
    "n",
    "c_n",
    "bound_theorem",
    "bound_mattila",
    "bound_altinisik",
    "abs_err_theorem",
    "rel_err_theorem",
    "abs_err_mattila",
    "rel_err_mattila",
    "abs_err_altinisik",
    "rel_err_altinisik",
    "sig_digits_theorem",
    "prec_bits",
];

pub const MAX_ERRORS_N: usize = 300;

pub fn error_rows(cfg: &RunConfig) -> Result<Vec<ErrorRow>, CliError> {
    if cfg.from < 2 || cfg.to > MAX_ERRORS_N {
        return Err(CliError::Usage(format!("errors range must lie within 2..{MAX_ERRORS_N}")));
    }
    par_rows(cfg, |n| ErrorRow::compute(n, cfg.digits, cfg.prec))
}

pub fn errors_table(rows: &[ErrorRow], digits: u32) -> Table {
    let mut t = Table::new(ERROR_HEADERS);
    for r in rows {
        let mut cells = vec![
            r.n.to_string(),
            render_value(&r.c_n, digits),
            render_value(&r.theorem_main, digits),
            render_value(&r.mattila, digits),
            render_value(&r.altinisik, digits),
        ];
        for b in [&r.theorem_main, &r.mattila, &r.altinisik] {
            cells.push(render_metric(&r.abs_err(b), digits));
            cells.push(render_metric(&r.rel_err(b), digits));
        }
        cells.push(r.sig_digits_theorem.map_or_else(|| "inf".into(), |d| d.to_string()));
        cells.push(r.precision.get().to_string());
        t.push(cells);
    }
    t
}

/// `c_n·φ^{2n}/5` and its distance from 1.
#[derive(Debug, Clone)]
pub struct ConjectureRow {
    pub n: usize,
    pub c_n: HpReal,
    pub ratio: HpReal,
    pub distance: HpReal,
}

pub fn conjecture_rows(cfg: &RunConfig) -> Result<Vec<ConjectureRow>, CliError> {
    par_rows(cfg, |n| {
        let c_n = c_value(n, cfg)?;
        let mut cx = HpContext::new(c_n.precision());
        let ratio = &c_n * cx.phi().powi(2 * n) / cx.int(5);
        let distance = (&ratio - cx.int(1)).abs();
        Ok(ConjectureRow { n, c_n, ratio, distance })
    })
}

pub fn conjecture_table(rows: &[ConjectureRow], digits: u32) -> Table {
    let mut t = Table::new(["n", "c_n", "ratio", "distance_from_1"]);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            render_value(&r.c_n, digits),
            render_value(&r.ratio, digits),
            render_metric(&r.distance, digits),
        ]);
    }
    t
}

/// Both lower-bound evaluators agree bit for bit; reported by `bounds`.
pub fn corollary_agrees(n: usize, prec: Precision) -> Result<bool, CliError> {
    Ok(bound_theorem_main(n, prec)? == bound_corollary(n, prec)?)
}

/// `1/‖Z_n‖_F` against the golden-ratio form, relative.
pub fn frobenius_gap(n: usize, prec: Precision) -> Result<HpReal, CliError> {
    let a = bound_frobenius(n, prec)?;
    let b = bound_theorem_main(n, prec)?;
    Ok(((&a - &b) / &b).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_rows() {
        let cfg = RunConfig::default().with_range(1, 3);
        let t = table1_table(&table1_rows(&cfg).unwrap(), 9);
        assert_eq!(t.rows[0], ["1", "1.000000000", "1.000000000", "1.000000000", "1.000000000"]);
        assert_eq!(t.rows[1][1], "0.381966011");
    }

    #[test]
    fn error_row_at_two() {
        let r = ErrorRow::compute(2, 9, Precision::bits(256)).unwrap();
        let abs = r.abs_err(&r.theorem_main).to_f64();
        assert!((abs - 0.004002).abs() < 1e-6, "{abs}");
        assert!(corollary_agrees(7, Precision::bits(256)).unwrap());
        assert!(frobenius_gap(7, Precision::bits(256)).unwrap().to_f64() < 1e-70);
    }

    #[test]
    fn errors_range_is_checked() {
        assert!(error_rows(&RunConfig::default().with_range(1, 5)).is_err());
        assert!(error_rows(&RunConfig::default().with_range(2, 301)).is_err());
    }
}
