//! Number rendering and tabular output.

use std::io::Write;

use extremal_core::exact::{ExactInt, ExactRational};
use extremal_core::hp::decimal::{format_fixed, format_sci};
use extremal_core::HpReal;

use crate::config::OutputFormat;
use crate::error::CliError;

/// Values smaller than this in magnitude switch to scientific notation.
pub fn sci_threshold(prec: extremal_core::Precision) -> HpReal {
    HpReal::from_ratio(&ExactRational::new(ExactInt::from(1), ExactInt::from(1_000_000)), prec)
}

/// Significant digits shown in scientific notation for a `digits`-decimal
/// table, so `8.16298e-7` sits next to `0.000020528`.
pub fn sci_digits(digits: u32) -> usize {
    digits.saturating_sub(3).max(1) as usize
}

/// Fixed point with `digits` decimals, or scientific notation below `1e-6`.
/// Rounding is half-even on the exact binary value.
pub fn render_value(x: &HpReal, digits: u32) -> String {
    if !x.is_zero() && x.abs() < sci_threshold(x.precision()) {
        format_sci(x, sci_digits(digits))
    } else {
        format_fixed(x, digits as usize)
    }
}

/// Error quantities are always scientific.
pub fn render_metric(x: &HpReal, digits: u32) -> String {
    format_sci(x, sci_digits(digits))
}

/// A header row plus string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }

    pub fn write<W: Write>(&self, w: W, format: OutputFormat) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => self.write_delimited(w, b','),
            OutputFormat::Tsv => self.write_delimited(w, b'\t'),
            OutputFormat::Pretty => {
                let mut w = w;
                w.write_all(self.to_pretty().as_bytes())?;
                Ok(())
            }
        }
    }

    fn write_delimited<W: Write>(&self, w: W, delimiter: u8) -> Result<(), CliError> {
        let mut wr = csv::WriterBuilder::new().delimiter(delimiter).from_writer(w);
        wr.write_record(&self.headers)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads a table written by [`Table::write`] in csv or tsv form.
    pub fn read<R: std::io::Read>(r: R, format: OutputFormat) -> Result<Table, CliError> {
        let delimiter = match format {
            OutputFormat::Tsv => b'\t',
            OutputFormat::Csv => b',',
            OutputFormat::Pretty => return Err(CliError::Usage("pretty tables cannot be read back".into())),
        };
        let mut rd = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(r);
        let mut t = Table::new(rd.headers()?.iter());
        for rec in rd.records() {
            t.push(rec?.iter().map(String::from).collect());
        }
        Ok(t)
    }

    /// Right-aligned columns separated by two spaces.
    pub fn to_pretty(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.headers[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}
