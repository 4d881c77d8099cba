use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use extremal_core::oracle::ScanCap;
use extremal_core::Precision;

use crate::error::CliError;

/// Environment variable that overrides the default working precision.
pub const PREC_ENV: &str = "EXTREMAL_PREC_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Tsv,
    Pretty,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "tsv" => Ok(OutputFormat::Tsv),
            "pretty" => Ok(OutputFormat::Pretty),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (expected csv, tsv or pretty)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Tsv => "tsv",
            OutputFormat::Pretty => "pretty",
        })
    }
}

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub prec: Precision,
    /// Printed decimals for values, and the agreement target for adaptive runs.
    pub digits: u32,
    pub from: usize,
    pub to: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub cap: ScanCap,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec: Precision::DEFAULT,
            digits: 9,
            from: 1,
            to: 10,
            out: None,
            format: OutputFormat::Csv,
            cap: ScanCap::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.digits == 0 {
            return Err(CliError::Usage("--digits must be at least 1".into()));
        }
        if self.prec < Precision::MIN {
            return Err(CliError::Usage(format!("--prec-bits must be at least {}", Precision::MIN.get())));
        }
        if self.from == 0 || self.from > self.to {
            return Err(CliError::Usage(format!("empty or invalid range {}..{}", self.from, self.to)));
        }
        Ok(())
    }

    pub fn range(&self) -> RangeInclusive<usize> {
        self.from..=self.to
    }

    pub fn with_range(mut self, from: usize, to: usize) -> Self {
        self.from = from;
        self.to = to;
        self
    }

    pub fn with_prec(mut self, bits: usize) -> Self {
        self.prec = Precision::bits(bits);
        self
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }
}
