use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use extremal::brute::BruteReport;
use extremal::config::{OutputFormat, RunConfig, PREC_ENV};
use extremal::error::CliError;
use extremal::matrix_io::{read_matrix, write_matrix};
use extremal::render::{render_metric, render_value, Table};
use extremal::svg::{line_chart, Series};
use extremal::tables;
use extremal::verify::{self, Suite};
use extremal_core::applications::{gcd_matrix_bounds, parse_set, Alpha};
use extremal_core::bounds::{c_exact_with, c_upper_asymptotic, c_upper_closed_form, BoundKind};
use extremal_core::hp::{decimal, lambda_max_sym, AdaptiveConfig};
use extremal_core::matrices::{build_a, build_b, build_w, build_z};
use extremal_core::oracle::ScanCap;
use extremal_core::Precision;

#[derive(Parser)]
#[command(name = "extremal", version, about = "Extremal Gram eigenvalues of lower triangular (0,1)-matrices")]
struct Cli {
    /// Decimal places printed (and agreement target for adaptive runs).
    #[arg(long, global = true, default_value_t = 9)]
    digits: u32,
    /// Working precision in bits.
    #[arg(long = "prec-bits", global = true, env = PREC_ENV, default_value_t = Precision::DEFAULT.get())]
    prec_bits: usize,
    /// csv, tsv or pretty. Defaults to csv for files and pretty for the console.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output file; the console still gets a pretty table.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Copy)]
struct Range {
    #[arg(long)]
    from: Option<usize>,
    #[arg(long)]
    to: Option<usize>,
    /// A single dimension; shorthand for --from N --to N.
    #[arg(long)]
    n: Option<usize>,
}

impl Range {
    fn resolve(self, from: usize, to: usize) -> (usize, usize) {
        match self.n {
            Some(n) => (n, n),
            None => (self.from.unwrap_or(from), self.to.unwrap_or(to)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// c_n = 1/λ_max(Z_n).
    #[command(name = "cn")]
    LowerConstant {
        #[arg(long)]
        n: usize,
    },
    /// C_n from its closed form, checked against λ_max(W_n).
    #[command(name = "Cn")]
    UpperConstant {
        #[arg(long)]
        n: usize,
    },
    /// c_n next to selected bounds.
    Bounds {
        #[command(flatten)]
        range: Range,
        /// theorem-main, corollary, mattila, altinisik, frobenius, Cn, ihm-old-upper or all.
        #[arg(long, default_value = "all")]
        bound: Vec<String>,
    },
    /// c_n and the three lower bounds for n = 1..10.
    Table1,
    /// Absolute and relative errors of the lower bounds.
    Errors {
        #[command(flatten)]
        range: Range,
        /// Also write a chart of log10 relative errors.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        /// identities, matrices, eigen or all.
        suite: String,
        #[arg(long = "max-n", default_value_t = 50)]
        max_n: usize,
    },
    /// Exhaustive scan of K_n.
    Brute {
        #[arg(long)]
        n: usize,
        /// Raise the enumeration cap to this n (at most 9; 2^36 matrices).
        #[arg(long = "cap-override")]
        cap_override: Option<usize>,
    },
    /// c_n·φ^{2n}/5 and its distance from 1.
    Conjecture {
        #[command(flatten)]
        range: Range,
    },
    /// Extremal eigenvalues of a power GCD matrix against their bounds.
    GcdBounds {
        /// `a..b` or a comma-separated list; must be divisor-closed.
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// Write Z_n, W_n, B_n or A_n in the plain-text matrix format, or
    /// read a matrix file and print its largest eigenvalue.
    Dump {
        /// z, w, b or a.
        #[arg(long, default_value = "z")]
        matrix: String,
        #[arg(long)]
        n: Option<usize>,
        /// Read this matrix file instead of building one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn format_choice(cli: &Cli) -> Result<Option<OutputFormat>, CliError> {
    cli.format.as_deref().map(str::parse).transpose()
}

fn config(cli: &Cli, from: usize, to: usize) -> Result<RunConfig, CliError> {
    let cfg = RunConfig {
        prec: Precision::bits(cli.prec_bits),
        digits: cli.digits,
        from,
        to,
        out: cli.out.clone(),
        format: format_choice(cli)?.unwrap_or_default(),
        cap: ScanCap::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, table: &Table) -> Result<(), CliError> {
    let stdout = io::stdout();
    match &cli.out {
        Some(path) => {
            let format = format_choice(cli)?.unwrap_or(OutputFormat::Csv);
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, format)?;
            w.flush()?;
            table.write(stdout.lock(), OutputFormat::Pretty)
        }
        None => table.write(stdout.lock(), format_choice(cli)?.unwrap_or(OutputFormat::Pretty)),
    }
}

fn emit_text(cli: &Cli, text: &str) -> Result<(), CliError> {
    if let Some(path) = &cli.out {
        std::fs::write(path, text)?;
    }
    print!("{text}");
    Ok(())
}

fn parse_kinds(names: &[String]) -> Result<Vec<BoundKind>, CliError> {
    let mut kinds = Vec::new();
    for name in names.iter().flat_map(|s| s.split(',')) {
        if name == "all" {
            kinds.extend([
                BoundKind::TheoremMain,
                BoundKind::CorollaryOddEven,
                BoundKind::FrobeniusLemma,
                BoundKind::Altinisik,
                BoundKind::Mattila,
            ]);
        } else {
            kinds.push(name.parse().map_err(|e: extremal_core::bounds::UnknownBound| CliError::Usage(e.to_string()))?);
        }
    }
    kinds.dedup();
    Ok(kinds)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Command::LowerConstant { n } => {
            let cfg = config(cli, *n, *n)?;
            let out = c_exact_with(*n, cfg.digits + 10, AdaptiveConfig::starting_at(cfg.prec))?;
            let mut t = Table::new(["n", "c_n", "c_n_sci", "prec_bits"]);
            t.push(vec![
                n.to_string(),
                render_value(&out.value, cfg.digits),
                decimal::format_sci(&out.value, cfg.digits as usize + 1),
                out.precision.get().to_string(),
            ]);
            emit(cli, &t)
        }
        Command::UpperConstant { n } => {
            let cfg = config(cli, *n, *n)?;
            let closed = c_upper_closed_form(*n, cfg.prec)?;
            let w = build_w(*n).map_err(|e| CliError::Usage(e.to_string()))?;
            let lam = lambda_max_sym(&w, cfg.prec, &cfg.prec.default_tolerance())?;
            let asym = c_upper_asymptotic(*n, cfg.prec)?;
            let mut t = Table::new(["n", "C_n", "lambda_max_W", "asymptotic", "rel_diff_W"]);
            t.push(vec![
                n.to_string(),
                render_value(&closed, cfg.digits),
                render_value(&lam, cfg.digits),
                render_value(&asym, cfg.digits),
                render_metric(&((&lam - &closed) / &closed).abs(), cfg.digits),
            ]);
            emit(cli, &t)
        }
        Command::Bounds { range, bound } => {
            let (from, to) = range.resolve(1, 10);
            let cfg = config(cli, from, to)?;
            emit(cli, &tables::bounds_table(&cfg, &parse_kinds(bound)?)?)
        }
        Command::Table1 => {
            let cfg = config(cli, 1, 10)?;
            emit(cli, &tables::table1_table(&tables::table1_rows(&cfg)?, cfg.digits))
        }
        Command::Errors { range, svg } => {
            let (from, to) = range.resolve(2, 100);
            let cfg = config(cli, from, to)?;
            let rows = tables::error_rows(&cfg)?;
            if let Some(path) = svg {
                let series = |name: &str, pick: fn(&tables::ErrorRow) -> &extremal_core::HpReal| Series {
                    name: name.into(),
                    points: rows.iter().map(|r| (r.n as f64, log10(&r.rel_err(pick(r))))).collect(),
                };
                let chart = line_chart(
                    "relative error of the lower bounds",
                    "n",
                    "log10 relative error",
                    &[
                        series("main bound", |r| &r.theorem_main),
                        series("altinisik", |r| &r.altinisik),
                        series("mattila", |r| &r.mattila),
                    ],
                );
                std::fs::write(path, chart)?;
            }
            emit(cli, &tables::errors_table(&rows, cfg.digits))
        }
        Command::Verify { suite, max_n } => {
            let suite: Suite = suite.parse()?;
            let report = verify::run(suite, *max_n)?;
            emit_text(cli, &report.to_string())?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::VerificationFailed(format!("{} checks failed", report.failures().count())))
            }
        }
        Command::Brute { n, cap_override } => {
            let mut cfg = config(cli, *n, *n)?;
            if let Some(c) = cap_override {
                cfg.cap = ScanCap::with_override(*c)?;
            }
            let rep = BruteReport::run(*n, cfg.cap, cfg.prec)?;
            emit_text(cli, &rep.render(cfg.digits))?;
            if rep.agrees(1e-12) {
                Ok(())
            } else {
                Err(CliError::VerificationFailed("scan disagrees with the predicted extremes".into()))
            }
        }
        Command::Conjecture { range } => {
            let (from, to) = range.resolve(2, 40);
            let cfg = config(cli, from, to)?;
            emit(cli, &tables::conjecture_table(&tables::conjecture_rows(&cfg)?, cfg.digits))
        }
        Command::GcdBounds { set, alpha } => {
            config(cli, 1, 1)?;
            let set = parse_set(set).map_err(CliError::Usage)?;
            let alpha: Alpha = alpha.parse()?;
            let r = gcd_matrix_bounds(&set, alpha, cli.digits)?;
            let d = cli.digits;
            let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let text = format!(
                "set = {:?}\nalpha = {}\nlambda_min = {}\nlower_bound = {}\nlambda_max = {}\nupper_bound = {}\n{} lower_bound <= lambda_min\n{} lambda_max <= upper_bound\n",
                r.set,
                r.alpha,
                render_value(&r.lambda_min, d),
                render_value(&r.lower_bound, d),
                render_value(&r.lambda_max, d),
                render_value(&r.upper_bound, d),
                verdict(r.lower_holds),
                verdict(r.upper_holds),
            );
            emit_text(cli, &text)?;
            if r.holds() {
                Ok(())
            } else {
                Err(CliError::VerificationFailed("eigenvalue bounds violated".into()))
            }
        }
        Command::Dump { matrix, n, input } => {
            if let Some(path) = input {
                let cfg = config(cli, 1, 1)?;
                let m = read_matrix(BufReader::new(File::open(path)?))?;
                let lam = lambda_max_sym(&m, cfg.prec, &cfg.prec.default_tolerance())?;
                println!("n = {}\nlambda_max = {}", m.dim(), render_value(&lam, cfg.digits));
                return Ok(());
            }
            let n = n.ok_or_else(|| CliError::Usage("dump needs --n or --input".into()))?;
            let build = match matrix.to_ascii_lowercase().as_str() {
                "z" => build_z,
                "w" => build_w,
                "b" => build_b,
                "a" => build_a,
                other => return Err(CliError::Usage(format!("unknown matrix `{other}` (expected z, w, b or a)"))),
            };
            let m = build(n).map_err(|e| CliError::Usage(e.to_string()))?;
            match &cli.out {
                Some(path) => write_matrix(BufWriter::new(File::create(path)?), &m)?,
                None => write_matrix(io::stdout().lock(), &m)?,
            }
            Ok(())
        }
    }
}

fn log10(x: &extremal_core::HpReal) -> f64 {
    match decimal::decimal_exponent(x) {
        // mantissa from the f64 image scaled back into [1, 10)
        Some(e) => {
            let m = (x / &extremal_core::HpReal::from_f64(10f64.powi(e as i32), x.precision())).to_f64();
            if m.is_finite() && m > 0.0 {
                e as f64 + m.log10()
            } else {
                e as f64
            }
        }
        None => f64::NAN,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
