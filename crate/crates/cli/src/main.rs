use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conespec::geometry::{catalog_geometry, domain_size};
use conespec::reproduction::paper_table;
use conespec::scaling::{estimate, lambda_of_nu, Method};
use conespec::spectral::{domain_m, expand_series};
use conespec::verify::{run_suite, Suite, VerifyOptions};
use conespec::{parse_domain, BoundaryCondition, DomainExpr, Error};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "conespec", version, about = "Laplacian spectra and eigenvalue estimates on spherical domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, default_value = "dirichlet")]
    bc: BoundaryCondition,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Exact degrees, multiplicities and eigenvalues of a join-product domain.
    Spectrum {
        expr: String,
        #[arg(long, default_value_t = 30.0)]
        max_nu: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Scale a reference spectrum onto a target domain.
    Estimate {
        #[arg(long)]
        target: String,
        #[arg(long)]
        reference: String,
        #[arg(long, default_value = "linear")]
        method: Method,
        #[arg(long, default_value_t = 5)]
        modes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Area of a domain.
    Size {
        expr: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Geometric, heat-kernel and asymptotic coefficients.
    Coeffs {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the identity checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Include the slow three-dimensional orthant integral.
        #[arg(long)]
        orthant3: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reproduce the published comparison table.
    Paper {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Dimension { .. }
            | Error::InvalidParameter { .. }
            | Error::DimensionMismatch { .. }
            | Error::BoundaryConditionMismatch => 2,
            Error::UnsupportedAtom(_) | Error::UnsupportedDomain { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 3, message: e.to_string() }
    }
}

/// x rounded to `digits` significant digits, as the nearest double.
fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().expect("formatted float parses")
}

fn digits(format: Format) -> usize {
    match format {
        Format::Table => 6,
        Format::Csv | Format::Json => 12,
    }
}

#[derive(Serialize)]
struct ModeRow {
    k: usize,
    nu: f64,
    multiplicity: u64,
    lambda: f64,
}

#[derive(Serialize)]
struct ValueRow {
    name: String,
    value: f64,
}

#[derive(Serialize)]
struct CheckRow {
    name: String,
    value: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct PaperOut {
    label: String,
    computed: f64,
    published: f64,
    tolerance: f64,
    comparison: Option<f64>,
    passed: bool,
}

/// Writes rows as csv, a json array of flat objects, or an aligned table.
fn emit<T: Serialize>(out: &mut impl Write, format: Format, rows: &[T]) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| Failure { code: 3, message: e.to_string() })?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| Failure { code: 3, message: e.to_string() })?;
            writeln!(out)?;
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(table_cells).collect();
            let header = rows.first().map(table_header).unwrap_or_default();
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            for row in std::iter::once(&header).chain(&cells) {
                let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                writeln!(out, "{}", line.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}

fn table_header<T: Serialize>(row: &T) -> Vec<String> {
    match serde_json::to_value(row) {
        Ok(serde_json::Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

fn table_cells<T: Serialize>(row: &T) -> Vec<String> {
    match serde_json::to_value(row) {
        Ok(serde_json::Value::Object(map)) => map
            .values()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => "-".to_string(),
                serde_json::Value::Number(x) if x.is_f64() => table_number(x.as_f64().unwrap_or(f64::NAN)),
                other => other.to_string(),
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Six significant digits; exponent form outside [1e-4, 1e7).
fn table_number(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:.5e}")
    } else {
        round_sig(x, 6).to_string()
    }
}

fn parse(text: &str) -> Result<DomainExpr, Failure> {
    Ok(parse_domain(text)?)
}

fn spectrum(out: &mut impl Write, expr: &str, max_nu: f64, bc: BoundaryCondition, format: Format) -> Result<(), Failure> {
    let d = parse(expr)?;
    let n = d.ambient_dim();
    let series = expand_series(&domain_m(&d, bc)?, max_nu)?;
    let p = digits(format);
    let rows: Vec<ModeRow> = series
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| ModeRow {
            k: i + 1,
            nu: round_sig(t.nu, p),
            multiplicity: t.multiplicity,
            lambda: round_sig(lambda_of_nu(t.nu, n), p),
        })
        .collect();
    emit(out, format, &rows)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { expr, max_nu, common } => spectrum(out, &expr, max_nu, common.bc, common.format),
        Command::Estimate { target, reference, method, modes, common } => {
            let report = estimate(&parse(&target)?, &parse(&reference)?, common.bc, method, modes)?;
            let p = digits(common.format);
            let rows: Vec<ModeRow> = report
                .rows
                .iter()
                .map(|r| ModeRow {
                    k: r.k,
                    nu: round_sig(r.nu, p),
                    multiplicity: r.multiplicity,
                    lambda: round_sig(r.lambda, p),
                })
                .collect();
            emit(out, common.format, &rows)
        }
        Command::Size { expr, format } => {
            let value = round_sig(domain_size(&parse(&expr)?)?, digits(format));
            emit(out, format, &[ValueRow { name: "size".into(), value }])
        }
        Command::Coeffs { expr, common } => {
            let d = parse(&expr)?;
            let g = catalog_geometry(&d, common.bc)?;
            let h = g.heat_coeffs();
            let s = g.scaling_inputs();
            let b = g.b_coefficients();
            let p = digits(common.format);
            let mut values = vec![
                ("area", g.area),
                ("boundary", g.boundary),
                ("c0", s.c0),
                ("c1", s.c1),
                ("gamma", s.gamma),
                ("a0", h.a0),
                ("a1", h.a1),
                ("a2", h.a2),
                ("b0", b.b0),
                ("b1", b.b1),
            ];
            if let Some(b2) = b.b2 {
                values.push(("b2", b2));
            }
            values.extend([("p", s.p), ("q", s.q)]);
            let rows: Vec<ValueRow> = values
                .into_iter()
                .map(|(name, v)| ValueRow { name: name.into(), value: round_sig(v, p) })
                .collect();
            emit(out, common.format, &rows)
        }
        Command::Verify { suite, orthant3, format } => {
            let checks = run_suite(suite, VerifyOptions { include_orthant3: orthant3 });
            let failed = checks.iter().filter(|c| !c.passed).count();
            let rows: Vec<CheckRow> = checks
                .into_iter()
                .map(|c| CheckRow { name: c.name, value: c.value, tolerance: c.tolerance, passed: c.passed })
                .collect();
            emit(out, format, &rows)?;
            if failed > 0 {
                return Err(Failure { code: 3, message: format!("{failed} of {} checks failed", rows.len()) });
            }
            Ok(())
        }
        Command::Paper { format } => {
            let table = paper_table()?;
            let p = digits(format);
            let failed = table.iter().filter(|r| !r.passed).count();
            let rows: Vec<PaperOut> = table
                .into_iter()
                .map(|r| PaperOut {
                    label: r.label,
                    computed: round_sig(r.computed, p),
                    published: r.published,
                    tolerance: r.tolerance,
                    comparison: r.comparison,
                    passed: r.passed,
                })
                .collect();
            emit(out, format, &rows)?;
            if failed > 0 {
                return Err(Failure { code: 3, message: format!("{failed} rows outside tolerance") });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
