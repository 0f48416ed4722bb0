//! `socf` — command-line analysis of second-order cone functions
//! f(x) = cᵀx + d − ‖Ax + b‖.
//!
//! Subcommands: `canonicalize`, `classify`, `eval`, `restrict`, `contour`.
//! Exit codes are a stable contract: 0 success, 1 probe contradiction,
//! 2 parse/validation error, 3 dimension/shape error.

mod doc;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use doc::SocfDocument;
use socf::analysis::contour_grid;
use socf::{Error as SocfError, Matrix, TolerancePolicy, Vector};

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: a probe contradicted a closed-form claim.
    Probe,
    /// Exit 2: unreadable or invalid input.
    Validation(String),
    /// Exit 3: shapes or dimensions do not line up.
    Dimension(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Probe => 1,
            Failure::Validation(_) => 2,
            Failure::Dimension(_) => 3,
        }
    }
}

impl From<SocfError> for Failure {
    fn from(e: SocfError) -> Failure {
        match e {
            SocfError::DimensionMismatch { .. } | SocfError::DimensionTooLarge { .. } => {
                Failure::Dimension(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "socf",
    version,
    about = "Analyze second-order cone functions f(x) = c'x + d - |Ax + b|",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a function document in canonical form
    Canonicalize {
        /// Input document (JSON)
        input: PathBuf,
        /// Output document (JSON)
        output: PathBuf,
    },
    /// Report concavity, boundedness, critical sets, and the feasible region
    Classify {
        input: PathBuf,
        /// Also run the sampling probes and cross-check the report
        #[arg(long)]
        probe: bool,
        /// Seed for the probes
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tabular output instead of JSON
        #[arg(long)]
        human: bool,
    },
    /// Evaluate the function at a point
    Eval {
        input: PathBuf,
        /// Comma-separated coordinates, e.g. --at 0.5,-1.25
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Restrict the function to the affine subspace x0 + B y
    Restrict {
        input: PathBuf,
        /// Base point, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Basis matrix, semicolon-separated rows: "1,0;0,1"
        #[arg(long = "B", allow_hyphen_values = true)]
        basis: String,
        output: PathBuf,
    },
    /// Write f over a uniform grid as CSV with header x,y,f
    Contour {
        input: PathBuf,
        /// x interval as lo:hi
        #[arg(long, allow_hyphen_values = true)]
        xrange: String,
        /// y interval as lo:hi
        #[arg(long, allow_hyphen_values = true)]
        yrange: String,
        /// Grid points along x
        #[arg(long)]
        nx: usize,
        /// Grid points along y
        #[arg(long)]
        ny: usize,
        output: PathBuf,
    },
}

/// 17 significant digits: enough for f64 to round-trip exactly through text.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_document(path: &Path, tol: &TolerancePolicy) -> Result<SocfDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    SocfDocument::parse(&text, tol)
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))
}

fn parse_vector(text: &str) -> Result<Vector, Failure> {
    let entries = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Validation(format!("invalid number `{}`", part.trim())))
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    Vector::new(entries).map_err(Failure::from)
}

/// Rows separated by `;`, entries by `,`. Empty input means zero columns,
/// which the caller rejects as a shape error.
fn parse_matrix_rows(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|row| {
            if row.trim().is_empty() {
                return Ok(Vec::new());
            }
            row.split(',')
                .map(|part| {
                    part.trim().parse::<f64>().map_err(|_| {
                        Failure::Validation(format!("invalid number `{}`", part.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_range(text: &str) -> Result<(f64, f64), Failure> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Failure::Validation(format!("range `{text}` must look like lo:hi")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| Failure::Validation(format!("invalid number `{lo}`")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| Failure::Validation(format!("invalid number `{hi}`")))?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Failure::Validation(format!(
            "range `{text}` must be finite and increasing"
        )));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = TolerancePolicy::default();
    match cli.command {
        Command::Canonicalize { input, output } => {
            let document = read_document(&input, &tol)?;
            let label = document.label().map(str::to_owned);
            let canonical = document.canonical(&tol)?;
            let out = SocfDocument::Canonical {
                label,
                form: canonical,
            };
            write_output(&output, &out.to_json())
        }
        Command::Classify {
            input,
            probe,
            seed,
            human,
        } => {
            let document = read_document(&input, &tol)?;
            let label = document.label().map(str::to_owned);
            let canonical = document.canonical(&tol)?;
            let report = report::build_report(label, &canonical, &tol, probe.then_some(seed));
            if human {
                print!("{}", report.to_human());
            } else {
                print!("{}", report.to_json());
            }
            if report.contradiction() {
                return Err(Failure::Probe);
            }
            Ok(())
        }
        Command::Eval { input, at } => {
            let document = read_document(&input, &tol)?;
            let x = parse_vector(&at)?;
            if x.dim() != document.dim() {
                return Err(Failure::Dimension(format!(
                    "point has dimension {}, function expects {}",
                    x.dim(),
                    document.dim()
                )));
            }
            println!("{}", fmt17(document.eval(&x)?));
            Ok(())
        }
        Command::Restrict {
            input,
            x0,
            basis,
            output,
        } => {
            let document = read_document(&input, &tol)?;
            let general = document.general(&tol)?;
            let x0 = parse_vector(&x0)?;
            let rows = parse_matrix_rows(&basis)?;
            if rows.is_empty() || rows.iter().any(|r| r.is_empty()) {
                return Err(Failure::Dimension(
                    "restriction basis must have at least one column".into(),
                ));
            }
            let basis = Matrix::from_nested(&rows).map_err(Failure::from)?;
            let restricted = general.restrict(&x0, &basis).map_err(Failure::from)?;
            let out = SocfDocument::General {
                label: document.label().map(str::to_owned),
                form: restricted,
            };
            write_output(&output, &out.to_json())
        }
        Command::Contour {
            input,
            xrange,
            yrange,
            nx,
            ny,
            output,
        } => {
            let document = read_document(&input, &tol)?;
            let canonical = document.canonical(&tol)?;
            let x_range = parse_range(&xrange)?;
            let y_range = parse_range(&yrange)?;
            let grid = contour_grid(&canonical, x_range, y_range, nx, ny).map_err(Failure::from)?;
            let mut csv = String::with_capacity(32 * grid.values.len() + 8);
            csv.push_str("x,y,f\n");
            for iy in 0..grid.ny {
                let y = grid.y_at(iy);
                for ix in 0..grid.nx {
                    csv.push_str(&fmt17(grid.x_at(ix)));
                    csv.push(',');
                    csv.push_str(&fmt17(y));
                    csv.push(',');
                    csv.push_str(&fmt17(grid.value(ix, iy)));
                    csv.push('\n');
                }
            }
            write_output(&output, &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Probe => eprintln!("error: probe contradicts the closed-form report"),
                Failure::Validation(msg) | Failure::Dimension(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
