use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cglmp::cli::{
    compute_table, fit_json, fit_rows, read_table_csv, run_verify, write_table_csv, RowStatus,
    TableOptions, VerifyOptions, DEFAULT_EIG_BUDGET, DEFAULT_ORACLE_D, TABLE_ONE_DIMS,
};
use cglmp::spectral::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use cglmp::{i_d_mes_closed, i_d_mes_limit, reduced_bell_coefficients, Error};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "cglmp", version, about = "Maximal CGLMP Bell violations for two qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bell values of the eigenvector, approximate and maximally entangled states as CSV
    Table {
        /// Dimensions to tabulate
        dims: Vec<usize>,
        /// Use every dimension of the published table
        #[arg(long)]
        table_one: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Skip the eigensolve above this dimension
        #[arg(long, default_value_t = DEFAULT_EIG_BUDGET)]
        eig_budget: usize,
        /// Record per-row wall time (otherwise wall_ms is 0)
        #[arg(long)]
        timing: bool,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-route and oracle consistency checks
    Verify {
        #[arg(long, default_value_t = DEFAULT_ORACLE_D)]
        d_max_oracle: usize,
        /// Add this to B_1 in the operator route (fault injection)
        #[arg(long, default_value_t = 0.0, hide = true)]
        perturb: f64,
    },
    /// Fit A - B d^-p to the i_eig column of a table CSV
    Fit { table_csv: PathBuf },
    /// Print the d -> infinity value for the maximally entangled state
    Limit,
    /// Dump the reduced Bell operator coefficients B_r
    Coeffs {
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Parse { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Table {
            dims,
            table_one,
            tol,
            max_iter,
            eig_budget,
            timing,
            out,
        } => {
            let mut dims = dims;
            if table_one {
                dims.extend(TABLE_ONE_DIMS);
            }
            if let Some(&d) = dims.iter().find(|&&d| d < 2) {
                return Err(Error::InvalidDimension {
                    d: d as i64,
                    reason: "a qudit needs at least two levels",
                });
            }
            let opts = TableOptions {
                tol,
                max_iter,
                eig_budget,
                timing,
            };
            let rows = compute_table(&dims, &opts)?;
            for r in rows.iter().filter(|r| r.status == RowStatus::NotConverged) {
                eprintln!("warning: eigensolver did not converge for d = {}", r.d);
            }
            write_table_csv(&rows, output(&out)?)?;
            eprintln!("wrote {} rows", rows.len());
            Ok(0)
        }
        Command::Verify {
            d_max_oracle,
            perturb,
        } => {
            let report = run_verify(&VerifyOptions {
                d_max_oracle,
                perturbation: perturb,
            })?;
            for c in &report.checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                println!("{tag}  {}  deviation={:.3e}  tol={:.0e}", c.name, c.deviation, c.tolerance);
            }
            Ok(if report.passed() { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::Fit { table_csv } => {
            let rows = read_table_csv(File::open(&table_csv)?)?;
            let model = fit_rows(&rows)?;
            println!("A = {}", model.a);
            println!("B = {}", model.b);
            println!("p = {}", model.p);
            println!("rms_residual = {}", model.rms_residual);
            println!("{}", fit_json(&model));
            Ok(0)
        }
        Command::Limit => {
            let limit = i_d_mes_limit(1_000_000)?.value();
            println!("{limit:.10}");
            eprintln!("I_50000(mes) = {:.10}", i_d_mes_closed(50_000)?.value());
            Ok(0)
        }
        Command::Coeffs { d, out } => {
            let op = reduced_bell_coefficients(d)?;
            let mut w = output(&out)?;
            writeln!(w, "r,b")?;
            for (r, b) in op.coefficients().iter().enumerate() {
                writeln!(w, "{r},{b:.17e}")?;
            }
            w.flush()?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
