//! Library side of the `cglmp` binary: table rows and their CSV form, the
//! fit reader, and the cross-route verification suite.
//!
//! Everything here returns data; the binary only parses flags, prints and
//! picks exit codes.

use std::io::{Read, Write};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::{fit_power_law, FitModel};
use crate::operator::{
    extract_first_block, full_bell_matrix, reduced_bell_coefficients,
    reduced_bell_coefficients_sinesum, ReducedBellOperator, FULL_MATRIX_MAX_D,
};
use crate::probability::bell_value_probabilistic;
use crate::qudit::{make_optimal_settings, GeneralState, SchmidtState};
use crate::spectral::{
    autocorrelation_with, dense_max_eigenpair, max_eigenpair, toeplitz_matvec_with, MatvecPath,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::states::{app_state, bell_value_schmidt, i_d_mes_closed, mes_state};

pub const CSV_HEADER: [&str; 7] = ["d", "i_eig", "i_app", "i_mes", "residual", "iterations", "wall_ms"];

/// Dimensions above this get no eigensolve by default.
pub const DEFAULT_EIG_BUDGET: usize = 100_000;
pub const DEFAULT_ORACLE_D: usize = 16;
/// Seed for the random Schmidt states of the route-equivalence check.
pub const VERIFY_SEED: u64 = 20_060_118;

/// Every dimension that appears in the published table.
pub const TABLE_ONE_DIMS: [usize; 56] = [
    2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 150, 200, 250, 300, 350, 400,
    450, 500, 550, 600, 650, 700, 750, 800, 850, 900, 950, 1000, 1500, 2000, 2500, 3000, 3500,
    4000, 5000, 6000, 7000, 8000, 50_000, 70_000, 80_000, 90_000, 100_000, 200_000, 300_000,
    400_000, 500_000, 600_000,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Solved,
    OverBudget,
    NotConverged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub d: usize,
    pub i_eig: Option<f64>,
    pub i_app: f64,
    pub i_mes: f64,
    pub residual: Option<f64>,
    pub iterations: usize,
    pub wall_ms: f64,
    pub status: RowStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub eig_budget: usize,
    /// Record wall-clock time per row. Off by default so output is reproducible.
    pub timing: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            eig_budget: DEFAULT_EIG_BUDGET,
            timing: false,
        }
    }
}

pub fn compute_row(d: usize, opts: &TableOptions) -> Result<TableRow> {
    let started = Instant::now();
    let op = reduced_bell_coefficients(d)?;
    let i_app = bell_value_schmidt(&app_state(d)?, &op)?.value();
    let i_mes = i_d_mes_closed(d)?.value();

    let (i_eig, residual, iterations, status) = if d > opts.eig_budget {
        (None, None, 0, RowStatus::OverBudget)
    } else {
        match max_eigenpair(&op, opts.tol, opts.max_iter) {
            Ok(r) => (Some(r.eigenvalue), Some(r.residual), r.iterations, RowStatus::Solved),
            Err(Error::NotConverged { best }) => {
                (None, Some(best.residual), best.iterations, RowStatus::NotConverged)
            }
            Err(e) => return Err(e),
        }
    };
    let wall_ms = if opts.timing {
        started.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok(TableRow {
        d,
        i_eig,
        i_app,
        i_mes,
        residual,
        iterations,
        wall_ms,
        status,
    })
}

/// Rows are computed in parallel and returned sorted by `d`.
pub fn compute_table(d_list: &[usize], opts: &TableOptions) -> Result<Vec<TableRow>> {
    let mut rows = d_list
        .par_iter()
        .map(|&d| compute_row(d, opts))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.d);
    Ok(rows)
}

/// Plain decimal with `digits` significant digits; scientific notation only
/// for magnitudes where plain decimal would be unreadable.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn opt_field(x: Option<f64>) -> String {
    x.map(|v| format_significant(v, 10)).unwrap_or_default()
}

pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            opt_field(r.i_eig),
            format_significant(r.i_app, 10),
            format_significant(r.i_mes, 10),
            opt_field(r.residual),
            r.iterations.to_string(),
            format_significant(r.wall_ms, 10),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table_csv<R: Read>(input: R) -> Result<Vec<TableRow>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header_line = 1;
    let headers = reader.headers().map_err(|e| Error::Parse {
        line: header_line,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse {
            line: header_line,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |field: &str, value: &str| Error::Parse {
            line,
            message: format!("invalid {field} value {value:?}"),
        };
        let real = |i: usize| -> Result<f64> {
            record[i].trim().parse::<f64>().map_err(|_| bad(CSV_HEADER[i], &record[i]))
        };
        let optional = |i: usize| -> Result<Option<f64>> {
            if record[i].trim().is_empty() {
                Ok(None)
            } else {
                real(i).map(Some)
            }
        };
        let d = record[0].trim().parse::<usize>().map_err(|_| bad("d", &record[0]))?;
        let iterations = record[5].trim().parse::<usize>().map_err(|_| bad("iterations", &record[5]))?;
        let i_eig = optional(1)?;
        rows.push(TableRow {
            d,
            i_eig,
            i_app: real(2)?,
            i_mes: real(3)?,
            residual: optional(4)?,
            iterations,
            wall_ms: real(6)?,
            status: if i_eig.is_some() {
                RowStatus::Solved
            } else {
                RowStatus::OverBudget
            },
        });
    }
    Ok(rows)
}

/// Fits `A - B d^-p` to the rows that carry an eigenvalue.
pub fn fit_rows(rows: &[TableRow]) -> Result<FitModel> {
    let points: Vec<(usize, f64)> = rows.iter().filter_map(|r| r.i_eig.map(|v| (r.d, v))).collect();
    if points.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 rows with i_eig, found {}",
            points.len()
        )));
    }
    fit_power_law(&points)
}

pub fn fit_json(model: &FitModel) -> String {
    format!(
        "{{\"A\": {}, \"B\": {}, \"p\": {}, \"rms_residual\": {}}}",
        model.a, model.b, model.p, model.rms_residual
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    fn push(&mut self, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            deviation,
            tolerance,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub d_max_oracle: usize,
    /// Added to `B_1` of the operator used by the operator route. Zero in
    /// normal runs; nonzero values exercise the failure path.
    pub perturbation: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            d_max_oracle: DEFAULT_ORACLE_D,
            perturbation: 0.0,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    max_abs_diff(a, b) / scale
}

/// A normalized state with positive real Schmidt coefficients drawn from `rng`.
pub fn random_schmidt_state(d: usize, rng: &mut impl Rng) -> SchmidtState {
    let raw: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 1e-3).collect();
    SchmidtState::normalized(raw).expect("positive coefficients normalize")
}

fn perturbed(op: ReducedBellOperator, eps: f64) -> Result<ReducedBellOperator> {
    if eps == 0.0 {
        return Ok(op);
    }
    let mut b = op.coefficients().to_vec();
    b[1] += eps;
    ReducedBellOperator::from_coefficients(b)
}

/// Runs the cross-route and oracle-equivalence checks for `d <= d_max_oracle`.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let d_max = opts.d_max_oracle;
    if !(2..=FULL_MATRIX_MAX_D).contains(&d_max) {
        return Err(Error::Domain(format!(
            "d_max_oracle must lie in [2, {FULL_MATRIX_MAX_D}], got {d_max}"
        )));
    }
    let mut report = VerifyReport::default();

    let form_dims: Vec<usize> = (2..=256).chain([512, 1024, 2048]).collect();
    let mut dev: f64 = 0.0;
    for &d in &form_dims {
        let closed = reduced_bell_coefficients(d)?;
        let sine = reduced_bell_coefficients_sinesum(d)?;
        dev = dev.max(max_abs_diff(closed.coefficients(), sine.coefficients()));
    }
    report.push("closed form vs sine sum, d in 2..=256,512,1024,2048", dev, 1e-12);

    let (mut herm, mut leak, mut block) = (0.0f64, 0.0f64, 0.0f64);
    for d in 2..=d_max {
        let full = full_bell_matrix(d)?;
        herm = herm.max(full.hermiticity_defect());
        leak = leak.max(full.off_block_magnitude());
        block = match extract_first_block(&full) {
            Ok(red) => block.max(max_abs_diff(
                red.coefficients(),
                reduced_bell_coefficients(d)?.coefficients(),
            )),
            Err(_) => f64::INFINITY,
        };
    }
    report.push(format!("full operator Hermitian, d <= {d_max}"), herm, 1e-10);
    report.push(format!("full operator block structure, d <= {d_max}"), leak, 1e-10);
    report.push(format!("first block vs closed form, d <= {d_max}"), block, 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let (mut route, mut general) = (0.0f64, 0.0f64);
    for d in 2..=d_max {
        let op = perturbed(reduced_bell_coefficients(d)?, opts.perturbation)?;
        let settings = make_optimal_settings(d)?;
        let mut states = vec![mes_state(d)?, app_state(d)?];
        states.extend((0..20).map(|_| random_schmidt_state(d, &mut rng)));
        for s in &states {
            let prob = bell_value_probabilistic(&GeneralState::from(s), &settings)?.value();
            let quad = bell_value_schmidt(s, &op)?.value();
            route = route.max((prob - quad).abs());
        }

        // a non-Schmidt state against the dense operator
        let full = full_bell_matrix(d)?;
        let raw: Vec<Complex64> = (0..d * d)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = raw.into_iter().map(|z| z / norm).collect();
        let state = GeneralState::new(d, psi.clone())?;
        let prob = bell_value_probabilistic(&state, &settings)?.value();
        general = general.max((prob - full.expectation(&psi).re).abs());
    }
    report.push(
        format!("probability route vs Schmidt quadratic form, d <= {d_max}"),
        route,
        1e-9,
    );
    report.push(
        format!("probability route vs full operator on general states, d <= {d_max}"),
        general,
        1e-9,
    );

    let mut mes_dev: f64 = 0.0;
    for d in (2..=512).chain([1024, 4096]) {
        let quad = bell_value_schmidt(&mes_state(d)?, &reduced_bell_coefficients(d)?)?.value();
        mes_dev = mes_dev.max((quad - i_d_mes_closed(d)?.value()).abs());
    }
    report.push("maximally entangled closed form vs quadratic form", mes_dev, 1e-9);

    let mut eig_dev: f64 = 0.0;
    for d in (2..=64).chain([128, 256]) {
        let op = reduced_bell_coefficients(d)?;
        let lanczos = max_eigenpair(&op, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let dense = dense_max_eigenpair(&op)?;
        eig_dev = eig_dev.max((lanczos.eigenvalue - dense.eigenvalue).abs());
    }
    report.push("Lanczos vs dense eigensolver", eig_dev, 1e-8);

    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 1);
    let (mut mv, mut ac) = (0.0f64, 0.0f64);
    for d in [512usize, 1024] {
        let op = reduced_bell_coefficients(d)?;
        let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        mv = mv.max(max_rel_diff(
            &toeplitz_matvec_with(&op, &v, MatvecPath::Direct)?,
            &toeplitz_matvec_with(&op, &v, MatvecPath::Fast)?,
        ));
        ac = ac.max(max_rel_diff(
            &autocorrelation_with(&v, MatvecPath::Direct),
            &autocorrelation_with(&v, MatvecPath::Fast),
        ));
    }
    report.push("Toeplitz product, direct vs FFT", mv, 1e-10);
    report.push("autocorrelation, direct vs FFT", ac, 1e-10);

    Ok(report)
}
