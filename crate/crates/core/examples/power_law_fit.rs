//! Fits I(d) = A - B d^-p to computed maximal violations.

use cglmp::cli::TABLE_ONE_DIMS;
use cglmp::{fit_power_law, max_eigenpair_default, reduced_bell_coefficients};

fn main() -> cglmp::Result<()> {
    let points = TABLE_ONE_DIMS
        .iter()
        .filter(|&&d| d <= 8000)
        .map(|&d| Ok((d, max_eigenpair_default(&reduced_bell_coefficients(d)?)?.eigenvalue)))
        .collect::<cglmp::Result<Vec<_>>>()?;
    let fit = fit_power_law(&points)?;
    println!("{} points: A = {:.5}, B = {:.5}, p = {:.5}, rms = {:.2e}", points.len(), fit.a, fit.b, fit.p, fit.rms_residual);
    for d in [10, 1000, 600_000] {
        println!("  model at d = {d:>6}: {:.5}", fit.predict(d as f64));
    }
    Ok(())
}
