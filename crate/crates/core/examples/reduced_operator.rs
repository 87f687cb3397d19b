//! Builds the full d^2 x d^2 Bell matrix, checks that it is block diagonal,
//! and compares its first block against the closed-form Toeplitz coefficients.

use cglmp::{extract_first_block, full_bell_matrix, reduced_bell_coefficients, reduced_bell_coefficients_sinesum};

fn main() -> cglmp::Result<()> {
    for d in [2, 3, 5, 8] {
        let full = full_bell_matrix(d)?;
        let block = extract_first_block(&full)?;
        let closed = reduced_bell_coefficients(d)?;
        let sines = reduced_bell_coefficients_sinesum(d)?;
        let dev = block
            .coefficients()
            .iter()
            .zip(closed.coefficients())
            .chain(sines.coefficients().iter().zip(closed.coefficients()))
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        println!(
            "d = {d}: hermiticity {:.1e}, off-block {:.1e}, max coefficient deviation {:.1e}",
            full.hermiticity_defect(),
            full.off_block_magnitude(),
            dev
        );
        println!("        b = {:?}", closed.coefficients());
    }

    // the far coefficient approaches 4/pi from above
    for d in [10, 100, 10_000] {
        let b = reduced_bell_coefficients(d)?;
        println!("d = {d:>5}: b[d-1] - 4/pi = {:.3e}", b.coefficient(d - 1) - 4.0 / std::f64::consts::PI);
    }
    Ok(())
}
