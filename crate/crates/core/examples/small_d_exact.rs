//! Largest eigenpairs for d = 2, 3, 4 next to their closed forms.

use std::f64::consts::SQRT_2;

use cglmp::{max_eigenpair_default, reduced_bell_coefficients};

fn main() -> cglmp::Result<()> {
    let exact = [
        (2, 2.0 * SQRT_2),
        (3, 1.0 + (11.0f64 / 3.0).sqrt()),
        (
            4,
            2.0 / 3.0 * (2.0 + SQRT_2).sqrt()
                + 2.0 / 3.0 * (8.0 - 3.0 * SQRT_2 + 4.0 * (2.0 - SQRT_2).sqrt()).sqrt(),
        ),
    ];
    for (d, want) in exact {
        let r = max_eigenpair_default(&reduced_bell_coefficients(d)?)?;
        println!(
            "d = {d}: lambda = {:.12} closed form = {want:.12} |diff| = {:.1e}",
            r.eigenvalue,
            (r.eigenvalue - want).abs()
        );
        println!("        eigenvector = {:?}", r.eigenvector);
    }

    // middle Schmidt coefficient relative to the outer ones at d = 3
    let r = max_eigenpair_default(&reduced_bell_coefficients(3)?)?;
    let ratio = r.eigenvector[1] / r.eigenvector[0];
    println!("d = 3 ratio a1/a0 = {ratio:.12}, expected {:.12}", (11f64.sqrt() - 3f64.sqrt()) / 2.0);
    Ok(())
}
