//! Lanczos on the reduced operator at large d, using the FFT product path.

use std::time::Instant;

use cglmp::spectral::{MatvecPath, DEFAULT_MAX_ITER, DEFAULT_TOL};
use cglmp::{app_state, bell_value_schmidt, max_eigenpair, reduced_bell_coefficients};

fn main() -> cglmp::Result<()> {
    for d in [1000, 8000, 50_000] {
        let started = Instant::now();
        let op = reduced_bell_coefficients(d)?;
        let r = max_eigenpair(&op, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let app = bell_value_schmidt(&app_state(d)?, &op)?.value();
        println!(
            "d = {d:>6} ({:?}): lambda = {:.8} in {} iterations, rel residual {:.1e}, app = {app:.8}, {:.0} ms",
            MatvecPath::for_dim(d),
            r.eigenvalue,
            r.iterations,
            r.relative_residual(),
            started.elapsed().as_secs_f64() * 1e3
        );
        let a = &r.eigenvector;
        println!("          head a1/a0 = {:.4}, a2/a0 = {:.4}", a[1] / a[0], a[2] / a[0]);
    }
    Ok(())
}
