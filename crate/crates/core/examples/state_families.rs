//! Maximally entangled vs approximate states, and the d -> infinity limit
//! of the maximally entangled value.

use cglmp::states::mes_limit_partial_sum;
use cglmp::{app_vs_eig_error, bell_value_schmidt, i_d_mes_closed, i_d_mes_limit, mes_state, app_state, reduced_bell_coefficients};

fn main() -> cglmp::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>12}", "d", "mes closed", "mes quad", "app");
    for d in [2, 3, 4, 10, 100, 1000] {
        let op = reduced_bell_coefficients(d)?;
        println!(
            "{d:>6} {:>12.8} {:>12.8} {:>12.8}",
            i_d_mes_closed(d)?.value(),
            bell_value_schmidt(&mes_state(d)?, &op)?.value(),
            bell_value_schmidt(&app_state(d)?, &op)?.value()
        );
    }

    for terms in [1, 10, 1000] {
        println!("partial sum, {terms:>4} terms: {:.8}", mes_limit_partial_sum(terms)?.value());
    }
    println!("limit with tail correction: {:.10}", i_d_mes_limit(1_000_000)?.value());
    println!("relative gap app vs eig at d = 8000: {:.4}%", app_vs_eig_error(8000)? * 100.0);
    Ok(())
}
