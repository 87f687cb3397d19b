//! Bell value from joint outcome probabilities of the two multiports,
//! compared with the Schmidt quadratic form.

use cglmp::{
    bell_value_probabilistic, bell_value_schmidt, correlation_q, joint_probabilities,
    make_optimal_settings, max_eigenpair_default, mes_state, reduced_bell_coefficients, GeneralState,
    SchmidtState,
};

fn main() -> cglmp::Result<()> {
    let d = 3;
    let settings = make_optimal_settings(d)?;
    let mes = GeneralState::from(&mes_state(d)?);

    let table = joint_probabilities(&mes, &settings, 1, 1)?;
    println!("P(k, l) for A1 B1 on the maximally entangled state, d = {d}:");
    for k in 0..d {
        let row: Vec<String> = (0..d).map(|l| format!("{:.6}", table.get(k, l))).collect();
        println!("  {}", row.join("  "));
    }
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        println!("Q_{i}{j} = {:+.8}", correlation_q(&mes, &settings, i, j)?);
    }
    println!("I_3(mes) = {:.8}", bell_value_probabilistic(&mes, &settings)?.value());

    // the eigenvector state reaches the maximum on both routes
    let op = reduced_bell_coefficients(d)?;
    let eig = max_eigenpair_default(&op)?;
    let state = SchmidtState::normalized(eig.eigenvector)?;
    let prob = bell_value_probabilistic(&GeneralState::from(&state), &settings)?;
    let quad = bell_value_schmidt(&state, &op)?;
    println!("I_3(eig): probability route {prob}, quadratic form {quad}, lambda {:.10}", eig.eigenvalue);
    Ok(())
}
