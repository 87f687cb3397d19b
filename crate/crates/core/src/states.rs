//! Bell values of Schmidt states and the closed forms for the named families.
//!
//! For `|psi> = sum_j a_j |jj>` the CGLMP value under the optimal settings is
//! the quadratic form of the reduced operator,
//! `I_d = sum_{r>=1} B_r c_r` with `c_r = 2 sum_m a_m a_{m+r}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::{ell, reduced_bell_coefficients, ReducedBellOperator};
use crate::qudit::{check_dimension, BellValue, SchmidtState};
use crate::spectral::{autocorrelation, max_eigenpair_default};

pub fn bell_value_schmidt(state: &SchmidtState, op: &ReducedBellOperator) -> Result<BellValue> {
    if state.dim() != op.dim() {
        return Err(Error::domain(format!(
            "state has d = {} but operator has d = {}",
            state.dim(),
            op.dim()
        )));
    }
    let c = autocorrelation(state.coeffs());
    let value = op.coefficients()[1..].iter().zip(&c[1..]).map(|(b, c)| b * c).sum();
    Ok(BellValue(value))
}

/// Maximally entangled state, all coefficients `1/sqrt(d)`.
pub fn mes_state(d: usize) -> Result<SchmidtState> {
    check_dimension(d)?;
    Ok(SchmidtState::new_unchecked(vec![1.0 / (d as f64).sqrt(); d]))
}

/// Normalized `a_j ~ 1/sqrt((j+1)(d-j))`; also the Lanczos start vector.
pub(crate) fn app_coefficients(d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|j| 1.0 / (((j + 1) * (d - j)) as f64).sqrt()).collect();
    let norm_sqr: f64 = (0..d).map(|j| 1.0 / ((j + 1) * (d - j)) as f64).sum();
    let scale = norm_sqr.sqrt();
    raw.into_iter().map(|a| a / scale).collect()
}

/// The approximate maximally-violating state
/// `a_j = 1 / sqrt(N (j+1)(d-j))`, `N = sum_j 1/((j+1)(d-j))`.
pub fn app_state(d: usize) -> Result<SchmidtState> {
    check_dimension(d)?;
    Ok(SchmidtState::new_unchecked(app_coefficients(d)))
}

/// `I_d` of the maximally entangled state as the finite CGLMP sum.
///
/// Both sine terms are kept exactly as they appear in the sum, including the
/// negative argument of the second.
pub fn i_d_mes_closed(d: usize) -> Result<BellValue> {
    check_dimension(d)?;
    let df = d as f64;
    let denom = 2.0 * df.powi(3);
    let sum: f64 = (0..=ell(d))
        .map(|k| {
            let kf = k as f64;
            let w = 1.0 - 2.0 * kf / (df - 1.0);
            let first = 1.0 / (denom * (PI * (kf + 0.25) / df).sin().powi(2));
            let second = 1.0 / (denom * (PI * (-kf - 1.0 + 0.25) / df).sin().powi(2));
            w * (first - second)
        })
        .sum();
    Ok(BellValue(4.0 * df * sum))
}

fn series_term(k: usize) -> f64 {
    let kf = k as f64;
    1.0 / (kf + 0.25).powi(2) - 1.0 / (kf + 0.75).powi(2)
}

/// `sum_{k >= K} 1/(k + a)^2` by Euler-Maclaurin.
fn inverse_square_tail(start: usize, shift: f64) -> f64 {
    let x = start as f64 + shift;
    1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x.powi(3)) - 1.0 / (30.0 * x.powi(5))
}

/// Raw partial sum `(2/pi^2) sum_{k<terms} [1/(k+1/4)^2 - 1/(k+3/4)^2]`.
pub fn mes_limit_partial_sum(terms: usize) -> Result<BellValue> {
    if terms == 0 {
        return Err(Error::domain("the limit series needs at least one term"));
    }
    // smallest terms first
    let sum: f64 = (0..terms).rev().map(series_term).sum();
    Ok(BellValue(2.0 / (PI * PI) * sum))
}

/// `lim_{d->inf} I_d(mes) = (32/pi^2) G ~ 2.96981`, as the partial sum plus
/// an Euler-Maclaurin estimate of the remaining tail.
pub fn i_d_mes_limit(terms: usize) -> Result<BellValue> {
    let partial = mes_limit_partial_sum(terms)?.value();
    let tail = inverse_square_tail(terms, 0.25) - inverse_square_tail(terms, 0.75);
    Ok(BellValue(partial + 2.0 / (PI * PI) * tail))
}

/// Relative shortfall `(I_eig - I_app) / I_eig` of the approximate state.
pub fn app_vs_eig_error(d: usize) -> Result<f64> {
    let op = reduced_bell_coefficients(d)?;
    let eig = max_eigenpair_default(&op)?.eigenvalue;
    let app = bell_value_schmidt(&app_state(d)?, &op)?.value();
    Ok((eig - app) / eig)
}
