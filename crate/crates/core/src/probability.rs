//! Joint outcome probabilities of two Bell multiports, the correlation
//! functions `Q_ij` built from them, and the CGLMP expression
//! `I_d = Q_11 + Q_12 - Q_21 + Q_22`.
//!
//! This route never touches the Bell operator, which makes it the independent
//! check on everything in [`crate::operator`] and [`crate::spectral`].
//!
//! Each party applies `U(phi)_{kl} = gamma^{kl} e^{i phi(l)} / sqrt(d)` with
//! `gamma = e^{2 pi i / d}` and then measures in the computational basis, so
//!
//! ```text
//! P(A_a = k, B_b = l) = | sum_{j,j'} alpha_{jj'} U(phi_a)_{kj} U(psi_b)_{lj'} |^2
//! ```
//!
//! The amplitude matrix is `U_a alpha U_b^T`, i.e. O(d^3) per table.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qudit::{check_setting, f_coeff, spin, BellValue, GeneralState, MeasurementSettings};

/// Entries below this are treated as rounding noise and clipped to zero.
pub const NEGATIVE_CLIP: f64 = 1e-12;
/// Allowed deviation of the table total from one.
pub const SUM_TOLERANCE: f64 = 1e-10;

/// `P(A_a = k, B_b = l)` for all outcome pairs, indexed `[k][l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointProbabilityTable {
    d: usize,
    entries: Vec<f64>,
}

impl JointProbabilityTable {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.d + l]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }
}

fn multiport(d: usize, phases: &[f64]) -> DMatrix<Complex64> {
    let step = 2.0 * PI / d as f64;
    DMatrix::from_fn(d, d, |k, j| {
        // reduce jk mod d so the phase argument stays small
        let angle = phases[j] + step * ((j * k) % d) as f64;
        Complex64::from_polar(1.0, angle)
    })
}

pub fn joint_probabilities(
    state: &GeneralState,
    settings: &MeasurementSettings,
    a: usize,
    b: usize,
) -> Result<JointProbabilityTable> {
    check_setting(a)?;
    check_setting(b)?;
    let d = state.dim();
    if settings.dim() != d {
        return Err(Error::domain(format!(
            "state has d = {d} but settings have d = {}",
            settings.dim()
        )));
    }

    let alpha = DMatrix::from_row_slice(d, d, state.coeffs());
    let ua = multiport(d, settings.alice(a)?);
    let ub = multiport(d, settings.bob(b)?);
    let amplitudes = &ua * alpha * ub.transpose();

    let scale = 1.0 / (d * d) as f64;
    let mut entries = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let p = amplitudes[(k, l)].norm_sqr() * scale;
            if p < -NEGATIVE_CLIP {
                return Err(Error::Numerical(format!("negative probability {p} at ({k}, {l})")));
            }
            entries.push(p.max(0.0));
        }
    }
    let total: f64 = entries.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Numerical(format!(
            "joint probabilities sum to {total}, expected 1"
        )));
    }
    Ok(JointProbabilityTable { d, entries })
}

/// Correlation function `Q_ij = (1/S) sum_{m,n} f^{ij}(m, n) P(A_i = m, B_j = n)`.
pub fn correlation_q(
    state: &GeneralState,
    settings: &MeasurementSettings,
    i: usize,
    j: usize,
) -> Result<f64> {
    let table = joint_probabilities(state, settings, i, j)?;
    let d = table.dim();
    let mut acc = 0.0;
    for m in 0..d {
        for n in 0..d {
            acc += f_coeff(i, j, m, n, d)? * table.get(m, n);
        }
    }
    Ok(acc / spin(d))
}

pub fn bell_value_probabilistic(
    state: &GeneralState,
    settings: &MeasurementSettings,
) -> Result<BellValue> {
    let q = |i, j| correlation_q(state, settings, i, j);
    Ok(BellValue(q(1, 1)? + q(1, 2)? - q(2, 1)? + q(2, 2)?))
}
