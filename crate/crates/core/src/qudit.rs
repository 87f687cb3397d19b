//! Two-qudit states, measurement settings and the integer helpers behind the
//! CGLMP correlation functions.
//!
//! Setting indices are 1-based (`1` or `2`) so that `Q(1, 2)` reads the same
//! as the correlation function it names.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the squared norm accepted by the checked state constructors.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Mathematical modulus: the representative of `x` in `[0, d - 1]`.
pub fn mod_d(x: i64, d: i64) -> Result<i64> {
    if d <= 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "modulus must be positive",
        });
    }
    Ok(x.rem_euclid(d))
}

/// Sign function with `epsilon(0) = 1`.
pub fn epsilon(x: i64) -> i64 {
    if x >= 0 {
        1
    } else {
        -1
    }
}

/// The spin `S = (d - 1) / 2` of a `d`-level system.
pub fn spin(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            d: d as i64,
            reason: "a qudit needs at least two levels",
        });
    }
    Ok(())
}

pub(crate) fn check_setting(index: usize) -> Result<()> {
    if index == 1 || index == 2 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "setting index must be 1 or 2, got {index}"
        )))
    }
}

/// Outcome weight `f^{ij}(m, n) = S - M(eps(i - j)(m + n), d)` of the
/// correlation function `Q_ij`.
pub fn f_coeff(i: usize, j: usize, m: usize, n: usize, d: usize) -> Result<f64> {
    check_dimension(d)?;
    check_setting(i)?;
    check_setting(j)?;
    if m >= d || n >= d {
        return Err(Error::domain(format!(
            "outcomes ({m}, {n}) out of range for d = {d}"
        )));
    }
    let sign = epsilon(i as i64 - j as i64);
    let wrapped = mod_d(sign * (m + n) as i64, d as i64)?;
    Ok(spin(d) - wrapped as f64)
}

/// Pure state `sum_j a_j |jj>` with real Schmidt coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtState {
    coeffs: Vec<f64>,
}

impl SchmidtState {
    /// Validates dimension, finiteness and normalization.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        check_dimension(coeffs.len())?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("Schmidt coefficients must be finite"));
        }
        let norm_sqr: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { coeffs })
    }

    /// Rescales `coeffs` to unit norm before validating.
    pub fn normalized(coeffs: Vec<f64>) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Self::new(coeffs.into_iter().map(|c| c / norm).collect())
    }

    /// Skips all validation. Intended for hot internal paths where the
    /// coefficients are normalized by construction; callers own the invariant.
    pub fn new_unchecked(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }
}

/// Arbitrary pure two-qudit state `sum_{j,j'} alpha_{jj'} |jj'>`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralState {
    d: usize,
    coeffs: Vec<Complex64>,
}

impl GeneralState {
    pub fn new(d: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dimension(d)?;
        if coeffs.len() != d * d {
            return Err(Error::domain(format!(
                "expected {} amplitudes for d = {d}, got {}",
                d * d,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::domain("amplitudes must be finite"));
        }
        let norm_sqr: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { d, coeffs })
    }

    /// Skips validation; see [`SchmidtState::new_unchecked`].
    pub fn new_unchecked(d: usize, coeffs: Vec<Complex64>) -> Self {
        Self { d, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn amplitude(&self, j: usize, jp: usize) -> Complex64 {
        self.coeffs[j * self.d + jp]
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| c * phase).collect(),
        }
    }
}

impl From<&SchmidtState> for GeneralState {
    fn from(state: &SchmidtState) -> Self {
        let d = state.dim();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d * d];
        for (j, &a) in state.coeffs().iter().enumerate() {
            coeffs[j * d + j] = Complex64::new(a, 0.0);
        }
        Self { d, coeffs }
    }
}

/// Phase shifts in front of the two Bell multiports of each party.
///
/// `phi1`, `phi2` are Alice's settings and `psi1`, `psi2` Bob's, one phase
/// per input port.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSettings {
    d: usize,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub psi1: Vec<f64>,
    pub psi2: Vec<f64>,
}

impl MeasurementSettings {
    pub fn new(phi1: Vec<f64>, phi2: Vec<f64>, psi1: Vec<f64>, psi2: Vec<f64>) -> Result<Self> {
        let d = phi1.len();
        check_dimension(d)?;
        for v in [&phi2, &psi1, &psi2] {
            if v.len() != d {
                return Err(Error::domain("all phase vectors must have the same length"));
            }
        }
        if [&phi1, &phi2, &psi1, &psi2]
            .iter()
            .any(|v| v.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::domain("phases must be finite"));
        }
        Ok(Self {
            d,
            phi1,
            phi2,
            psi1,
            psi2,
        })
    }

    /// All four phase vectors set to zero.
    pub fn zeros(d: usize) -> Result<Self> {
        check_dimension(d)?;
        Self::new(vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Alice's phases for setting `a` (1 or 2).
    pub fn alice(&self, a: usize) -> Result<&[f64]> {
        check_setting(a)?;
        Ok(if a == 1 { &self.phi1 } else { &self.phi2 })
    }

    /// Bob's phases for setting `b` (1 or 2).
    pub fn bob(&self, b: usize) -> Result<&[f64]> {
        check_setting(b)?;
        Ok(if b == 1 { &self.psi1 } else { &self.psi2 })
    }
}

/// The settings that maximize the violation:
/// `phi1 = 0`, `phi2 = j pi / d`, `psi1 = j pi / 2d`, `psi2 = -j pi / 2d`.
pub fn make_optimal_settings(d: usize) -> Result<MeasurementSettings> {
    check_dimension(d)?;
    let df = d as f64;
    let ramp = |scale: f64| (0..d).map(|j| scale * j as f64 * PI / df).collect::<Vec<_>>();
    MeasurementSettings::new(vec![0.0; d], ramp(1.0), ramp(0.5), ramp(-0.5))
}

/// Value of the Bell expression `I_d`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BellValue(pub f64);

impl BellValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for BellValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_d_examples() {
        assert_eq!(mod_d(5, 3).unwrap(), 2);
        assert_eq!(mod_d(-1, 4).unwrap(), 3);
        assert_eq!(mod_d(0, 7).unwrap(), 0);
        assert!(matches!(mod_d(3, 0), Err(Error::InvalidDimension { .. })));
        assert!(mod_d(3, -2).is_err());
    }

    #[test]
    fn mod_d_is_periodic() {
        for d in 1..12 {
            for x in -40..40 {
                assert_eq!(mod_d(x, d).unwrap(), mod_d(x + d, d).unwrap());
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(0), 1);
        assert_eq!(epsilon(3), 1);
        assert_eq!(epsilon(-2), -1);
    }

    #[test]
    fn f_coeff_examples() {
        assert_eq!(f_coeff(1, 1, 0, 0, 3).unwrap(), 1.0);
        assert_eq!(f_coeff(2, 1, 1, 1, 3).unwrap(), -1.0);
        assert_eq!(f_coeff(1, 2, 1, 1, 3).unwrap(), 0.0);
    }

    #[test]
    fn f_coeff_rejects_bad_indices() {
        assert!(f_coeff(0, 1, 0, 0, 3).is_err());
        assert!(f_coeff(1, 3, 0, 0, 3).is_err());
        assert!(f_coeff(1, 1, 3, 0, 3).is_err());
        assert!(f_coeff(1, 1, 0, 5, 3).is_err());
    }

    #[test]
    fn f_coeff_bounded_by_spin() {
        for d in 2..10 {
            for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                for m in 0..d {
                    for n in 0..d {
                        assert!(f_coeff(i, j, m, n, d).unwrap().abs() <= spin(d));
                    }
                }
            }
        }
    }

    #[test]
    fn optimal_settings_examples() {
        let s2 = make_optimal_settings(2).unwrap();
        assert_eq!(s2.phi2, vec![0.0, PI / 2.0]);
        assert_eq!(s2.psi1, vec![0.0, PI / 4.0]);
        let s4 = make_optimal_settings(4).unwrap();
        assert!((s4.phi2[3] - 3.0 * PI / 4.0).abs() < 1e-15);
        for d in 2..20 {
            let s = make_optimal_settings(d).unwrap();
            assert!(s.phi1.iter().all(|&x| x == 0.0));
            for j in 0..d {
                assert_eq!(s.psi1[j], -s.psi2[j]);
            }
        }
        assert!(make_optimal_settings(1).is_err());
    }

    #[test]
    fn states_reject_unnormalized_input() {
        assert!(matches!(
            SchmidtState::new(vec![1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(SchmidtState::new(vec![1.0]).is_err());
        assert!(SchmidtState::new(vec![f64::NAN, 1.0]).is_err());
        let g = GeneralState::new(2, vec![Complex64::new(0.5, 0.0); 4]);
        assert!(g.is_ok());
        assert!(GeneralState::new(2, vec![Complex64::new(1.0, 0.0); 4]).is_err());
        assert!(GeneralState::new(2, vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn schmidt_embedding_is_diagonal() {
        let s = SchmidtState::normalized(vec![1.0, 2.0, 3.0]).unwrap();
        let g = GeneralState::from(&s);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.amplitude(1, 1).re, s.coeffs()[1]);
        assert_eq!(g.amplitude(0, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn settings_length_mismatch() {
        assert!(MeasurementSettings::new(vec![0.0; 3], vec![0.0; 3], vec![0.0; 2], vec![0.0; 3]).is_err());
    }
}
