//! The CGLMP Bell operator under the optimal settings.
//!
//! The full operator acts on `d^2` dimensions. A root-of-unity sum forces every
//! element with `(j - m) != (j' - m') (mod d)` to vanish, so the operator splits
//! into `d` decoupled blocks. The block on `span{|00>, |11>, ...}` is a real
//! symmetric Toeplitz matrix with coefficients
//!
//! ```text
//! B_0 = 0,   B_r = 2 / ((d - 1) cos(pi r / 2d))   for 1 <= r <= d - 1
//! ```
//!
//! Large-`d` code only ever holds the coefficient vector; [`FullBellMatrix`]
//! is a dense validation artifact capped at [`FULL_MATRIX_MAX_D`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qudit::check_dimension;

/// Largest `d` for which the dense `d^2 x d^2` operator may be built.
pub const FULL_MATRIX_MAX_D: usize = 64;

/// Tolerance used when reading the first block out of the full operator.
pub const BLOCK_TOLERANCE: f64 = 1e-10;

/// Upper summation index `floor(d/2 - 1)` of the CGLMP weight sums.
pub fn ell(d: usize) -> usize {
    (d / 2).saturating_sub(1)
}

fn weight(k: usize, d: usize) -> f64 {
    1.0 - 2.0 * k as f64 / (d as f64 - 1.0)
}

/// Coefficients `B_0..B_{d-1}` of the reduced (first-block) Bell operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedBellOperator {
    b: Vec<f64>,
}

impl ReducedBellOperator {
    /// Accepts any finite, nonnegative coefficient vector with `B_0 = 0`.
    pub fn from_coefficients(b: Vec<f64>) -> Result<Self> {
        check_dimension(b.len())?;
        if b[0] != 0.0 {
            return Err(Error::Structure(format!("B_0 must vanish, got {}", b[0])));
        }
        if let Some((r, &v)) = b.iter().enumerate().skip(1).find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Structure(format!("B_{r} = {v} is not positive")));
        }
        Ok(Self { b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.b
    }

    /// Coefficient at offset `r`, i.e. the `(m, m + r)` matrix element.
    pub fn coefficient(&self, r: usize) -> f64 {
        self.b[r]
    }

    /// Materializes the `d x d` matrix. Only for small-`d` oracles.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |m, j| self.b[m.abs_diff(j)])
    }
}

pub fn reduced_bell_coefficients(d: usize) -> Result<ReducedBellOperator> {
    check_dimension(d)?;
    let df = d as f64;
    let scale = 2.0 / (df - 1.0);
    let b = (0..d)
        .map(|r| {
            if r == 0 {
                0.0
            } else {
                scale / (PI * r as f64 / (2.0 * df)).cos()
            }
        })
        .collect();
    Ok(ReducedBellOperator { b })
}

/// The same coefficients from the weighted sine sum
/// `B_r = (8/d) sin(pi r / 2d) sum_k (1 - 2k/(d-1)) sin(2 pi (k + 1/2) r / d)`.
pub fn reduced_bell_coefficients_sinesum(d: usize) -> Result<ReducedBellOperator> {
    check_dimension(d)?;
    let df = d as f64;
    let b = (0..d)
        .map(|r| {
            let rf = r as f64;
            let sum: f64 = (0..=ell(d))
                .map(|k| weight(k, d) * (2.0 * PI * (k as f64 + 0.5) * rf / df).sin())
                .sum();
            8.0 / df * (PI * rf / (2.0 * df)).sin() * sum
        })
        .collect();
    Ok(ReducedBellOperator { b })
}

/// Dense Bell operator, rows `(m, m')` and columns `(j, j')` flattened as
/// `m * d + m'`.
#[derive(Clone, Debug)]
pub struct FullBellMatrix {
    d: usize,
    entries: DMatrix<Complex64>,
}

impl FullBellMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, m: usize, mp: usize, j: usize, jp: usize) -> Complex64 {
        self.entries[(m * self.d + mp, j * self.d + jp)]
    }

    /// Largest elementwise `|B - B^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                let diff = self.entries[(r, c)] - self.entries[(c, r)].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    /// Largest `|B_{mm',jj'}|` among elements outside the shifted-diagonal blocks.
    pub fn off_block_magnitude(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for mp in 0..d {
                for j in 0..d {
                    for jp in 0..d {
                        let shift = (j + d - m) % d;
                        let shift_p = (jp + d - mp) % d;
                        if shift != shift_p {
                            worst = worst.max(self.get(m, mp, j, jp).norm());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Expectation value `<psi| B |psi>` for a vector in the flattened basis.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let v = nalgebra::DVector::from_column_slice(psi);
        (v.adjoint() * &self.entries * &v)[(0, 0)]
    }
}

/// Element `B_{mm',jj'}` as a function of `x = j - m` and `y = j' - m'`,
/// without the root-of-unity prefactor.
fn brace_term(d: usize, x: i64, y: i64) -> Complex64 {
    let df = d as f64;
    let (xf, yf) = (x as f64, y as f64);
    let e = |angle: f64| Complex64::from_polar(1.0, angle);
    let step = 2.0 * PI / df;
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut s3 = Complex64::new(0.0, 0.0);
    let mut s4 = Complex64::new(0.0, 0.0);
    for k in 0..=ell(d) {
        let w = weight(k, d);
        let kf = k as f64;
        s1 += w * (e(step * kf * xf) - e(-step * (kf + 1.0) * yf));
        s2 += w * (e(-step * kf * yf) - e(step * (kf + 1.0) * xf));
        s3 += w * (e(-step * (kf + 1.0) * yf) - e(step * kf * xf));
        s4 += w * (e(step * kf * xf) - e(-step * (kf + 1.0) * yf));
    }
    let half = PI / (2.0 * df);
    e(half * yf) * s1
        + e(-half * yf) * s2
        + e(PI / df * xf + half * yf) * s3
        + e(PI / df * xf - half * yf) * s4
}

/// Builds the full operator element by element, evaluating the
/// root-of-unity sum over `l` literally rather than assuming the delta.
pub fn full_bell_matrix(d: usize) -> Result<FullBellMatrix> {
    check_dimension(d)?;
    if d > FULL_MATRIX_MAX_D {
        return Err(Error::Size {
            d,
            limit: FULL_MATRIX_MAX_D,
            what: "the dense Bell operator",
        });
    }
    let di = d as i64;
    let span = 2 * d - 1;
    let offset = |x: i64| (x + di - 1) as usize;

    // prefactor depends on (x - y) mod d
    let roots: Vec<Complex64> = (0..d)
        .map(|n| {
            (0..d)
                .map(|l| Complex64::from_polar(1.0, 2.0 * PI * ((n * l) % d) as f64 / d as f64))
                .sum()
        })
        .collect();

    let mut braces = vec![Complex64::new(0.0, 0.0); span * span];
    for x in -(di - 1)..di {
        for y in -(di - 1)..di {
            braces[offset(x) * span + offset(y)] = brace_term(d, x, y);
        }
    }

    let scale = 1.0 / (d * d) as f64;
    let n = d * d;
    let entries = DMatrix::from_fn(n, n, |row, col| {
        let (m, mp) = ((row / d) as i64, (row % d) as i64);
        let (j, jp) = ((col / d) as i64, (col % d) as i64);
        let (x, y) = (j - m, jp - mp);
        let root = roots[(x - y).rem_euclid(di) as usize];
        root * braces[offset(x) * span + offset(y)] * scale
    });
    Ok(FullBellMatrix { d, entries })
}

/// Reads the `{|jj>}` block out of the full operator and checks that it is a
/// real symmetric Toeplitz matrix.
pub fn extract_first_block(full: &FullBellMatrix) -> Result<ReducedBellOperator> {
    let d = full.dim();
    let block = |m: usize, j: usize| full.get(m, m, j, j);
    let b: Vec<f64> = (0..d).map(|r| block(0, r).re).collect();
    for m in 0..d {
        for j in 0..d {
            let z = block(m, j);
            if z.im.abs() > BLOCK_TOLERANCE {
                return Err(Error::Structure(format!(
                    "block element ({m}, {j}) has imaginary part {}",
                    z.im
                )));
            }
            let expected = b[m.abs_diff(j)];
            if (z.re - expected).abs() > BLOCK_TOLERANCE {
                return Err(Error::Structure(format!(
                    "block element ({m}, {j}) = {} breaks Toeplitz symmetry (expected {expected})",
                    z.re
                )));
            }
        }
    }
    let mut b = b;
    if b[0].abs() > BLOCK_TOLERANCE {
        return Err(Error::Structure(format!("diagonal element {} is not zero", b[0])));
    }
    b[0] = 0.0;
    ReducedBellOperator::from_coefficients(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn ell_values() {
        assert_eq!(ell(2), 0);
        assert_eq!(ell(3), 0);
        assert_eq!(ell(4), 1);
        assert_eq!(ell(5), 1);
        assert_eq!(ell(9), 3);
    }

    #[test]
    fn closed_form_small_d() {
        let b3 = reduced_bell_coefficients(3).unwrap();
        assert_close(b3.coefficients(), &[0.0, 2.0 * 3f64.sqrt() / 3.0, 2.0], 1e-14);

        let b4 = reduced_bell_coefficients(4).unwrap();
        let expected = [
            0.0,
            2.0 * (4.0 - 2.0 * SQRT_2).sqrt() / 3.0,
            2.0 * SQRT_2 / 3.0,
            2.0 * (4.0 + 2.0 * SQRT_2).sqrt() / 3.0,
        ];
        assert_close(b4.coefficients(), &expected, 1e-14);

        let b2 = reduced_bell_coefficients(2).unwrap();
        assert_close(b2.coefficients(), &[0.0, 2.0 * SQRT_2], 1e-14);
        assert!(reduced_bell_coefficients(1).is_err());
    }

    #[test]
    fn sine_sum_examples() {
        let s3 = reduced_bell_coefficients_sinesum(3).unwrap();
        assert!((s3.coefficient(2) - 2.0).abs() < 1e-14);
        let s2 = reduced_bell_coefficients_sinesum(2).unwrap();
        assert!((s2.coefficient(1) - 2.0 * SQRT_2).abs() < 1e-14);
        let s5 = reduced_bell_coefficients_sinesum(5).unwrap();
        assert_close(
            s5.coefficients(),
            reduced_bell_coefficients(5).unwrap().coefficients(),
            1e-12,
        );
    }

    #[test]
    fn coefficients_positive_off_diagonal() {
        for d in 2..200 {
            let op = reduced_bell_coefficients(d).unwrap();
            assert_eq!(op.coefficient(0), 0.0);
            assert!(op.coefficients()[1..].iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn tail_ratios_approach_harmonic() {
        for d in [512usize, 1000, 2048, 5000] {
            let op = reduced_bell_coefficients(d).unwrap();
            let last = op.coefficient(d - 1);
            for j in 1..=8 {
                let ratio = op.coefficient(d - j) / last;
                assert!((ratio - 1.0 / j as f64).abs() < 5.0 / d as f64);
            }
        }
    }

    #[test]
    fn last_coefficient_decreases_to_four_over_pi() {
        let limit = 4.0 / PI;
        let mut prev = f64::INFINITY;
        for d in (2..5000).step_by(7) {
            let last = reduced_bell_coefficients(d).unwrap().coefficient(d - 1);
            let gap = last - limit;
            assert!(gap > 0.0 && gap < 4.0 / d as f64, "d = {d}, gap = {gap}");
            assert!(last < prev);
            prev = last;
        }
    }

    #[test]
    fn full_matrix_d2_block() {
        let f = full_bell_matrix(2).unwrap();
        let b = f.get(0, 0, 1, 1);
        assert!((b.re - 2.0 * SQRT_2).abs() < 1e-12 && b.im.abs() < 1e-12);
        assert!(f.get(0, 0, 0, 0).norm() < 1e-12);
        assert!(f.get(1, 1, 1, 1).norm() < 1e-12);
        assert!((f.get(1, 1, 0, 0).re - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn full_matrix_d3_element() {
        let f = full_bell_matrix(3).unwrap();
        let z = f.get(0, 0, 1, 1);
        assert!((z.re - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn full_matrix_structure() {
        for d in 2..=8 {
            let f = full_bell_matrix(d).unwrap();
            assert!(f.hermiticity_defect() < 1e-10, "d = {d}");
            assert!(f.off_block_magnitude() < 1e-10, "d = {d}");
        }
    }

    #[test]
    fn full_matrix_size_cap() {
        assert!(matches!(full_bell_matrix(65), Err(Error::Size { .. })));
        assert!(full_bell_matrix(1).is_err());
    }

    #[test]
    fn first_block_matches_closed_form() {
        for d in [3usize, 4, 8] {
            let red = extract_first_block(&full_bell_matrix(d).unwrap()).unwrap();
            assert_close(
                red.coefficients(),
                reduced_bell_coefficients(d).unwrap().coefficients(),
                1e-10,
            );
        }
    }

    #[test]
    fn from_coefficients_validates() {
        assert!(ReducedBellOperator::from_coefficients(vec![0.0, 1.0, 2.0]).is_ok());
        assert!(ReducedBellOperator::from_coefficients(vec![0.1, 1.0]).is_err());
        assert!(ReducedBellOperator::from_coefficients(vec![0.0, -1.0]).is_err());
        assert!(ReducedBellOperator::from_coefficients(vec![0.0]).is_err());
    }

    #[test]
    fn dense_reduced_matrix_is_symmetric_toeplitz() {
        let m = reduced_bell_coefficients(6).unwrap().to_dense();
        assert_eq!(m, m.transpose());
        assert_eq!(m[(1, 4)], m[(0, 3)]);
    }
}
