//! Extreme eigenpair of the reduced Bell operator.
//!
//! The operator is only ever stored as its Toeplitz coefficient vector.
//! Matrix-vector products use direct summation up to [`FAST_PATH_THRESHOLD`]
//! and a circulant embedding with FFTs above it. The largest eigenpair comes
//! from Lanczos with full reorthogonalization, started from the approximate
//! state `a_j ~ 1/sqrt((j+1)(d-j))`, which already lies close to the Perron
//! vector. A dense solver is kept as the small-`d` oracle.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::operator::ReducedBellOperator;
use crate::states::app_coefficients;

/// Dimensions above this use FFT-based products.
pub const FAST_PATH_THRESHOLD: usize = 4096;
/// Default bound on the relative residual `|Bv - lv| / l`.
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;
/// Largest `d` accepted by [`dense_max_eigenpair`].
pub const DENSE_MAX_D: usize = 512;
/// Seed of the random Lanczos restart used after a breakdown.
pub const RANDOM_START_SEED: u64 = 0x5eed_c61f;

/// Which product implementation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatvecPath {
    Direct,
    Fast,
}

impl MatvecPath {
    pub fn for_dim(d: usize) -> Self {
        if d > FAST_PATH_THRESHOLD {
            MatvecPath::Fast
        } else {
            MatvecPath::Direct
        }
    }
}

fn padded_len(d: usize) -> usize {
    (2 * d).next_power_of_two()
}

struct Circulant {
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Reusable symmetric Toeplitz product `w[m] = sum_j b[|m - j|] v[j]`.
///
/// The fast path transforms the circulant embedding once at construction so
/// repeated products cost two FFTs each.
pub struct ToeplitzOperator {
    b: Vec<f64>,
    circulant: Option<Circulant>,
}

impl ToeplitzOperator {
    pub fn new(op: &ReducedBellOperator) -> Self {
        Self::with_path(op, MatvecPath::for_dim(op.dim()))
    }

    pub fn with_path(op: &ReducedBellOperator, path: MatvecPath) -> Self {
        let b = op.coefficients().to_vec();
        let circulant = match path {
            MatvecPath::Direct => None,
            MatvecPath::Fast => Some(Self::embed(&b)),
        };
        Self { b, circulant }
    }

    fn embed(b: &[f64]) -> Circulant {
        let d = b.len();
        let n = padded_len(d);
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
        spectrum[0].re = b[0];
        for r in 1..d {
            spectrum[r].re = b[r];
            spectrum[n - r].re = b[r];
        }
        forward.process(&mut spectrum);
        Circulant {
            spectrum,
            forward,
            inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn path(&self) -> MatvecPath {
        if self.circulant.is_some() {
            MatvecPath::Fast
        } else {
            MatvecPath::Direct
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let d = self.dim();
        if v.len() != d || out.len() != d {
            return Err(Error::domain(format!(
                "vector length {} does not match operator dimension {d}",
                v.len()
            )));
        }
        match &self.circulant {
            None => {
                for (m, slot) in out.iter_mut().enumerate() {
                    // split at the diagonal so the offsets index b without abs_diff
                    let below: f64 = v[..m].iter().enumerate().map(|(j, x)| self.b[m - j] * x).sum();
                    let above: f64 = v[m..].iter().enumerate().map(|(r, x)| self.b[r] * x).sum();
                    *slot = below + above;
                }
            }
            Some(c) => {
                let n = c.spectrum.len();
                let mut buf: Vec<Complex64> = v
                    .iter()
                    .map(|&x| Complex64::new(x, 0.0))
                    .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
                    .take(n)
                    .collect();
                c.forward.process(&mut buf);
                for (z, s) in buf.iter_mut().zip(&c.spectrum) {
                    *z *= s;
                }
                c.inverse.process(&mut buf);
                let scale = 1.0 / n as f64;
                for (slot, z) in out.iter_mut().zip(&buf) {
                    *slot = z.re * scale;
                }
            }
        }
        Ok(())
    }
}

/// One-shot product with the path picked by dimension.
pub fn toeplitz_matvec(op: &ReducedBellOperator, v: &[f64]) -> Result<Vec<f64>> {
    ToeplitzOperator::new(op).apply(v)
}

pub fn toeplitz_matvec_with(op: &ReducedBellOperator, v: &[f64], path: MatvecPath) -> Result<Vec<f64>> {
    ToeplitzOperator::with_path(op, path).apply(v)
}

/// `c[r] = 2 sum_{m=0}^{d-1-r} v[m] v[m+r]`, the overlap sums that contract
/// against the Toeplitz coefficients in `<psi|B|psi>`.
pub fn autocorrelation(v: &[f64]) -> Vec<f64> {
    autocorrelation_with(v, MatvecPath::for_dim(v.len()))
}

pub fn autocorrelation_with(v: &[f64], path: MatvecPath) -> Vec<f64> {
    let d = v.len();
    match path {
        MatvecPath::Direct => (0..d)
            .map(|r| 2.0 * v[..d - r].iter().zip(&v[r..]).map(|(a, b)| a * b).sum::<f64>())
            .collect(),
        MatvecPath::Fast => {
            if d == 0 {
                return Vec::new();
            }
            let n = padded_len(d);
            let mut planner = FftPlanner::<f64>::new();
            let mut buf: Vec<Complex64> = v
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
                .take(n)
                .collect();
            planner.plan_fft_forward(n).process(&mut buf);
            for z in buf.iter_mut() {
                *z = Complex64::new(z.norm_sqr(), 0.0);
            }
            planner.plan_fft_inverse(n).process(&mut buf);
            let scale = 2.0 / n as f64;
            buf[..d].iter().map(|z| z.re * scale).collect()
        }
    }
}

/// Largest eigenpair of the reduced operator.
///
/// `residual` is the absolute `|Bv - lv|_2`; convergence is judged on
/// `residual / eigenvalue`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl EigenResult {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.eigenvalue.abs()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orient_positive(v: &mut [f64]) {
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Two passes of classical Gram-Schmidt against the whole basis.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn residual_of(op: &ToeplitzOperator, v: &[f64], lambda: f64) -> Result<f64> {
    let bv = op.apply(v)?;
    Ok(bv.iter().zip(v).map(|(x, y)| (x - lambda * y).powi(2)).sum::<f64>().sqrt())
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut v: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    reorthogonalize(&mut v, basis);
    let n = norm(&v);
    (n > 1e-8).then(|| v.into_iter().map(|x| x / n).collect())
}

pub fn max_eigenpair(op: &ReducedBellOperator, tol: f64, max_iter: usize) -> Result<EigenResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be at least 1"));
    }
    let d = op.dim();
    let matvec = ToeplitzOperator::new(op);

    let start = app_coefficients(d);
    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut rng: Option<ChaCha8Rng> = None;
    let mut best: Option<EigenResult> = None;
    let mut w = vec![0.0; d];

    for iteration in 1..=max_iter {
        let q = basis.last().expect("basis is never empty");
        matvec.apply_into(q, &mut w)?;
        alphas.push(dot(q, &w));
        reorthogonalize(&mut w, &basis);

        let k = alphas.len();
        let tri = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alphas[i]
            } else if i.abs_diff(j) == 1 {
                betas[i.min(j)]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let top = eig.eigenvalues.imax();
        let theta = eig.eigenvalues[top];
        let y = eig.eigenvectors.column(top);

        let beta = norm(&w);
        let estimate = beta * y[k - 1].abs();
        let exhausted = basis.len() == d;
        if estimate <= tol * theta.abs() || exhausted || iteration == max_iter || beta < 1e-12 * theta.abs() {
            let mut v = vec![0.0; d];
            for (coef, q) in y.iter().zip(&basis) {
                v.iter_mut().zip(q).for_each(|(x, qi)| *x += coef * qi);
            }
            let n = norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            orient_positive(&mut v);
            let residual = residual_of(&matvec, &v, theta)?;
            let candidate = EigenResult {
                eigenvalue: theta,
                eigenvector: v,
                residual,
                iterations: iteration,
            };
            let converged = candidate.relative_residual() <= tol;
            if best.as_ref().is_none_or(|b| candidate.residual < b.residual) {
                best = Some(candidate);
            }
            if converged || exhausted {
                break;
            }
        }

        if beta < 1e-12 * theta.abs().max(1.0) {
            // invariant subspace found without convergence: continue from a
            // fresh deterministic vector orthogonal to the current basis
            let rng = rng.get_or_insert_with(|| ChaCha8Rng::seed_from_u64(RANDOM_START_SEED));
            match random_unit(d, rng, &basis) {
                Some(next) => {
                    betas.push(0.0);
                    basis.push(next);
                }
                None => break,
            }
        } else {
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
    }

    let best = best.expect("at least one Ritz pair is evaluated");
    if best.relative_residual() <= tol {
        Ok(best)
    } else {
        Err(Error::NotConverged { best: Box::new(best) })
    }
}

/// Convenience wrapper with [`DEFAULT_TOL`] and [`DEFAULT_MAX_ITER`].
pub fn max_eigenpair_default(op: &ReducedBellOperator) -> Result<EigenResult> {
    max_eigenpair(op, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Full dense symmetric eigendecomposition; the oracle for [`max_eigenpair`].
pub fn dense_max_eigenpair(op: &ReducedBellOperator) -> Result<EigenResult> {
    let d = op.dim();
    if d > DENSE_MAX_D {
        return Err(Error::Size {
            d,
            limit: DENSE_MAX_D,
            what: "the dense eigensolver",
        });
    }
    let eig = SymmetricEigen::new(op.to_dense());
    let top = eig.eigenvalues.imax();
    let eigenvalue = eig.eigenvalues[top];
    let mut eigenvector: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    orient_positive(&mut eigenvector);
    let residual = residual_of(&ToeplitzOperator::with_path(op, MatvecPath::Direct), &eigenvector, eigenvalue)?;
    Ok(EigenResult {
        eigenvalue,
        eigenvector,
        residual,
        iterations: 0,
    })
}
