//! Hermitian eigendecomposition and spectral time evolution.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::{Error, Result};

/// Eigendecomposition of a Hermitian matrix, `H = V diag(values) V^dag` with
/// eigenvectors stored as columns of `vectors` and eigenvalues ascending.
#[derive(Debug, Clone)]
pub(crate) struct EigenDecomposition {
    pub values: Array1<f64>,
    pub vectors: Array2<Complex64>,
}

/// Decompose a Hermitian matrix.
///
/// LAPACK receives the row-major buffer as its own column-major matrix, i.e.
/// the transpose, which for Hermitian input is the complex conjugate. The
/// eigenvectors therefore come back conjugated and are fixed up here.
pub(crate) fn eigh(matrix: &Array2<Complex64>) -> Result<EigenDecomposition> {
    let (values, vectors) = matrix
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(e.to_string()))?;
    let vectors = vectors.mapv(|z| z.conj());
    Ok(EigenDecomposition { values, vectors })
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i H t) |amps>` in the original basis.
    pub fn evolve(&self, amps: &Array1<Complex64>, t: f64) -> Array1<Complex64> {
        let mut coeffs = self.to_eigenbasis(amps);
        for (c, &lambda) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::from_polar(1.0, -lambda * t);
        }
        self.vectors.dot(&coeffs)
    }

    /// Coordinates of `amps` in the eigenbasis, `V^dag amps`.
    pub fn to_eigenbasis(&self, amps: &Array1<Complex64>) -> Array1<Complex64> {
        let dim = self.dim();
        Array1::from_shape_fn(dim, |k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                acc += self.vectors[(i, k)].conj() * amps[i];
            }
            acc
        })
    }

    /// Normalized eigenvector of the lowest eigenvalue.
    ///
    /// Rejects a (near-)degenerate ground space and fixes the global phase so
    /// that the largest-magnitude component is real and positive, which keeps
    /// the state reproducible across LAPACK builds.
    pub fn ground_state(&self) -> Result<Array1<Complex64>> {
        let dim = self.dim();
        if dim > 1 {
            let scale = self.values[0].abs().max(1.0);
            let gap = self.values[1] - self.values[0];
            if gap <= 1e-10 * scale {
                return Err(Error::DegenerateGroundState { gap });
            }
        }
        let mut ground = self.vectors.column(0).to_owned();
        let (_, pivot) = ground.iter().enumerate().fold((0.0f64, 0usize), |best, (i, z)| {
            if z.norm_sqr() > best.0 {
                (z.norm_sqr(), i)
            } else {
                best
            }
        });
        let phase = ground[pivot] / ground[pivot].norm();
        ground.mapv_inplace(|z| z / phase);
        let norm = ground.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        ground.mapv_inplace(|z| z / norm);
        Ok(ground)
    }

    /// Spectral form of the transition amplitude
    /// `<target| exp(-i H t) |source>`.
    pub fn transition(
        &self,
        source: &Array1<Complex64>,
        target: &Array1<Complex64>,
    ) -> TransitionAmplitude {
        let c = self.to_eigenbasis(source);
        let w = self.to_eigenbasis(target);
        let weights = Array1::from_shape_fn(self.dim(), |k| w[k].conj() * c[k]);
        TransitionAmplitude {
            frequencies: self.values.clone(),
            weights,
        }
    }

    /// Like [`Self::transition`] but with a basis vector `e_target` as target.
    pub fn transition_to_index(
        &self,
        source: &Array1<Complex64>,
        target: usize,
    ) -> TransitionAmplitude {
        let c = self.to_eigenbasis(source);
        let weights = Array1::from_shape_fn(self.dim(), |k| self.vectors[(target, k)] * c[k]);
        TransitionAmplitude {
            frequencies: self.values.clone(),
            weights,
        }
    }

    /// `V diag(values) V^dag`, for invariant checks.
    pub fn reconstruct(&self) -> Array2<Complex64> {
        let dim = self.dim();
        let lam = Array2::from_shape_fn((dim, dim), |(i, j)| {
            if i == j {
                Complex64::new(self.values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let adj = Array2::from_shape_fn((dim, dim), |(i, j)| self.vectors[(j, i)].conj());
        self.vectors.dot(&lam).dot(&adj)
    }
}

/// `A(t) = sum_k w_k exp(-i lambda_k t)`, the transition amplitude between a
/// fixed source and target under one Hamiltonian.
#[derive(Debug, Clone)]
pub(crate) struct TransitionAmplitude {
    frequencies: Array1<f64>,
    weights: Array1<Complex64>,
}

impl TransitionAmplitude {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.frequencies
            .iter()
            .zip(self.weights.iter())
            .map(|(&lambda, &w)| w * Complex64::from_polar(1.0, -lambda * t))
            .sum()
    }

    /// `|A|^2` on the uniform grid `t0 + k dt`, `k = 0..n`.
    ///
    /// Uses one phasor rotation per eigenvalue per grid point instead of a
    /// sincos, which dominates the cost of the measurement-time scans.
    pub fn probability_scan(&self, t0: f64, dt: f64, n: usize) -> Vec<f64> {
        let terms = self.frequencies.len();
        let mut phase: Vec<Complex64> = (0..terms)
            .map(|k| self.weights[k] * Complex64::from_polar(1.0, -self.frequencies[k] * t0))
            .collect();
        let rot: Vec<Complex64> = self
            .frequencies
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -lambda * dt))
            .collect();
        let mut out = Vec::with_capacity(n);
        for step in 0..n {
            let amp: Complex64 = phase.iter().sum();
            out.push(amp.norm_sqr());
            if step + 1 < n {
                for (p, r) in phase.iter_mut().zip(rot.iter()) {
                    *p *= *r;
                }
            }
        }
        out
    }
}
