//! Bosonic occupation-number (Fock) bases and state vectors.

use std::collections::HashMap;
use std::sync::Arc;

use ndarray::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard cap on sites and particles per basis. The engine targets desk-scale
/// exact diagonalization; `(12, 12)` already means a dimension above 1.3e6.
pub const SITE_CAP: usize = 12;
pub const PARTICLE_CAP: usize = 12;

/// Occupation numbers `(n_1, ..., n_L)` of one lattice configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockState {
    occupations: Vec<u8>,
}

impl FockState {
    pub fn new(occupations: Vec<u8>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::EmptyLattice);
        }
        Ok(Self { occupations })
    }

    /// The unit-filling target `|1, 1, ..., 1>`.
    pub fn mott(sites: usize) -> Result<Self> {
        Self::new(vec![1; sites])
    }

    pub fn occupations(&self) -> &[u8] {
        &self.occupations
    }

    pub fn sites(&self) -> usize {
        self.occupations.len()
    }

    pub fn particles(&self) -> usize {
        self.occupations.iter().map(|&n| n as usize).sum()
    }

    pub fn occupation(&self, site: usize) -> u8 {
        self.occupations[site]
    }

    pub fn is_unit_filled(&self) -> bool {
        self.occupations.iter().all(|&n| n == 1)
    }
}

/// Ordered basis of all occupation configurations of `particles` bosons on
/// `sites` sites, in lexicographically descending order, with O(1) lookup in
/// both directions.
#[derive(Debug)]
pub struct FockBasis {
    sites: usize,
    particles: usize,
    states: Vec<FockState>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockBasis {
    /// Enumerate the full basis. Descending lexicographic order puts
    /// `(N, 0, ..., 0)` first, which pins every index across runs and
    /// platforms.
    pub fn new(sites: usize, particles: usize) -> Result<Arc<Self>> {
        if sites == 0 {
            return Err(Error::EmptyLattice);
        }
        if sites > SITE_CAP || particles > PARTICLE_CAP {
            return Err(Error::DimensionCap {
                sites,
                particles,
                cap: SITE_CAP,
            });
        }
        let mut states = Vec::new();
        let mut scratch = vec![0u8; sites];
        fill_descending(&mut states, &mut scratch, 0, particles);
        let index = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.occupations.clone(), k))
            .collect();
        Ok(Arc::new(Self {
            sites,
            particles,
            states,
            index,
        }))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> Result<&FockState> {
        self.states.get(index).ok_or(Error::IndexOutOfRange {
            index,
            dim: self.states.len(),
        })
    }

    pub fn index_of(&self, state: &FockState) -> Result<usize> {
        self.index
            .get(state.occupations())
            .copied()
            .ok_or_else(|| Error::StateNotInBasis(state.occupations().to_vec()))
    }

    /// Index of the Mott state, when the basis is unit filled.
    pub fn mott_index(&self) -> Result<usize> {
        self.index_of(&FockState::mott(self.sites)?)
    }

    /// Occupation of `site` in basis state `k`, as a float for operator
    /// assembly.
    pub fn occupation(&self, site: usize, k: usize) -> f64 {
        self.states[k].occupations[site] as f64
    }
}

fn fill_descending(out: &mut Vec<FockState>, scratch: &mut Vec<u8>, site: usize, remaining: usize) {
    if site + 1 == scratch.len() {
        scratch[site] = remaining as u8;
        out.push(FockState {
            occupations: scratch.clone(),
        });
        return;
    }
    for n in (0..=remaining).rev() {
        scratch[site] = n as u8;
        fill_descending(out, scratch, site + 1, remaining - n);
    }
}

/// Dimension of the unit-filling sector, `(2N)! / (2 N!^2)` for `N >= 1`,
/// equal to the number of ways to distribute `N` particles over `N` sites.
pub fn dim_unit_filling(particles: usize) -> Result<u128> {
    if particles == 0 {
        return Err(Error::InvalidConfig(
            "unit-filling dimension requires at least one particle".into(),
        ));
    }
    // (2N)!/(2 N!^2) = C(2N, N) / 2
    Ok(binomial(2 * particles, particles)? / 2)
}

/// Exact binomial coefficient with overflow detection.
pub(crate) fn binomial(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Normalized complex amplitude vector over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Wrap and normalize an amplitude vector. Rejects zero vectors and
    /// length mismatches.
    pub fn normalized(basis: Arc<FockBasis>, mut amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::BasisMismatch);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 1e-300) {
            return Err(Error::NotNormalized { norm });
        }
        amplitudes.mapv_inplace(|z| z / norm);
        Ok(Self { basis, amplitudes })
    }

    /// The basis vector `|k>`.
    pub fn basis_state(basis: Arc<FockBasis>, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                dim: basis.dim(),
            });
        }
        let mut amplitudes = Array1::zeros(basis.dim());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    /// The basis vector for an occupation configuration.
    pub fn fock_state(basis: Arc<FockBasis>, state: &FockState) -> Result<Self> {
        let index = basis.index_of(state)?;
        Self::basis_state(basis, index)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Errors unless the norm is 1 within `tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    pub(crate) fn from_parts(basis: Arc<FockBasis>, amplitudes: Array1<Complex64>) -> Self {
        Self { basis, amplitudes }
    }

    pub(crate) fn renormalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.amplitudes.mapv_inplace(|z| z / norm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sites_two_particles_enumerates_descending() {
        let basis = FockBasis::new(2, 2).unwrap();
        let occs: Vec<&[u8]> = basis.states().iter().map(|s| s.occupations()).collect();
        assert_eq!(occs, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        assert_eq!(basis.dim(), 3);
    }

    #[test]
    fn unit_filling_seven_sites_has_dimension_1716() {
        // independent stars-and-bars count by brute recursion
        fn count(sites: usize, particles: usize) -> usize {
            if sites == 1 {
                return 1;
            }
            (0..=particles).map(|n| count(sites - 1, particles - n)).sum()
        }
        let basis = FockBasis::new(7, 7).unwrap();
        assert_eq!(basis.dim(), 1716);
        assert_eq!(count(7, 7), 1716);
    }

    #[test]
    fn single_site_basis() {
        let basis = FockBasis::new(1, 5).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.states()[0].occupations(), &[5]);
    }

    #[test]
    fn rejects_empty_lattice_and_cap() {
        assert!(matches!(FockBasis::new(0, 3), Err(Error::EmptyLattice)));
        assert!(matches!(
            FockBasis::new(13, 13),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn basis_size_matches_stars_and_bars() {
        for sites in 1..=6 {
            for particles in 0..=6 {
                let basis = FockBasis::new(sites, particles).unwrap();
                let expected = binomial(particles + sites - 1, particles).unwrap();
                assert_eq!(basis.dim() as u128, expected, "L={sites} N={particles}");
            }
        }
    }

    #[test]
    fn unit_filling_dimension_formula() {
        assert_eq!(dim_unit_filling(1).unwrap(), 1);
        assert_eq!(dim_unit_filling(3).unwrap(), 10);
        assert_eq!(dim_unit_filling(7).unwrap(), 1716);
        for n in 1..=8 {
            let basis = FockBasis::new(n, n).unwrap();
            assert_eq!(dim_unit_filling(n).unwrap(), basis.dim() as u128);
        }
    }

    #[test]
    fn unit_filling_dimension_overflow_is_signaled() {
        // (2 * 70)! overflows u128 via the running binomial product
        assert!(matches!(
            dim_unit_filling(70),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn lookup_round_trip_is_identity() {
        for sites in 1..=6 {
            for particles in 0..=6 {
                let basis = FockBasis::new(sites, particles).unwrap();
                for k in 0..basis.dim() {
                    let state = basis.state(k).unwrap().clone();
                    assert_eq!(basis.index_of(&state).unwrap(), k);
                }
            }
        }
    }

    #[test]
    fn lookup_rejects_bad_inputs() {
        let basis = FockBasis::new(2, 2).unwrap();
        let wrong_sum = FockState::new(vec![2, 1]).unwrap();
        assert!(matches!(
            basis.index_of(&wrong_sum),
            Err(Error::StateNotInBasis(_))
        ));
        assert!(matches!(
            basis.state(basis.dim()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn state_vector_normalization() {
        let basis = FockBasis::new(2, 1).unwrap();
        let v = StateVector::normalized(
            basis.clone(),
            ndarray::array![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)],
        )
        .unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v.amplitudes()[0].re - 0.6).abs() < 1e-15);
        let zero = StateVector::normalized(basis, ndarray::array![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0)
        ]);
        assert!(matches!(zero, Err(Error::NotNormalized { .. })));
    }
}
