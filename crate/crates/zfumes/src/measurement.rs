//! Projective site-occupation measurements, the Zeno-lock admissibility
//! rule, and the bookkeeping of locked sites and decoupled sublattices.

use std::collections::BTreeMap;
use std::ops::Range;

use rand::Rng;

use crate::fock::{FockState, StateVector};
use crate::{Error, Result};

/// Locked sites with their pinned occupancies plus the maximal contiguous
/// runs of still-active sites. Locked sites and active ranges tile the
/// lattice disjointly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePartition {
    sites: usize,
    locked: BTreeMap<usize, u8>,
    active: Vec<Range<usize>>,
}

impl LatticePartition {
    /// A fully unlocked lattice.
    pub fn full(sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::EmptyLattice);
        }
        Ok(Self {
            sites,
            locked: BTreeMap::new(),
            active: vec![0..sites],
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn locked(&self) -> &BTreeMap<usize, u8> {
        &self.locked
    }

    pub fn active_sublattices(&self) -> &[Range<usize>] {
        &self.active
    }

    pub fn is_locked(&self, site: usize) -> bool {
        self.locked.contains_key(&site)
    }

    /// All sites locked; the protocol has converged.
    pub fn is_complete(&self) -> bool {
        self.active.is_empty()
    }

    /// Bitmask of locked sites, usable as a cache key for lattices that fit
    /// in a machine word.
    pub fn locked_mask(&self) -> u64 {
        debug_assert!(self.sites <= 64);
        self.locked.keys().fold(0u64, |m, &s| m | (1u64 << s))
    }
}

/// Occupations recorded by a simultaneous measurement of every site; locked
/// sites report their pinned value.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub occupations: FockState,
    pub time: f64,
}

/// Born probabilities `p_k = |amplitude_k|^2` of a normalized state.
pub fn born_probabilities(state: &StateVector) -> Result<Vec<f64>> {
    state.check_normalized(1e-9)?;
    Ok(state.amplitudes().iter().map(|z| z.norm_sqr()).collect())
}

/// Sample one Fock configuration with Born probabilities and collapse onto
/// it. Deterministic given the rng stream: a single uniform draw walks the
/// cumulative distribution in basis order.
pub fn measure_all_sites(
    state: &StateVector,
    time: f64,
    rng: &mut impl Rng,
) -> Result<(MeasurementOutcome, StateVector)> {
    let probs = born_probabilities(state)?;
    let basis = state.basis().clone();
    let draw: f64 = rng.random();
    let mut acc = 0.0;
    let mut chosen = probs.len() - 1;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            chosen = k;
            break;
        }
    }
    let outcome = MeasurementOutcome {
        occupations: basis.state(chosen)?.clone(),
        time,
    };
    let collapsed = StateVector::basis_state(basis, chosen)?;
    Ok((outcome, collapsed))
}

/// Local lock rule on one sublattice outcome `(n_1, ..., n_k)`: site `j` is
/// lockable iff `n_j = 1` and the sites to its left hold exactly `j - 1`
/// particles. Unit filling of the sublattice then makes the right side
/// match automatically.
pub(crate) fn lockable_in_slice(occupations: &[u8]) -> Vec<usize> {
    let mut lockable = Vec::new();
    let mut prefix = 0usize;
    for (j, &n) in occupations.iter().enumerate() {
        if n == 1 && prefix == j {
            lockable.push(j);
        }
        prefix += n as usize;
    }
    lockable
}

/// Sites admissible for Zeno locking given a full-lattice outcome, in
/// global indices, evaluated per active sublattice. Multiple sites per
/// measurement are allowed.
pub fn lockable_sites(outcome: &MeasurementOutcome, partition: &LatticePartition) -> Vec<usize> {
    let occ = outcome.occupations.occupations();
    let mut sites = Vec::new();
    for range in partition.active_sublattices() {
        for local in lockable_in_slice(&occ[range.start..range.end]) {
            sites.push(range.start + local);
        }
    }
    sites
}

/// Split the active sublattices at the newly locked sites. Every lock is
/// re-validated against the outcome so a partition can never leave the
/// unit-filled family.
pub fn apply_locks(
    partition: &LatticePartition,
    outcome: &MeasurementOutcome,
    sites: &[usize],
) -> Result<LatticePartition> {
    let occ = outcome.occupations.occupations();
    if occ.len() != partition.sites() {
        return Err(Error::BasisMismatch);
    }
    let mut locked = partition.locked.clone();
    for &site in sites {
        if site >= partition.sites() {
            return Err(Error::SiteOutOfRange {
                site,
                sites: partition.sites(),
            });
        }
        if locked.contains_key(&site) {
            return Err(Error::LockRejected {
                site,
                reason: "site is already locked",
            });
        }
        if occ[site] != 1 {
            return Err(Error::LockRejected {
                site,
                reason: "occupancy differs from one",
            });
        }
        locked.insert(site, occ[site]);
    }

    // rebuild active ranges as maximal runs of unlocked sites
    let mut active = Vec::new();
    let mut start = None;
    for site in 0..partition.sites() {
        if locked.contains_key(&site) {
            if let Some(s) = start.take() {
                active.push(s..site);
            }
        } else if start.is_none() {
            start = Some(site);
        }
    }
    if let Some(s) = start {
        active.push(s..partition.sites());
    }

    // unit filling must hold for every new sublattice
    for range in &active {
        let particles: usize = occ[range.start..range.end]
            .iter()
            .map(|&n| n as usize)
            .sum();
        let expected = range.end - range.start;
        if particles != expected {
            return Err(Error::NotUnitFilled {
                start: range.start,
                end: range.end,
                particles,
                expected,
            });
        }
    }

    Ok(LatticePartition {
        sites: partition.sites(),
        locked,
        active,
    })
}

/// Squared overlap `|<target|psi>|^2` of two states over the same basis.
pub fn fidelity(state: &StateVector, target: &StateVector) -> Result<f64> {
    if state.basis().dim() != target.basis().dim()
        || state.basis().sites() != target.basis().sites()
        || state.basis().particles() != target.basis().particles()
    {
        return Err(Error::BasisMismatch);
    }
    let overlap: num_complex::Complex64 = state
        .amplitudes()
        .iter()
        .zip(target.amplitudes().iter())
        .map(|(a, b)| b.conj() * a)
        .sum();
    Ok(overlap.norm_sqr())
}

/// Squared overlap with a Fock configuration.
pub fn fidelity_with_fock(state: &StateVector, target: &FockState) -> Result<f64> {
    let index = state.basis().index_of(target)?;
    Ok(state.amplitudes()[index].norm_sqr())
}
