//! Multinomial reshuffling toy model and the closed-form scaling estimates
//! for the expected measurement counts of both protocols.
//!
//! The toy model replaces unitary evolution with complete reshuffling: after
//! every measurement each active sublattice draws a fresh configuration,
//! either from the multinomial distribution of condensed bosons or uniformly
//! over all unit-filling configurations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fock::{binomial, FockState};
use crate::measurement::{apply_locks, lockable_sites, LatticePartition, MeasurementOutcome};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToyDistribution {
    /// `L` particles dropped independently and uniformly onto `L` sites.
    Multinomial,
    /// Uniform over all `C(2L-1, L)` compositions of `L` into `L` parts.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyConfig {
    pub sites: usize,
    pub distribution: ToyDistribution,
    pub max_measurements: usize,
}

impl ToyConfig {
    pub fn new(sites: usize, distribution: ToyDistribution) -> Self {
        Self {
            sites,
            distribution,
            max_measurements: 1_000_000,
        }
    }
}

/// Measurement count and per-round lock history of one toy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyRun {
    pub measurements: usize,
    /// Newly locked sites per measurement round, global indices.
    pub lock_history: Vec<Vec<usize>>,
}

/// Natural log of `n!`.
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Probability of drawing occupations `n` when `L` particles land uniformly
/// and independently on `L` sites: `L! / (L^L prod_j n_j!)`.
pub fn multinomial_prob(occupations: &[u8]) -> Result<f64> {
    let sites = occupations.len();
    if sites == 0 {
        return Err(Error::EmptyLattice);
    }
    let particles: usize = occupations.iter().map(|&n| n as usize).sum();
    if particles != sites {
        return Err(Error::InvalidConfig(format!(
            "multinomial reshuffling assumes unit filling, got {particles} particles on {sites} sites"
        )));
    }
    if sites <= 20 {
        // exact integer arithmetic: 20^20 < u128::MAX and 20! < u128::MAX
        let mut site_fact: u128 = 1;
        for k in 2..=sites {
            site_fact *= k as u128;
        }
        let mut power: u128 = 1;
        for _ in 0..sites {
            power *= sites as u128;
        }
        let mut occ_fact: u128 = 1;
        for &n in occupations {
            for k in 2..=n as u128 {
                occ_fact *= k;
            }
        }
        Ok(site_fact as f64 / (power as f64 * occ_fact as f64))
    } else {
        let mut ln_p = ln_factorial(sites) - sites as f64 * (sites as f64).ln();
        for &n in occupations {
            ln_p -= ln_factorial(n as usize);
        }
        Ok(ln_p.exp())
    }
}

/// Draw one unit-filling configuration of `sites` sites.
pub fn sample_configuration(
    sites: usize,
    distribution: ToyDistribution,
    rng: &mut impl Rng,
) -> Result<FockState> {
    if sites == 0 {
        return Err(Error::EmptyLattice);
    }
    let occ = match distribution {
        ToyDistribution::Multinomial => {
            let mut occ = vec![0u8; sites];
            for _ in 0..sites {
                occ[rng.random_range(0..sites)] += 1;
            }
            occ
        }
        ToyDistribution::Uniform => {
            // stars and bars: choose sites-1 bar positions among 2*sites-1
            // slots by a partial Fisher-Yates shuffle
            let slots = 2 * sites - 1;
            let mut positions: Vec<usize> = (0..slots).collect();
            for k in 0..sites - 1 {
                let j = k + rng.random_range(0..slots - k);
                positions.swap(k, j);
            }
            let mut bars: Vec<usize> = positions[..sites - 1].to_vec();
            bars.sort_unstable();
            let mut occ = Vec::with_capacity(sites);
            let mut last = 0usize;
            for &b in &bars {
                occ.push((b - last) as u8);
                last = b + 1;
            }
            occ.push((slots - last) as u8);
            occ
        }
    };
    FockState::new(occ)
}

/// Iterate the toy protocol: sample every active sublattice, apply the
/// shared lock rule, split, and repeat until all sites are locked.
pub fn run_toy_zfumes(config: &ToyConfig, rng: &mut impl Rng) -> Result<ToyRun> {
    let mut partition = LatticePartition::full(config.sites)?;
    let mut lock_history = Vec::new();
    let mut measurements = 0usize;
    while !partition.is_complete() {
        if measurements >= config.max_measurements {
            return Err(Error::MeasurementBudget {
                limit: config.max_measurements,
            });
        }
        let mut occ = vec![1u8; config.sites];
        for range in partition.active_sublattices().to_vec() {
            let len = range.end - range.start;
            let draw = sample_configuration(len, config.distribution, rng)?;
            occ[range.start..range.end].copy_from_slice(draw.occupations());
        }
        measurements += 1;
        let outcome = MeasurementOutcome {
            occupations: FockState::new(occ)?,
            time: measurements as f64,
        };
        let locks = lockable_sites(&outcome, &partition);
        if !locks.is_empty() {
            partition = apply_locks(&partition, &outcome, &locks)?;
        }
        lock_history.push(locks);
    }
    Ok(ToyRun {
        measurements,
        lock_history,
    })
}

/// Geometric-trial toy of the lock-free protocol: redraw the whole lattice
/// until the all-ones configuration appears; returns the number of draws.
pub fn run_toy_fumes(
    sites: usize,
    distribution: ToyDistribution,
    max_measurements: usize,
    rng: &mut impl Rng,
) -> Result<usize> {
    for m in 1..=max_measurements {
        let draw = sample_configuration(sites, distribution, rng)?;
        if draw.is_unit_filled() {
            return Ok(m);
        }
    }
    Err(Error::MeasurementBudget {
        limit: max_measurements,
    })
}

/// Exact expected number of full-lattice draws until the all-ones outcome
/// under the multinomial distribution: `L^L / L!`.
pub fn mf_exact(sites: usize) -> f64 {
    let l = sites as f64;
    if sites <= 20 {
        let mut power: u128 = 1;
        for _ in 0..sites {
            power *= sites as u128;
        }
        let mut fact: u128 = 1;
        for k in 2..=sites {
            fact *= k as u128;
        }
        power as f64 / fact as f64
    } else {
        (l * l.ln() - ln_factorial(sites)).exp()
    }
}

/// Stirling form of [`mf_exact`]: `e^L / sqrt(2 pi L)`.
pub fn mf_asymptotic(sites: usize) -> f64 {
    let l = sites as f64;
    l.exp() / (2.0 * std::f64::consts::PI * l).sqrt()
}

/// Conservative estimate of the measurements needed by the locking
/// protocol: `16 sqrt(L / pi)`.
pub fn mz_bound(sites: usize) -> f64 {
    16.0 * (sites as f64 / std::f64::consts::PI).sqrt()
}

/// The discrete form of [`mz_bound`]: `sum_{K=1..L} 8 / sqrt(pi K)`.
pub fn mz_bound_sum(sites: usize) -> f64 {
    (1..=sites)
        .map(|k| 8.0 / (std::f64::consts::PI * k as f64).sqrt())
        .sum()
}

/// Number of unit-filling configurations of `n` sites,
/// `C(n) = (2n)! / (2 n!^2)`, with `C(0) = 1` for empty sublattices.
pub fn configuration_count(n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    match binomial(2 * n, n) {
        Ok(b) => b as f64 / 2.0,
        Err(_) => (ln_factorial(2 * n) - (2.0f64).ln() - 2.0 * ln_factorial(n)).exp(),
    }
}

fn ln_configuration_count(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        ln_factorial(2 * n) - (2.0f64).ln() - 2.0 * ln_factorial(n)
    }
}

/// Probability that site `i` (1-based, matching the counting formula) is
/// lockable under the uniform distribution over unit-filling
/// configurations: `P_i = C(i-1) C(L-i) / C(L)`.
pub fn p_lock_uniform(site: usize, sites: usize) -> Result<f64> {
    if site == 0 || site > sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    if sites <= 30 {
        Ok(configuration_count(site - 1) * configuration_count(sites - site)
            / configuration_count(sites))
    } else {
        Ok((ln_configuration_count(site - 1) + ln_configuration_count(sites - site)
            - ln_configuration_count(sites))
        .exp())
    }
}

/// Stirling approximation of [`p_lock_uniform`] for interior sites,
/// `(1/8) sqrt(L / (pi (i-1) (L-i)))`.
pub fn p_lock_uniform_stirling(site: usize, sites: usize) -> Result<f64> {
    if site < 2 || site >= sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    let (l, i) = (sites as f64, site as f64);
    Ok(0.125 * (l / (std::f64::consts::PI * (i - 1.0) * (l - i))).sqrt())
}

/// Exact average `(1/L) sum_i P_i` of the uniform lock probabilities.
pub fn p_avg_exact(sites: usize) -> Result<f64> {
    if sites < 3 {
        return Err(Error::InvalidConfig(
            "the average lock probability assumes L >= 3".into(),
        ));
    }
    let mut sum = 0.0;
    for i in 1..=sites {
        sum += p_lock_uniform(i, sites)?;
    }
    Ok(sum / sites as f64)
}

/// Three-term large-`L` expansion of the average lock probability:
/// `(1/8) sqrt(pi/L) + 1/(2L) - 1/(2 sqrt(pi) L^{3/2})`.
pub fn p_avg_expansion(sites: usize) -> f64 {
    let l = sites as f64;
    let pi = std::f64::consts::PI;
    0.125 * (pi / l).sqrt() + 0.5 / l - 0.5 / (pi.sqrt() * l.powf(1.5))
}
