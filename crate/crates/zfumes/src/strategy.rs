//! FUMES and Z-FUMES trajectories on the Bose-Hubbard chain, plus the
//! unitary linear-ramp baseline.
//!
//! Both protocols start from the superfluid state, evolve freely, and
//! measure every site simultaneously at peaks of the deterministic success
//! probability. FUMES succeeds only when an outcome equals the Mott target;
//! Z-FUMES additionally Zeno-locks admissible sites after every measurement,
//! confining the remaining dynamics to shrinking decoupled sublattices.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bose_hubbard::{build_hamiltonian, BHParams, Propagator};
use crate::fock::{FockBasis, FockState, StateVector};
use crate::linalg::TransitionAmplitude;
use crate::measurement::{
    apply_locks, fidelity_with_fock, lockable_sites, measure_all_sites, LatticePartition,
    MeasurementOutcome,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    Fumes,
    Zfumes,
}

/// Protocol timing knobs. Times are in units of the inverse tunneling rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub protocol: Protocol,
    /// Accept the first success-probability peak at least this fraction of
    /// the best peak inside the horizon.
    pub peak_threshold: f64,
    /// Grid resolution of the deterministic peak scan.
    pub scan_step: f64,
    /// Scan horizon ahead of the current time.
    pub horizon: f64,
    /// Trajectories are censored beyond this time.
    pub max_time: f64,
    /// Ensemble-level convergence threshold on the mean fidelity.
    pub convergence_fidelity: f64,
    /// Sampling step of the recorded fidelity series; `None` disables the
    /// series for measurement-count studies.
    pub grid_step: Option<f64>,
}

impl StrategyConfig {
    pub fn new(protocol: Protocol) -> Self {
        Self {
            protocol,
            peak_threshold: 0.9,
            scan_step: 0.01,
            horizon: 10.0,
            max_time: 100.0,
            convergence_fidelity: 0.99,
            grid_step: Some(0.1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scan_step > 0.0 && self.scan_step < self.horizon && self.horizon <= self.max_time)
        {
            return Err(Error::InvalidConfig(
                "need 0 < scan_step < horizon <= max_time".into(),
            ));
        }
        if !(self.peak_threshold > 0.0 && self.peak_threshold <= 1.0) {
            return Err(Error::InvalidConfig(
                "peak threshold must lie in (0, 1]".into(),
            ));
        }
        if !(self.convergence_fidelity > 0.0 && self.convergence_fidelity <= 1.0) {
            return Err(Error::InvalidConfig(
                "convergence fidelity must lie in (0, 1]".into(),
            ));
        }
        if let Some(step) = self.grid_step {
            if !(step > 0.0) {
                return Err(Error::InvalidConfig("grid step must be positive".into()));
            }
        }
        Ok(())
    }
}

/// One simultaneous measurement: protocol time, the full-lattice outcome,
/// and the sites locked as a consequence (empty for FUMES).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub time: f64,
    pub outcome: Vec<u8>,
    pub locked: Vec<usize>,
}

/// Everything recorded along one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub events: Vec<MeasurementEvent>,
    /// Step of the fidelity grid; zero when no series was collected.
    pub grid_step: f64,
    /// Fidelity sampled on the uniform grid, held at 1 after convergence.
    pub fidelity: Vec<f64>,
    pub converged_at: Option<f64>,
    pub measurements: usize,
    /// Continuous-measurement windows that timed out without resolving.
    pub unresolved_windows: usize,
}

impl TrajectoryRecord {
    pub fn converged(&self) -> bool {
        self.converged_at.is_some()
    }
}

/// Shared store of Fock bases and exact propagators keyed by
/// `(sites, particles, J, U)`. Construction happens outside the lock, so
/// concurrent misses may build twice; both results are identical and one
/// wins the insert.
#[derive(Debug, Default)]
pub struct PropagatorCache {
    bases: Mutex<HashMap<(usize, usize), Arc<FockBasis>>>,
    propagators: Mutex<HashMap<(usize, usize, u64, u64), Arc<Propagator>>>,
}

impl PropagatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&self, sites: usize, particles: usize) -> Result<Arc<FockBasis>> {
        if let Some(b) = self.bases.lock().unwrap().get(&(sites, particles)) {
            return Ok(b.clone());
        }
        let basis = FockBasis::new(sites, particles)?;
        let mut guard = self.bases.lock().unwrap();
        Ok(guard.entry((sites, particles)).or_insert(basis).clone())
    }

    pub fn propagator(&self, params: &BHParams) -> Result<Arc<Propagator>> {
        let key = (
            params.sites,
            params.particles,
            params.tunneling.to_bits(),
            params.interaction.to_bits(),
        );
        if let Some(p) = self.propagators.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let basis = self.basis(params.sites, params.particles)?;
        let h = build_hamiltonian(params, &basis)?;
        let prop = Arc::new(Propagator::new(&h)?);
        let mut guard = self.propagators.lock().unwrap();
        Ok(guard.entry(key).or_insert(prop).clone())
    }
}

/// First qualified peak of a sampled success probability: the earliest local
/// maximum reaching `threshold_ratio` of the global maximum, falling back to
/// the global maximum itself.
pub(crate) fn select_peak(g: &[f64], threshold_ratio: f64) -> Result<usize> {
    let n = g.len();
    let (mut argmax, mut gmax) = (0usize, f64::MIN);
    for (k, &v) in g.iter().enumerate() {
        if v > gmax {
            gmax = v;
            argmax = k;
        }
    }
    if !(gmax > 1e-30) {
        return Err(Error::ZeroCoupling);
    }
    let threshold = threshold_ratio * gmax;
    for k in 0..n {
        let left_ok = k == 0 || g[k] >= g[k - 1];
        let right_ok = k + 1 == n || g[k] >= g[k + 1];
        if left_ok && right_ok && g[k] >= threshold {
            return Ok(k);
        }
    }
    Ok(argmax)
}

fn scan_length(config: &StrategyConfig) -> usize {
    (config.horizon / config.scan_step).round() as usize + 1
}

/// Product success probability of independent blocks on the scan grid.
fn product_scan(amplitudes: &[TransitionAmplitude], config: &StrategyConfig) -> Vec<f64> {
    let n = scan_length(config);
    let mut g = vec![1.0f64; n];
    for amp in amplitudes {
        for (gk, pk) in g.iter_mut().zip(amp.probability_scan(0.0, config.scan_step, n)) {
            *gk *= pk;
        }
    }
    g
}

/// Time of the next measurement: the first qualified peak of the
/// deterministic product success probability
/// `G(t) = prod_b |<target_b| psi_b(t)>|^2` over the scan horizon.
pub fn find_measurement_time(
    states: &[StateVector],
    propagators: &[Arc<Propagator>],
    targets: &[FockState],
    config: &StrategyConfig,
) -> Result<f64> {
    config.validate()?;
    if states.is_empty() || states.len() != propagators.len() || states.len() != targets.len() {
        return Err(Error::InvalidConfig(
            "states, propagators, and targets must have equal nonzero lengths".into(),
        ));
    }
    let mut amps = Vec::with_capacity(states.len());
    for ((state, prop), target) in states.iter().zip(propagators).zip(targets) {
        let target_index = prop.basis().index_of(target)?;
        amps.push(prop.transition_to_index(state, target_index));
    }
    let g = product_scan(&amps, config);
    let k = select_peak(&g, config.peak_threshold)?;
    Ok(k as f64 * config.scan_step)
}

/// Uniform-grid fidelity recorder.
pub(crate) struct GridSampler {
    step: f64,
    len: usize,
    values: Vec<f64>,
}

impl GridSampler {
    pub fn new(grid_step: Option<f64>, max_time: f64) -> Self {
        match grid_step {
            Some(step) => Self {
                step,
                len: (max_time / step + 1e-9).floor() as usize + 1,
                values: Vec::new(),
            },
            None => Self {
                step: 0.0,
                len: 0,
                values: Vec::new(),
            },
        }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Record `f(t)` for every still-unfilled grid time strictly below
    /// `t_end`.
    pub fn fill_until(&mut self, t_end: f64, mut f: impl FnMut(f64) -> f64) {
        while self.values.len() < self.len {
            let t = self.step * self.values.len() as f64;
            if t >= t_end - 1e-12 {
                break;
            }
            self.values.push(f(t));
        }
    }

    /// Record `f(t)` for every remaining grid time.
    pub fn fill_rest_with(&mut self, mut f: impl FnMut(f64) -> f64) {
        while self.values.len() < self.len {
            let t = self.step * self.values.len() as f64;
            self.values.push(f(t));
        }
    }

    pub fn fill_rest(&mut self, value: f64) {
        self.values.resize(self.len, value);
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

struct Block {
    range: Range<usize>,
    state: StateVector,
    prop: Arc<Propagator>,
    target_index: usize,
}

fn make_blocks(
    partition: &LatticePartition,
    occupations: &[u8],
    params: &BHParams,
    cache: &PropagatorCache,
) -> Result<Vec<Block>> {
    partition
        .active_sublattices()
        .iter()
        .map(|range| {
            let len = range.end - range.start;
            let sub = BHParams::new(len, len, params.tunneling, params.interaction)?;
            let prop = cache.propagator(&sub)?;
            let basis = prop.basis().clone();
            let local = FockState::new(occupations[range.start..range.end].to_vec())?;
            let state = StateVector::fock_state(basis.clone(), &local)?;
            Ok(Block {
                range: range.clone(),
                state,
                prop,
                target_index: basis.mott_index()?,
            })
        })
        .collect()
}

/// Run one trajectory with a private propagator cache.
pub fn run_trajectory(
    params: &BHParams,
    config: &StrategyConfig,
    rng: &mut impl Rng,
) -> Result<TrajectoryRecord> {
    run_trajectory_with_cache(params, config, &PropagatorCache::new(), rng)
}

/// Run one FUMES or Z-FUMES trajectory. The cache is shared across
/// trajectories of an ensemble so each sublattice Hamiltonian is
/// diagonalized once.
pub fn run_trajectory_with_cache(
    params: &BHParams,
    config: &StrategyConfig,
    cache: &PropagatorCache,
    rng: &mut impl Rng,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    if params.particles != params.sites {
        return Err(Error::InvalidConfig(
            "the Mott preparation protocols require unit filling".into(),
        ));
    }
    let superfluid_prop = cache.propagator(&BHParams {
        interaction: 0.0,
        ..*params
    })?;
    let evolve_prop = cache.propagator(params)?;
    let full_basis = superfluid_prop.basis().clone();
    let mott = FockState::mott(params.sites)?;
    let start = superfluid_prop.ground_state()?;

    let mut grid = GridSampler::new(config.grid_step, config.max_time);
    let mut events: Vec<MeasurementEvent> = Vec::new();
    let mut partition = LatticePartition::full(params.sites)?;
    let mut t = 0.0f64;

    // a unit-filled single-site lattice is already the target
    if fidelity_with_fock(&start, &mott)? >= 1.0 - 1e-9 {
        grid.fill_rest(1.0);
        return Ok(TrajectoryRecord {
            events,
            grid_step: grid.step(),
            fidelity: grid.into_values(),
            converged_at: Some(0.0),
            measurements: 0,
            unresolved_windows: 0,
        });
    }

    let mut blocks = vec![Block {
        range: 0..params.sites,
        state: start,
        prop: evolve_prop,
        target_index: full_basis.mott_index()?,
    }];

    let converged_at: Option<f64>;
    let mut measurements = 0usize;
    loop {
        let amps: Vec<TransitionAmplitude> = blocks
            .iter()
            .map(|b| b.prop.transition_to_index(&b.state, b.target_index))
            .collect();
        let g = product_scan(&amps, config);
        let peak = select_peak(&g, config.peak_threshold)?;
        let t_star = peak as f64 * config.scan_step;
        if t_star == 0.0 && !events.is_empty() {
            // a collapsed non-target product state has G(0) = 0, so this
            // branch is unreachable; bail out rather than loop forever
            return Err(Error::InvalidConfig("peak scan stalled at t = 0".into()));
        }
        let segment_start = t;
        let eval_from_scan = |tau: f64| -> f64 {
            let j = ((tau - segment_start) / config.scan_step).round() as usize;
            g[j.min(g.len() - 1)]
        };
        if t + t_star > config.max_time {
            grid.fill_rest_with(eval_from_scan);
            converged_at = None;
            break;
        }
        grid.fill_until(t + t_star, eval_from_scan);
        t += t_star;

        // simultaneous measurement of every active block
        for block in &mut blocks {
            block.state = block.prop.evolve(&block.state, t_star)?;
        }
        let mut occupations = vec![0u8; params.sites];
        for (&site, &occ) in partition.locked() {
            occupations[site] = occ;
        }
        for block in &mut blocks {
            let (local, collapsed) = measure_all_sites(&block.state, t, rng)?;
            occupations[block.range.start..block.range.end]
                .copy_from_slice(local.occupations.occupations());
            block.state = collapsed;
        }
        measurements += 1;
        let outcome = MeasurementOutcome {
            occupations: FockState::new(occupations.clone())?,
            time: t,
        };

        match config.protocol {
            Protocol::Fumes => {
                events.push(MeasurementEvent {
                    time: t,
                    outcome: occupations.clone(),
                    locked: Vec::new(),
                });
                if outcome.occupations.is_unit_filled() {
                    converged_at = Some(t);
                    grid.fill_rest(1.0);
                    break;
                }
            }
            Protocol::Zfumes => {
                let locks = lockable_sites(&outcome, &partition);
                if !locks.is_empty() {
                    partition = apply_locks(&partition, &outcome, &locks)?;
                    blocks = make_blocks(&partition, &occupations, params, cache)?;
                }
                events.push(MeasurementEvent {
                    time: t,
                    outcome: occupations.clone(),
                    locked: locks,
                });
                if partition.is_complete() {
                    converged_at = Some(t);
                    grid.fill_rest(1.0);
                    break;
                }
            }
        }

        if t >= config.max_time {
            // trajectory ends exactly on a measurement: the collapsed state
            // has zero overlap with the target
            grid.fill_rest(0.0);
            converged_at = None;
            break;
        }
    }

    Ok(TrajectoryRecord {
        events,
        grid_step: grid.step(),
        fidelity: grid.into_values(),
        converged_at,
        measurements,
        unresolved_windows: 0,
    })
}

/// Final Mott fidelity after ramping the interaction linearly from zero to
/// `u_final_over_j * J` over `total_time`, integrated as `n_steps`
/// piecewise-constant slices sampled at midpoints.
pub fn linear_ramp(
    params: &BHParams,
    total_time: f64,
    u_final_over_j: f64,
    n_steps: usize,
) -> Result<f64> {
    linear_ramp_with_cache(
        params,
        total_time,
        u_final_over_j,
        n_steps,
        &PropagatorCache::new(),
    )
}

pub fn linear_ramp_with_cache(
    params: &BHParams,
    total_time: f64,
    u_final_over_j: f64,
    n_steps: usize,
    cache: &PropagatorCache,
) -> Result<f64> {
    if total_time < 0.0 || n_steps == 0 {
        return Err(Error::InvalidConfig(
            "ramp needs a nonnegative duration and at least one step".into(),
        ));
    }
    if params.particles != params.sites {
        return Err(Error::InvalidConfig("the ramp targets unit filling".into()));
    }
    let superfluid_prop = cache.propagator(&BHParams {
        interaction: 0.0,
        ..*params
    })?;
    let mott = FockState::mott(params.sites)?;
    let mut psi = superfluid_prop.ground_state()?;
    if total_time == 0.0 {
        return fidelity_with_fock(&psi, &mott);
    }
    let dt = total_time / n_steps as f64;
    for k in 0..n_steps {
        let u = u_final_over_j * params.tunneling * (k as f64 + 0.5) / n_steps as f64;
        let prop = cache.propagator(&BHParams {
            interaction: u,
            ..*params
        })?;
        psi = prop.evolve(&psi, dt)?;
    }
    fidelity_with_fock(&psi, &mott)
}
