// scratch calibration runner (removed before release)
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zfumes::bose_hubbard::BHParams;
use zfumes::strategy::{run_trajectory_with_cache, PropagatorCache, Protocol, StrategyConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let sites: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(7);
    let n_traj: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(200);
    let theta: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.9);
    let proto = args.get(4).map(|s| s.as_str()).unwrap_or("zfumes");
    let protocol = if proto == "fumes" { Protocol::Fumes } else { Protocol::Zfumes };

    let u: f64 = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(0.0);
    let params = BHParams::unit_filling(sites, 1.0, u).unwrap();
    let mut cfg = StrategyConfig::new(protocol);
    cfg.peak_threshold = theta;
    cfg.max_time = if protocol == Protocol::Fumes { 80.0 } else { 40.0 };
    let cache = PropagatorCache::new();

    let t0 = std::time::Instant::now();
    // warm the cache single-threaded so timing below is pure trajectory cost
    {
        let mut rng = ChaCha8Rng::seed_from_u64(u64::MAX);
        run_trajectory_with_cache(&params, &cfg, &cache, &mut rng).unwrap();
    }
    eprintln!("warmup (incl. eigh) {:.1?}", t0.elapsed());

    let t0 = std::time::Instant::now();
    let recs: Vec<_> = (0..n_traj)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            run_trajectory_with_cache(&params, &cfg, &cache, &mut rng).unwrap()
        })
        .collect();
    let dt = t0.elapsed();

    let n_grid = recs[0].fidelity.len();
    let mean: Vec<f64> = (0..n_grid)
        .map(|i| recs.iter().map(|r| r.fidelity[i]).sum::<f64>() / n_traj as f64)
        .collect();
    let t_conv = mean
        .iter()
        .position(|&f| f >= 0.99)
        .map(|i| i as f64 * recs[0].grid_step);
    let conv_frac = recs.iter().filter(|r| r.converged_at.is_some()).count() as f64 / n_traj as f64;
    let mean_m: f64 = recs
        .iter()
        .filter(|r| r.converged_at.is_some())
        .map(|r| r.measurements as f64)
        .sum::<f64>()
        / recs.iter().filter(|r| r.converged_at.is_some()).count().max(1) as f64;
    // converged fraction at a reference time
    let t_ref = if protocol == Protocol::Fumes { 70.0 } else { 18.5 };
    let frac_at_ref = recs
        .iter()
        .filter(|r| r.converged_at.map(|t| t <= t_ref).unwrap_or(false))
        .count() as f64
        / n_traj as f64;
    let mut intervals = Vec::new();
    for r in &recs {
        let mut prev = 0.0;
        for e in &r.events {
            intervals.push(e.time - prev);
            prev = e.time;
        }
    }
    let mean_interval = intervals.iter().sum::<f64>() / intervals.len().max(1) as f64;
    println!(
        "L={sites} proto={proto} theta={theta} u={u} n={n_traj}: T_conv(0.99)={t_conv:?}  conv_frac={conv_frac:.3}  frac(t<={t_ref})={frac_at_ref:.3}  E[M|conv]={mean_m:.2}  interval={mean_interval:.3}  runtime={dt:.1?}"
    );
}
