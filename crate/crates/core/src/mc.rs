//! Discrete-event Monte Carlo estimate of the busy-cycle renewal function.
//!
//! A replication starts with an arrival at time 0 into an empty system, then
//! draws Poisson(λ) arrivals. With infinitely many servers nobody waits, so
//! the only state is the latest departure time seen so far: an arrival at `u`
//! opens a busy cycle iff `u ≥` that maximum (ties count, since the system is
//! empty at the departure instant).
//!
//! Random numbers come from ChaCha8 keyed by the 64-bit seed, with replication
//! `r` on stream `r`. Each arrival after the first consumes one uniform for
//! its interarrival gap and then one for its service time; the first arrival
//! consumes only the service uniform. Uniforms are `(k + 0.5)·2⁻⁵²` for the top
//! 52 bits `k` of a 64-bit output, so they lie strictly inside `(0, 1)`.
//!
//! Per-point counts are integers and are summed exactly, so an estimate does
//! not depend on how replications are scheduled across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::QueueModel;
use crate::error::{Error, Result};
use crate::numerics::validate_grid;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub grid: Vec<f64>,
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub replications: u64,
    pub seed: u64,
}

/// Moments of completed busy-cycle lengths, pooled over replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleStatistics {
    pub cycles: u64,
    pub mean: f64,
    pub mean_std_error: f64,
    pub second_moment: f64,
    pub second_moment_std_error: f64,
}

/// Independent stream for replication `rep`.
pub fn replication_stream(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Uniform variate strictly inside `(0, 1)`.
pub fn open_uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Drives one replication, calling `on_renewal` with every busy-cycle start
/// up to and including `horizon`, in time order. Stops early when
/// `on_renewal` returns `false`.
fn run<R: RngCore>(m: &QueueModel, horizon: f64, rng: &mut R, mut on_renewal: impl FnMut(f64) -> bool) {
    let lambda = m.lambda();
    let service = m.service();
    let mut arrival = 0.0;
    let mut last_departure = f64::NEG_INFINITY;
    loop {
        if arrival >= last_departure && !on_renewal(arrival) {
            return;
        }
        let s = service.sample_at(open_uniform(rng));
        last_departure = last_departure.max(arrival + s);
        arrival += -open_uniform(rng).ln() / lambda;
        if arrival > horizon {
            return;
        }
    }
}

/// Busy-cycle starts in `[0, t_j]` for each grid point, one replication.
pub fn simulate_cycle_counts<R: RngCore>(m: &QueueModel, grid: &[f64], rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; grid.len()];
    let Some(&horizon) = grid.last() else {
        return counts;
    };
    let mut epochs = Vec::new();
    run(m, horizon, rng, |u| {
        epochs.push(u);
        true
    });
    let mut k = 0;
    for (c, &t) in counts.iter_mut().zip(grid) {
        while k < epochs.len() && epochs[k] <= t {
            k += 1;
        }
        *c = k as u64;
    }
    counts
}

/// The first `cycles` completed busy-cycle lengths of one replication.
pub fn simulate_cycles<R: RngCore>(m: &QueueModel, cycles: usize, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(cycles);
    let mut previous: Option<f64> = None;
    run(m, f64::INFINITY, rng, |u| {
        if let Some(p) = previous {
            out.push(u - p);
        }
        previous = Some(u);
        out.len() < cycles
    });
    out
}

#[derive(Clone)]
struct Totals {
    sum: Vec<u128>,
    sum_sq: Vec<u128>,
}

impl Totals {
    fn zero(n: usize) -> Self {
        Totals {
            sum: vec![0; n],
            sum_sq: vec![0; n],
        }
    }

    fn add(mut self, counts: &[u64]) -> Self {
        for (i, &c) in counts.iter().enumerate() {
            self.sum[i] += c as u128;
            self.sum_sq[i] += (c as u128) * (c as u128);
        }
        self
    }

    fn merge(mut self, other: Totals) -> Self {
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self
    }
}

fn check_reps(reps: u64) -> Result<()> {
    if reps < 2 {
        return Err(Error::Argument(format!("need at least 2 replications, got {reps}")));
    }
    Ok(())
}

/// Sample means and standard errors of the cycle counts over `reps`
/// replications, run on the current rayon pool.
pub fn estimate_curve(m: &QueueModel, grid: &[f64], reps: u64, seed: u64) -> Result<SimulationEstimate> {
    check_reps(reps)?;
    validate_grid(grid)?;
    let n = grid.len();
    let totals = (0..reps)
        .into_par_iter()
        .fold(
            || Totals::zero(n),
            |acc, rep| {
                let mut rng = replication_stream(seed, rep);
                acc.add(&simulate_cycle_counts(m, grid, &mut rng))
            },
        )
        .reduce(|| Totals::zero(n), Totals::merge);

    let r = reps as i128;
    let mut means = Vec::with_capacity(n);
    let mut std_errors = Vec::with_capacity(n);
    for i in 0..n {
        let s1 = totals.sum[i] as i128;
        let s2 = totals.sum_sq[i] as i128;
        means.push(s1 as f64 / reps as f64);
        // n·Σx² − (Σx)² is exact in integers.
        let centered = (r * s2 - s1 * s1) as f64;
        let variance = centered / (reps as f64 * (reps - 1) as f64);
        std_errors.push((variance / reps as f64).sqrt());
    }
    Ok(SimulationEstimate {
        grid: grid.to_vec(),
        means,
        std_errors,
        replications: reps,
        seed,
    })
}

/// [`estimate_curve`] on a dedicated pool of `threads` workers.
pub fn estimate_curve_with_threads(
    m: &QueueModel,
    grid: &[f64],
    reps: u64,
    seed: u64,
    threads: usize,
) -> Result<SimulationEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Argument(format!("cannot build thread pool: {e}")))?;
    pool.install(|| estimate_curve(m, grid, reps, seed))
}

/// Moments of busy-cycle lengths from the first `cycles_per_rep` completed
/// cycles of each replication.
///
/// Stopping on a cycle count rather than a time horizon keeps the pooled
/// cycles i.i.d.; a fixed horizon would favour short cycles.
pub fn cycle_statistics(m: &QueueModel, cycles_per_rep: usize, reps: u64, seed: u64) -> Result<CycleStatistics> {
    check_reps(reps)?;
    if cycles_per_rep == 0 {
        return Err(Error::Argument("cycles_per_rep must be positive".into()));
    }
    // Per-replication power sums, combined in replication order.
    let partial: Vec<[f64; 4]> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_stream(seed, rep);
            simulate_cycles(m, cycles_per_rep, &mut rng)
                .iter()
                .fold([0.0; 4], |mut acc, &z| {
                    let z2 = z * z;
                    acc[0] += z;
                    acc[1] += z2;
                    acc[2] += z2 * z;
                    acc[3] += z2 * z2;
                    acc
                })
        })
        .collect();
    let mut sums = [0.0; 4];
    for p in &partial {
        for k in 0..4 {
            sums[k] += p[k];
        }
    }
    let count = reps * cycles_per_rep as u64;
    let n = count as f64;
    let mean = sums[0] / n;
    let second = sums[1] / n;
    let var_z = (sums[1] - n * mean * mean) / (n - 1.0);
    let var_z2 = (sums[3] - n * second * second) / (n - 1.0);
    Ok(CycleStatistics {
        cycles: count,
        mean,
        mean_std_error: (var_z / n).sqrt(),
        second_moment: second,
        second_moment_std_error: (var_z2 / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ServiceDistribution;

    fn model(lambda: f64, d: ServiceDistribution) -> QueueModel {
        QueueModel::new(lambda, d).unwrap()
    }

    #[test]
    fn uniforms_are_open() {
        struct Fixed(u64);
        impl RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.0 as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0
            }
            fn fill_bytes(&mut self, _: &mut [u8]) {}
            fn try_fill_bytes(&mut self, _: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
                Ok(())
            }
        }
        assert!(open_uniform(&mut Fixed(0)) > 0.0);
        assert!(open_uniform(&mut Fixed(u64::MAX)) < 1.0);
    }

    #[test]
    fn origin_always_counts_once() {
        let m = model(1.0, ServiceDistribution::exponential(1.0).unwrap());
        for rep in 0..50 {
            let mut rng = replication_stream(7, rep);
            let c = simulate_cycle_counts(&m, &[0.0, 1.0, 5.0], &mut rng);
            assert_eq!(c[0], 1);
            assert!(c[0] <= c[1] && c[1] <= c[2]);
        }
    }

    #[test]
    fn null_service_counts_every_arrival() {
        // Same stream, so the arrival times match a bare Poisson process.
        let m = model(2.0, ServiceDistribution::deterministic(0.0).unwrap());
        let mut rng = replication_stream(3, 0);
        let counts = simulate_cycle_counts(&m, &[10.0], &mut rng);
        let mut rng = replication_stream(3, 0);
        let mut arrivals = 1u64;
        let mut t = 0.0;
        loop {
            let _service = open_uniform(&mut rng);
            t += -open_uniform(&mut rng).ln() / 2.0;
            if t > 10.0 {
                break;
            }
            arrivals += 1;
        }
        assert_eq!(counts[0], arrivals);
    }

    #[test]
    fn renewal_rule_uses_running_maximum() {
        // A long first service masks later short ones.
        let d = ServiceDistribution::empirical(vec![0.01, 100.0]).unwrap();
        let m = model(1.0, d);
        let mut rng = replication_stream(11, 0);
        let cycles = simulate_cycles(&m, 3, &mut rng);
        for z in cycles {
            assert!(z > 0.0);
        }
    }

    #[test]
    fn two_replications_standard_error() {
        let m = model(1.0, ServiceDistribution::exponential(1.0).unwrap());
        let grid = [0.0, 2.0, 6.0];
        let est = estimate_curve(&m, &grid, 2, 99).unwrap();
        let a = simulate_cycle_counts(&m, &grid, &mut replication_stream(99, 0));
        let b = simulate_cycle_counts(&m, &grid, &mut replication_stream(99, 1));
        for i in 0..grid.len() {
            let want = (a[i] as f64 - b[i] as f64).abs() / 2.0;
            assert!((est.std_errors[i] - want).abs() < 1e-15);
            assert_eq!(est.means[i], (a[i] + b[i]) as f64 / 2.0);
        }
        assert_eq!(est.std_errors[0], 0.0);
        assert_eq!(est.means[0], 1.0);
    }

    #[test]
    fn too_few_reps() {
        let m = model(1.0, ServiceDistribution::exponential(1.0).unwrap());
        assert!(matches!(estimate_curve(&m, &[1.0], 1, 0), Err(Error::Argument(_))));
        assert!(cycle_statistics(&m, 10, 1, 0).is_err());
        assert!(cycle_statistics(&m, 0, 10, 0).is_err());
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let m = model(1.0, ServiceDistribution::power(2.0).unwrap());
        let grid = [0.0, 1.0, 3.0, 8.0];
        let one = estimate_curve_with_threads(&m, &grid, 2000, 5, 1).unwrap();
        let four = estimate_curve_with_threads(&m, &grid, 2000, 5, 4).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn means_nondecreasing() {
        let m = model(1.5, ServiceDistribution::hyperexponential(vec![0.5, 0.5], vec![0.5, 1.5]).unwrap());
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let est = estimate_curve(&m, &grid, 500, 1).unwrap();
        for w in est.means.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}
