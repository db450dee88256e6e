//! Monte Carlo against the analytic curve for service laws without a closed form.

use mginf::{
    cycle_mean, cycle_moments, cycle_statistics, estimate_curve, renewal_curve, Method, QueueModel,
    ServiceDistribution as D, Tolerance,
};

fn agree(m: &QueueModel, seed: u64) {
    let grid: Vec<f64> = (0..=8).map(f64::from).collect();
    let r = renewal_curve(m, &grid, Method::Auto, Tolerance::default()).unwrap();
    let est = estimate_curve(m, &grid, 40_000, seed).unwrap();
    assert_eq!(est.means[0], 1.0);
    assert_eq!(est.std_errors[0], 0.0);
    for i in 1..grid.len() {
        let z = (est.means[i] - r.values[i]) / est.std_errors[i];
        assert!(z.abs() < 4.0, "t = {}: z = {z}", grid[i]);
    }
}

#[test]
fn erlang_curve() {
    agree(&QueueModel::new(1.0, D::erlang(2, 1.0).unwrap()).unwrap(), 11);
}

#[test]
fn hyperexponential_curve() {
    let d = D::hyperexponential(vec![0.5, 0.5], vec![0.5, 1.5]).unwrap();
    agree(&QueueModel::new(1.5, d).unwrap(), 12);
}

#[test]
fn empirical_curve() {
    let d = D::empirical(vec![0.3, 0.6, 1.0, 1.8]).unwrap();
    agree(&QueueModel::new(0.8, d).unwrap(), 13);
}

#[test]
fn ferreira_with_atom_at_zero() {
    let d = D::ferreira(-0.4, 1.0, 1.0).unwrap();
    agree(&QueueModel::new(1.0, d).unwrap(), 14);
}

#[test]
fn exponential_cycle_moments() {
    let m = QueueModel::new(1.0, D::exponential(1.0).unwrap()).unwrap();
    let exact = cycle_moments(&m, Tolerance::default()).unwrap();
    let sim = cycle_statistics(&m, 4, 5_000, 3).unwrap();
    assert_eq!(sim.cycles, 20_000);
    assert!(((sim.mean - cycle_mean(&m)) / sim.mean_std_error).abs() < 4.0);
    assert!(((sim.second_moment - exact.second_moment) / sim.second_moment_std_error).abs() < 4.0);
}
