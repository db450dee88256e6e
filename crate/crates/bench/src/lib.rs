//! Shared fixtures for the benchmarks.

use mginf::{QueueModel, ServiceDistribution as D};

/// `0, step, …, end`.
pub fn grid(end: f64, step: f64) -> Vec<f64> {
    let n = (end / step).round() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

/// λ = 1 models with a closed form.
pub fn closed_form_models() -> Vec<(&'static str, QueueModel)> {
    vec![
        ("det", QueueModel::new(1.0, D::deterministic(1.0).unwrap()).unwrap()),
        ("power", QueueModel::new(1.0, D::power(3.0).unwrap()).unwrap()),
        ("exp", QueueModel::new(1.0, D::exponential(1.0).unwrap()).unwrap()),
        ("ferreira", QueueModel::new(1.0, D::ferreira(0.3, 1.0, 1.0).unwrap()).unwrap()),
    ]
}

/// λ = 1 models that need quadrature.
pub fn quadrature_models() -> Vec<(&'static str, QueueModel)> {
    vec![
        ("erlang2", QueueModel::new(1.0, D::erlang(2, 1.0).unwrap()).unwrap()),
        (
            "hyperexp",
            QueueModel::new(1.0, D::hyperexponential(vec![0.5, 0.5], vec![0.5, 1.5]).unwrap()).unwrap(),
        ),
    ]
}
