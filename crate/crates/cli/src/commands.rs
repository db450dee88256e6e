use mginf::renewal::default_grid;
use mginf::{
    bound_curve, cycle_mean, cycle_moments, envelope_premise_check, estimate_curve,
    estimate_curve_with_threads, parse_dist, renewal_curve, BoundClass, QueueModel, ServiceDistribution,
    SimulationEstimate,
};

use crate::config::{ClassFlag, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// |z| at or above this fails `compare`.
pub const Z_THRESHOLD: f64 = 3.5;

fn service(config: &RunConfig) -> Result<ServiceDistribution, CliError> {
    let spec = config
        .dist
        .as_deref()
        .ok_or_else(|| CliError::usage("--dist", "is required"))?;
    parse_dist(spec, config.lambda).map_err(|e| CliError::from_core("--dist", e))
}

fn model(config: &RunConfig) -> Result<QueueModel, CliError> {
    let lambda = config.require_lambda()?;
    let d = service(config)?;
    QueueModel::new(lambda, d).map_err(|e| CliError::from_core("--dist", e))
}

fn grid_for(config: &RunConfig, m: &QueueModel) -> Vec<f64> {
    config.grid.clone().unwrap_or_else(|| default_grid(m))
}

fn simulate_model(config: &RunConfig, m: &QueueModel, grid: &[f64]) -> Result<SimulationEstimate, CliError> {
    let est = match config.threads {
        Some(n) => estimate_curve_with_threads(m, grid, config.reps, config.seed, n),
        None => estimate_curve(m, grid, config.reps, config.seed),
    };
    est.map_err(|e| CliError::from_core("--reps", e))
}

pub fn eval(config: &RunConfig) -> Result<Table, CliError> {
    let m = model(config)?;
    let grid = grid_for(config, &m);
    let curve = renewal_curve(&m, &grid, config.method, config.tolerance)
        .map_err(|e| CliError::from_core("--method", e))?;
    let mut table = Table::new(&["t", "R", "method", "abs_err"]);
    for (t, v) in curve.points() {
        table.push(vec![
            Cell::Num(t),
            Cell::Num(v.value),
            Cell::Text(v.method.to_string()),
            Cell::Num(v.abs_error),
        ]);
    }
    Ok(table)
}

pub fn simulate(config: &RunConfig) -> Result<Table, CliError> {
    let m = model(config)?;
    let grid = grid_for(config, &m);
    let est = simulate_model(config, &m, &grid)?;
    let mut table = Table::new(&["t", "mean", "stderr", "reps", "seed"]);
    for i in 0..grid.len() {
        table.push(vec![
            Cell::Num(grid[i]),
            Cell::Num(est.means[i]),
            Cell::Num(est.std_errors[i]),
            Cell::Int(est.replications),
            Cell::Int(est.seed),
        ]);
    }
    Ok(table)
}

/// Outcome of `compare`; the table is emitted either way.
pub struct Comparison {
    pub table: Table,
    pub passed: bool,
}

pub fn compare(config: &RunConfig) -> Result<Comparison, CliError> {
    let m = model(config)?;
    let grid = grid_for(config, &m);
    let curve = renewal_curve(&m, &grid, config.method, config.tolerance)
        .map_err(|e| CliError::from_core("--method", e))?;
    let est = simulate_model(config, &m, &grid)?;
    let mut table = Table::new(&["t", "R", "mean", "stderr", "z", "status"]);
    let mut max_abs_z: f64 = 0.0;
    for i in 0..grid.len() {
        let (r, mean, se) = (curve.values[i], est.means[i], est.std_errors[i]);
        let (z, status) = if se > 0.0 {
            let z = (mean - r) / se;
            (z, if z.abs() < Z_THRESHOLD { "ok" } else { "fail" })
        } else if (mean - r).abs() <= config.tolerance.abs.max(curve.abs_errors[i]) {
            // No spread and the analytic value matches the common count.
            (0.0, "exact")
        } else {
            (f64::INFINITY.copysign(mean - r), "fail")
        };
        max_abs_z = max_abs_z.max(z.abs());
        table.push(vec![
            Cell::Num(grid[i]),
            Cell::Num(r),
            Cell::Num(mean),
            Cell::Num(se),
            Cell::Num(z),
            Cell::Text(status.into()),
        ]);
    }
    let passed = max_abs_z < Z_THRESHOLD;
    table.notes.push(format!(
        "max_abs_z={} threshold={Z_THRESHOLD} result={}",
        crate::output::format_number(max_abs_z),
        if passed { "PASS" } else { "FAIL" }
    ));
    Ok(Comparison { table, passed })
}

fn require(value: Option<f64>, flag: &str, derived: impl FnOnce() -> Option<mginf::Result<f64>>) -> Result<f64, CliError> {
    match value {
        Some(v) => Ok(v),
        None => match derived() {
            Some(r) => r.map_err(|e| CliError::from_core("--dist", e)),
            None => Err(CliError::usage(flag, "is required for this class (or give --dist)")),
        },
    }
}

pub fn bounds(config: &RunConfig) -> Result<Table, CliError> {
    let lambda = config.require_lambda()?;
    let class = config
        .class
        .ok_or_else(|| CliError::usage("--class", "is required (nbue, nwue, dfr or imrl)"))?;
    let dist = match config.dist {
        Some(_) => Some(service(config)?),
        None => None,
    };
    let alpha = require(config.mean, "--mean", || dist.as_ref().map(|d| Ok(d.mean())))?;
    let bound_class = match class {
        ClassFlag::Nbue => BoundClass::Nbue { alpha },
        ClassFlag::Nwue => BoundClass::Nwue { alpha },
        ClassFlag::Dfr => BoundClass::Dfr {
            alpha,
            gamma_sq: require(config.cv2, "--cv2", || dist.as_ref().map(|d| d.cv_squared()))?,
        },
        ClassFlag::Imrl => BoundClass::Imrl {
            alpha,
            mu2: require(config.mu2, "--mu2", || dist.as_ref().map(|d| d.moment(2)))?,
            mu3: require(config.mu3, "--mu3", || dist.as_ref().map(|d| d.moment(3)))?,
        },
    };
    let envelope = bound_class.envelope().map_err(|e| CliError::from_core("--class", e))?;
    let grid = match &config.grid {
        Some(g) => g.clone(),
        None => (0..=200).map(|i| 10.0 * alpha * i as f64 / 200.0).collect(),
    };
    let values = bound_curve(lambda, bound_class, &grid, config.tolerance)
        .map_err(|e| CliError::from_core("--class", e))?;
    let label = envelope.bound_direction().to_string();
    let class_name = format!("{class:?}").to_lowercase();

    let mut table = Table::new(&["t", "bound", "label", "class"]);
    for (t, v) in grid.iter().zip(&values) {
        table.push(vec![
            Cell::Num(*t),
            Cell::Num(*v),
            Cell::Text(label.clone()),
            Cell::Text(class_name.clone()),
        ]);
    }
    let verdict = match &dist {
        Some(d) => envelope_premise_check(d, &envelope, &grid)
            .map_err(|e| CliError::from_core("--grid", e))?
            .verdict(),
        None => "bound (premise not checked: no --dist given)".to_string(),
    };
    table.notes.push(format!("{label}; {verdict}"));
    Ok(table)
}

pub fn moments(config: &RunConfig) -> Result<Table, CliError> {
    let m = model(config)?;
    let mom = cycle_moments(&m, config.tolerance).map_err(|e| CliError::from_core("--tol", e))?;
    debug_assert_eq!(mom.mean, cycle_mean(&m));
    let mut table = Table::new(&["E_Z", "E_Z2", "Var_Z", "intercept", "intercept_discrepancy"]);
    table.push(vec![
        Cell::Num(mom.mean),
        Cell::Num(mom.second_moment),
        Cell::Num(mom.variance),
        Cell::Num(mom.intercept),
        Cell::Num(mom.intercept_discrepancy),
    ]);
    Ok(table)
}
