//! The busy-cycle renewal function of the M|G|∞ queue.
//!
//! With the time origin at the start of a busy period, busy-cycle beginnings
//! form a renewal process whose renewal function is
//!
//! ```text
//! R(t) = p00(t) + λ ∫₀ᵗ p00(u) du,   p00(t) = exp(−λ ∫₀ᵗ (1 − G(v)) dv).
//! ```
//!
//! `R(0) = 1`: the busy period starting at the origin is counted. The general
//! route evaluates the integral by adaptive quadrature; deterministic, power,
//! exponential and ferreira service have dedicated closed forms (power keeps a
//! one-dimensional integral over `[0, min(t, 1)]`).
//!
//! Improper integrals are truncated at the first horizon `T = T₀·2ᵏ` where the
//! integrand bound `e^{−ρ}(e^{λ ∫_T^∞ (1−G)} − 1)` drops below `abs_tol / 10`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dist::{Law, QueueModel, ServiceDistribution};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_cumulative_with_breaks, integrate_with_breaks, truncation_horizon, validate_grid,
    Tolerance,
};
use crate::special::ein_series;

/// Evaluation strategy requested by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed form when the family has one, quadrature otherwise.
    #[default]
    Auto,
    Closed,
    Quadrature,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "closed" => Ok(Method::Closed),
            "quadrature" => Ok(Method::Quadrature),
            other => Err(Error::Argument(format!(
                "unknown method {other:?}; expected auto, closed or quadrature"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Closed => "closed",
            Method::Quadrature => "quadrature",
        })
    }
}

/// Route actually used for a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointMethod {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for PointMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointMethod::ClosedForm => "closed-form",
            PointMethod::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenewalValue {
    pub value: f64,
    pub abs_error: f64,
    pub method: PointMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenewalCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub methods: Vec<PointMethod>,
    pub abs_errors: Vec<f64>,
}

impl RenewalCurve {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, RenewalValue)> + '_ {
        (0..self.len()).map(move |i| {
            (
                self.grid[i],
                RenewalValue {
                    value: self.values[i],
                    abs_error: self.abs_errors[i],
                    method: self.methods[i],
                },
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleMoments {
    /// `E[Z]`
    pub mean: f64,
    /// `E[Z²]`
    pub second_moment: f64,
    pub variance: f64,
    /// `lim R(t) − t/E[Z] = E[Z²] / (2 E[Z]²)`
    pub intercept: f64,
    /// Absolute gap between the moment and direct routes to the intercept.
    pub intercept_discrepancy: f64,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intercept {
    /// Moment route `E[Z²]/(2E[Z]²)`.
    pub value: f64,
    /// Direct route `e^{−ρ} + λe^{−ρ} ∫₀^∞ (e^{λ ∫ᵤ^∞(1−G)} − 1) du`.
    pub direct: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementaryBounds {
    /// `p00(t) + λe^{−ρ}t`
    pub tight_lo: f64,
    /// `p00(t) + λt`
    pub tight_hi: f64,
    /// `e^{−ρ}(1 + λt)`
    pub coarse_lo: f64,
    /// `1 + λt`
    pub coarse_hi: f64,
}

impl ElementaryBounds {
    pub fn contains(&self, r: f64, slack: f64) -> bool {
        self.tight_lo - slack <= r
            && r <= self.tight_hi + slack
            && self.coarse_lo - slack <= r
            && r <= self.coarse_hi + slack
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")))
    }
}

/// `p00(t) = exp(−λ ∫₀ᵗ (1 − G))`: probability the system is empty at `t`
/// given that it was empty at 0.
pub fn emptiness_probability(m: &QueueModel, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(p00(m, t))
}

fn p00(m: &QueueModel, t: f64) -> f64 {
    (-m.lambda() * m.service().integrated_tail_at(t)).exp()
}

/// `p00(t) − e^{−ρ} = e^{−ρ}(e^{λ ∫ₜ^∞(1−G)} − 1)`, without cancellation.
fn p00_excess(m: &QueueModel, t: f64) -> f64 {
    (-m.rho()).exp() * (m.lambda() * m.service().residual_tail_at(t)).exp_m1()
}

/// Whether [`Method::Closed`] is available for this service family.
pub fn has_closed_form(d: &ServiceDistribution) -> bool {
    matches!(
        d.law(),
        Law::Deterministic { .. } | Law::Power { .. } | Law::Exponential { .. } | Law::Ferreira { .. }
    )
}

fn resolve(m: &QueueModel, method: Method) -> Result<PointMethod> {
    match method {
        Method::Quadrature => Ok(PointMethod::Quadrature),
        Method::Auto if has_closed_form(m.service()) => Ok(PointMethod::ClosedForm),
        Method::Auto => Ok(PointMethod::Quadrature),
        Method::Closed if has_closed_form(m.service()) => Ok(PointMethod::ClosedForm),
        Method::Closed => Err(Error::Unsupported(format!(
            "no closed form for {} service",
            m.service().family()
        ))),
    }
}

/// `R(t)` with its absolute error estimate (zero for exact closed forms).
pub fn renewal_value(m: &QueueModel, t: f64, method: Method, tol: Tolerance) -> Result<RenewalValue> {
    check_time(t)?;
    let curve = renewal_curve(m, &[t], method, tol)?;
    Ok(RenewalValue {
        value: curve.values[0],
        abs_error: curve.abs_errors[0],
        method: curve.methods[0],
    })
}

/// `R` on an ascending grid, in a single pass over the grid.
pub fn renewal_curve(m: &QueueModel, grid: &[f64], method: Method, tol: Tolerance) -> Result<RenewalCurve> {
    validate_grid(grid)?;
    let route = resolve(m, method)?;
    let (values, abs_errors) = match route {
        PointMethod::Quadrature => quadrature_curve(m, grid, tol)?,
        PointMethod::ClosedForm => closed_curve(m, grid, tol)?,
    };
    Ok(RenewalCurve {
        grid: grid.to_vec(),
        values,
        methods: vec![route; grid.len()],
        abs_errors,
    })
}

fn quadrature_curve(m: &QueueModel, grid: &[f64], tol: Tolerance) -> Result<(Vec<f64>, Vec<f64>)> {
    let lambda = m.lambda();
    let inner_tol = Tolerance {
        abs: tol.abs / lambda,
        rel: tol.rel,
    };
    let cumulative =
        integrate_cumulative_with_breaks(|u| p00(m, u), grid, &m.service().breakpoints(), inner_tol)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    for (&t, q) in grid.iter().zip(&cumulative) {
        if t == 0.0 {
            values.push(1.0);
            errors.push(0.0);
        } else {
            values.push(p00(m, t) + lambda * q.value);
            errors.push(lambda * q.abs_error_estimate);
        }
    }
    Ok((values, errors))
}

fn closed_curve(m: &QueueModel, grid: &[f64], tol: Tolerance) -> Result<(Vec<f64>, Vec<f64>)> {
    let lambda = m.lambda();
    let rho = m.rho();
    let decay = (-rho).exp();
    let exact = |f: &dyn Fn(f64) -> f64| -> (Vec<f64>, Vec<f64>) {
        let values = grid.iter().map(|&t| if t == 0.0 { 1.0 } else { f(t) }).collect();
        (values, vec![0.0; grid.len()])
    };
    match *m.service().law() {
        Law::Deterministic { alpha } => Ok(exact(&|t| {
            if t < alpha {
                1.0
            } else {
                1.0 + lambda * decay * (t - alpha)
            }
        })),
        Law::Exponential { alpha } => {
            // λe^{−ρ} ∫₀ᵗ e^{ρe^{−u/α}} du = λe^{−ρ} [t + α (Ein(ρ) − Ein(ρe^{−t/α}))]
            let ein_rho = ein_series(rho);
            Ok(exact(&|t| {
                let x = (-t / alpha).exp();
                (rho * (-t / alpha).exp_m1()).exp()
                    + lambda * decay * (t + alpha * (ein_rho - ein_series(rho * x)))
            }))
        }
        Law::Ferreira { beta, .. } => {
            let k = lambda + beta;
            let a = -(-rho).exp_m1();
            Ok(exact(&|t| {
                decay * (1.0 + lambda * t) + a * beta / k * (-k * t).exp() + a * lambda / k
            }))
        }
        Law::Power { c } => {
            // t ≤ 1: exact exponent λ(u − u^{c+1}/(c+1)); t > 1 reuses the t = 1 integral.
            let clipped: Vec<f64> = grid.iter().map(|&t| t.min(1.0)).collect();
            let h = |u: f64| (-lambda * (u - u.powf(c + 1.0) / (c + 1.0))).exp();
            let inner_tol = Tolerance {
                abs: tol.abs / lambda,
                rel: tol.rel,
            };
            let cumulative = integrate_cumulative_with_breaks(h, &clipped, &[], inner_tol)?;
            let mut values = Vec::with_capacity(grid.len());
            let mut errors = Vec::with_capacity(grid.len());
            for (&t, q) in grid.iter().zip(&cumulative) {
                let v = if t == 0.0 {
                    1.0
                } else if t <= 1.0 {
                    h(t) + lambda * q.value
                } else {
                    decay + lambda * q.value + lambda * decay * (t - 1.0)
                };
                values.push(v);
                errors.push(if t == 0.0 { 0.0 } else { lambda * q.abs_error_estimate });
            }
            Ok((values, errors))
        }
        _ => unreachable!("resolve() admits only families with closed forms"),
    }
}

/// `dR/dt = λ G(t) p00(t)`. At a jump of `G` this is the right limit.
pub fn renewal_derivative(m: &QueueModel, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(m.lambda() * m.service().cdf_at(t) * p00(m, t))
}

/// `E[Z] = e^ρ / λ`.
pub fn cycle_mean(m: &QueueModel) -> f64 {
    m.rho().exp() / m.lambda()
}

/// Horizon past which the excess `p00 − e^{−ρ}` is below `abs_tol / 10`.
pub fn truncation_point(m: &QueueModel, tol: Tolerance) -> Result<f64> {
    let d = m.service();
    let scale = d.mean().max(1.0 / m.lambda());
    let start = d.support_end().filter(|&s| s > 0.0).unwrap_or(scale);
    truncation_horizon(|t| p00_excess(m, t), start, tol.abs / 10.0, 1e7 * scale)
}

fn improper<F: FnMut(f64) -> f64>(m: &QueueModel, f: F, tol: Tolerance) -> Result<f64> {
    let horizon = truncation_point(m, tol)?;
    Ok(integrate_with_breaks(f, 0.0, horizon, &m.service().breakpoints(), tol)?.value)
}

/// `E[Z²] = 2λ⁻¹e^{2ρ} ∫₀^∞ (p00(t) − e^{−ρ}) dt + 2λ⁻²e^ρ`.
pub fn cycle_second_moment(m: &QueueModel, tol: Tolerance) -> Result<f64> {
    let lambda = m.lambda();
    let rho = m.rho();
    let decay = (-rho).exp();
    let excess = improper(m, |t| p00(m, t) - decay, tol)?;
    Ok(2.0 / lambda * (2.0 * rho).exp() * excess + 2.0 / (lambda * lambda) * rho.exp())
}

/// `lim_{t→∞} [R(t) − t/E[Z]]` by the moment route, cross-checked against the
/// direct route. Fails when the routes differ by more than `100 · tol.abs`.
pub fn asymptotic_intercept(m: &QueueModel, tol: Tolerance) -> Result<Intercept> {
    let mean = cycle_mean(m);
    let moment_route = cycle_second_moment(m, tol)? / (2.0 * mean * mean);
    let lambda = m.lambda();
    let decay = (-m.rho()).exp();
    let direct_integral = improper(
        m,
        |u| (lambda * m.service().residual_tail_at(u)).exp_m1(),
        tol,
    )?;
    let direct = decay + lambda * decay * direct_integral;
    let discrepancy = (moment_route - direct).abs();
    if discrepancy > 100.0 * tol.abs {
        return Err(Error::Consistency(format!(
            "intercept routes disagree: moment route {moment_route}, direct route {direct}"
        )));
    }
    Ok(Intercept {
        value: moment_route,
        direct,
        discrepancy,
    })
}

pub fn cycle_moments(m: &QueueModel, tol: Tolerance) -> Result<CycleMoments> {
    let mean = cycle_mean(m);
    let second_moment = cycle_second_moment(m, tol)?;
    let intercept = asymptotic_intercept(m, tol)?;
    Ok(CycleMoments {
        mean,
        second_moment,
        variance: second_moment - mean * mean,
        intercept: intercept.value,
        intercept_discrepancy: intercept.discrepancy,
        tolerance: tol,
    })
}

pub fn elementary_bounds(m: &QueueModel, t: f64) -> Result<ElementaryBounds> {
    check_time(t)?;
    let lambda = m.lambda();
    let decay = (-m.rho()).exp();
    let p = p00(m, t);
    Ok(ElementaryBounds {
        tight_lo: p + lambda * decay * t,
        tight_hi: p + lambda * t,
        coarse_lo: decay * (1.0 + lambda * t),
        coarse_hi: 1.0 + lambda * t,
    })
}

/// Laplace transform `P00(s)` of the emptiness probability.
pub fn emptiness_transform(m: &QueueModel, s: f64, tol: Tolerance) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("transform argument must be positive, got {s}")));
    }
    let decay = (-m.rho()).exp();
    let head = improper(m, |t| (-s * t).exp() * p00_excess(m, t), tol)?;
    Ok(head + decay / s)
}

/// Laplace transform of the busy cycle, `1 − 1/((s + λ) P00(s))`.
pub fn cycle_transform(m: &QueueModel, s: f64, tol: Tolerance) -> Result<f64> {
    let p = emptiness_transform(m, s, tol)?;
    Ok(1.0 - 1.0 / ((s + m.lambda()) * p))
}

/// `0` to `10·E[Z]` in 512 equal steps.
pub fn default_grid(m: &QueueModel) -> Vec<f64> {
    let end = 10.0 * cycle_mean(m);
    (0..=512).map(|i| end * i as f64 / 512.0).collect()
}
