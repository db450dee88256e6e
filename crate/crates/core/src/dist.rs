//! Service-time distributions.
//!
//! Every built-in family carries an exact CDF, an exact integrated tail
//! `∫₀ᵗ (1 − G(v)) dv` and its complement `∫ₜ^∞ (1 − G(v)) dv`, raw moments up
//! to order three, and an inverse-CDF sampler that is a deterministic
//! function of its uniform input.
//!
//! The `ferreira` family is defined through its emptiness probability
//! `p00(t) = e^{−ρ} + (1 − e^{−ρ}) e^{−(λ+β)t}`: the CDF is whatever makes
//! `exp(−λ ∫₀ᵗ (1 − G))` equal that expression. It has an atom of size
//! `1 − (1 − e^{−ρ})(λ + β)/λ` at the origin.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate, truncation_horizon};

/// Family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Deterministic,
    Power,
    Exponential,
    Ferreira,
    Erlang,
    HyperExponential,
    Empirical,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Deterministic => "deterministic",
            Family::Power => "power",
            Family::Exponential => "exponential",
            Family::Ferreira => "ferreira",
            Family::Erlang => "erlang",
            Family::HyperExponential => "hyperexponential",
            Family::Empirical => "empirical",
        };
        f.write_str(name)
    }
}

/// Parameters of a service law. Build a [`ServiceDistribution`] from it with
/// [`ServiceDistribution::new`], which validates them.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Law {
    Deterministic { alpha: f64 },
    /// `G(t) = t^c` on `[0, 1)`.
    Power { c: f64 },
    Exponential { alpha: f64 },
    /// `beta` is tied to the arrival rate `lambda` and traffic intensity `rho`.
    Ferreira { beta: f64, lambda: f64, rho: f64 },
    Erlang { k: u32, alpha: f64 },
    #[serde(rename = "hyperexponential")]
    HyperExponential { weights: Vec<f64>, means: Vec<f64> },
    /// Sorted observations; the CDF rises by `1/n` at the smallest one and is
    /// linear with slope `1/(n Δ)` across every later gap.
    Empirical { points: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ServiceDistribution {
    law: Law,
    #[serde(skip)]
    mean: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Range(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be nonnegative, got {t}")))
    }
}

/// Open interval of admissible `ferreira` β values for a given `λ`, `ρ`.
pub fn ferreira_beta_range(lambda: f64, rho: f64) -> (f64, f64) {
    (-lambda, lambda / rho.exp_m1())
}

impl ServiceDistribution {
    pub fn new(law: Law) -> Result<Self> {
        let mean = match &law {
            Law::Deterministic { alpha } => {
                if !(*alpha >= 0.0 && alpha.is_finite()) {
                    return Err(Error::Range(format!(
                        "deterministic alpha must be nonnegative and finite, got {alpha}"
                    )));
                }
                *alpha
            }
            Law::Power { c } => {
                positive("power c", *c)?;
                if *c < 1.0 {
                    log::warn!("power family with c = {c} < 1: density is unbounded at 0");
                }
                c / (c + 1.0)
            }
            Law::Exponential { alpha } => {
                positive("exponential mean", *alpha)?;
                *alpha
            }
            Law::Ferreira { beta, lambda, rho } => {
                positive("ferreira lambda", *lambda)?;
                positive("ferreira rho", *rho)?;
                let (lo, hi) = ferreira_beta_range(*lambda, *rho);
                if !(*beta > lo && *beta < hi) {
                    return Err(Error::Range(format!(
                        "ferreira requires -λ < β < λ/(e^ρ - 1), i.e. {lo} < β < {hi} \
                         for λ = {lambda}, ρ = {rho}; got β = {beta}"
                    )));
                }
                rho / lambda
            }
            Law::Erlang { k, alpha } => {
                if *k == 0 {
                    return Err(Error::Range("erlang k must be a positive integer".into()));
                }
                positive("erlang mean", *alpha)?;
                *alpha
            }
            Law::HyperExponential { weights, means } => {
                if weights.is_empty() || weights.len() != means.len() {
                    return Err(Error::Range(format!(
                        "hyperexponential needs matching nonempty p and means lists (got {} and {})",
                        weights.len(),
                        means.len()
                    )));
                }
                for &p in weights {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::Range(format!(
                            "hyperexponential weight {p} is not a probability"
                        )));
                    }
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::Range(format!(
                        "hyperexponential weights sum to {total}, expected 1"
                    )));
                }
                for &m in means {
                    positive("hyperexponential mean", m)?;
                }
                weights.iter().zip(means).map(|(p, m)| p * m).sum()
            }
            Law::Empirical { points } => {
                if points.is_empty() {
                    return Err(Error::Range("empirical sample is empty".into()));
                }
                if let Some(bad) = points.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
                    return Err(Error::Range(format!(
                        "empirical service times must be nonnegative and finite, got {bad}"
                    )));
                }
                let mut sorted = points.clone();
                sorted.sort_by(f64::total_cmp);
                return Ok(ServiceDistribution {
                    mean: empirical_raw_moment(&sorted, 1),
                    law: Law::Empirical { points: sorted },
                });
            }
        };
        Ok(ServiceDistribution { law, mean })
    }

    pub fn deterministic(alpha: f64) -> Result<Self> {
        Self::new(Law::Deterministic { alpha })
    }

    pub fn power(c: f64) -> Result<Self> {
        Self::new(Law::Power { c })
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        Self::new(Law::Exponential { alpha })
    }

    pub fn ferreira(beta: f64, lambda: f64, rho: f64) -> Result<Self> {
        Self::new(Law::Ferreira { beta, lambda, rho })
    }

    pub fn erlang(k: u32, alpha: f64) -> Result<Self> {
        Self::new(Law::Erlang { k, alpha })
    }

    pub fn hyperexponential(weights: Vec<f64>, means: Vec<f64>) -> Result<Self> {
        Self::new(Law::HyperExponential { weights, means })
    }

    pub fn empirical(points: Vec<f64>) -> Result<Self> {
        Self::new(Law::Empirical { points })
    }

    /// Reads one service time per line (first column of a CSV file). A first
    /// line that does not parse as a number is treated as a header.
    pub fn empirical_from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let Some(field) = record.get(0).map(str::trim) else {
                continue;
            };
            if field.is_empty() {
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) => points.push(v),
                Err(_) if line == 0 => {}
                Err(_) => {
                    return Err(Error::Parse {
                        position: line + 1,
                        message: format!("{}: line {} is not a number: {field:?}", path.display(), line + 1),
                    })
                }
            }
        }
        Self::empirical(points)
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn family(&self) -> Family {
        match self.law {
            Law::Deterministic { .. } => Family::Deterministic,
            Law::Power { .. } => Family::Power,
            Law::Exponential { .. } => Family::Exponential,
            Law::Ferreira { .. } => Family::Ferreira,
            Law::Erlang { .. } => Family::Erlang,
            Law::HyperExponential { .. } => Family::HyperExponential,
            Law::Empirical { .. } => Family::Empirical,
        }
    }

    /// Mean service time α.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `G(t)`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.cdf_at(t))
    }

    /// `∫₀ᵗ (1 − G(v)) dv`.
    pub fn integrated_tail(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.integrated_tail_at(t))
    }

    /// `∫ₜ^∞ (1 − G(v)) dv = α − integrated_tail(t)`, evaluated without the
    /// cancellation of the subtraction.
    pub fn residual_tail(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.residual_tail_at(t))
    }

    pub(crate) fn survival_at(&self, t: f64) -> f64 {
        match &self.law {
            Law::Ferreira { beta, lambda, rho } => {
                let a = -(-rho).exp_m1();
                let k = lambda + beta;
                let x = (-k * t).exp();
                a * k * x / (lambda * ((-rho).exp() + a * x))
            }
            Law::Erlang { k, alpha } => {
                let x = *k as f64 * t / alpha;
                poisson_cdf(*k - 1, x)
            }
            Law::HyperExponential { weights, means } => weights
                .iter()
                .zip(means)
                .map(|(p, m)| p * (-t / m).exp())
                .sum(),
            Law::Exponential { alpha } => (-t / alpha).exp(),
            _ => 1.0 - self.cdf_at(t),
        }
    }

    pub(crate) fn cdf_at(&self, t: f64) -> f64 {
        match &self.law {
            Law::Deterministic { alpha } => {
                if t < *alpha {
                    0.0
                } else {
                    1.0
                }
            }
            Law::Power { c } => {
                if t < 1.0 {
                    t.powf(*c)
                } else {
                    1.0
                }
            }
            Law::Exponential { alpha } => -(-t / alpha).exp_m1(),
            Law::Empirical { points } => empirical_cdf(points, t),
            _ => 1.0 - self.survival_at(t),
        }
    }

    pub(crate) fn integrated_tail_at(&self, t: f64) -> f64 {
        match &self.law {
            Law::Deterministic { alpha } => t.min(*alpha),
            Law::Power { c } => {
                if t < 1.0 {
                    t - t.powf(c + 1.0) / (c + 1.0)
                } else {
                    c / (c + 1.0)
                }
            }
            Law::Exponential { alpha } => -alpha * (-t / alpha).exp_m1(),
            Law::Ferreira { beta, lambda, rho } => {
                // −(1/λ) ln p00(t)
                let a = -(-rho).exp_m1();
                let k = lambda + beta;
                -((-rho).exp() + a * (-k * t).exp()).ln() / lambda
            }
            Law::Erlang { k, alpha } => {
                let rate = *k as f64 / alpha;
                let x = rate * t;
                (0..*k).map(|n| poisson_sf(n, x)).sum::<f64>() / rate
            }
            Law::HyperExponential { weights, means } => weights
                .iter()
                .zip(means)
                .map(|(p, m)| -p * m * (-t / m).exp_m1())
                .sum(),
            Law::Empirical { points } => empirical_integrated_tail(points, t),
        }
    }

    pub(crate) fn residual_tail_at(&self, t: f64) -> f64 {
        match &self.law {
            Law::Deterministic { alpha } => (alpha - t).max(0.0),
            Law::Power { c } => {
                if t < 1.0 {
                    // ∫ₜ¹ (1 − vᶜ) dv
                    (1.0 - t) - (1.0 - t.powf(c + 1.0)) / (c + 1.0)
                } else {
                    0.0
                }
            }
            Law::Exponential { alpha } => alpha * (-t / alpha).exp(),
            Law::Ferreira { beta, lambda, rho } => {
                // (1/λ) ln(p00(t) e^ρ) = (1/λ) ln(1 + (e^ρ − 1) e^{−(λ+β)t})
                let k = lambda + beta;
                (rho.exp_m1() * (-k * t).exp()).ln_1p() / lambda
            }
            Law::Erlang { k, alpha } => {
                let rate = *k as f64 / alpha;
                let x = rate * t;
                (0..*k).map(|n| poisson_cdf(n, x)).sum::<f64>() / rate
            }
            Law::HyperExponential { weights, means } => weights
                .iter()
                .zip(means)
                .map(|(p, m)| p * m * (-t / m).exp())
                .sum(),
            Law::Empirical { points } => {
                (self.mean - empirical_integrated_tail(points, t)).max(0.0)
            }
        }
    }

    /// Raw moment `E[Sʳ]` for `r ∈ {1, 2, 3}`.
    pub fn moment(&self, r: u32) -> Result<f64> {
        if !(1..=3).contains(&r) {
            return Err(Error::Unsupported(format!(
                "moment of order {r}; supported orders are 1, 2, 3"
            )));
        }
        let rf = r as f64;
        let value = match &self.law {
            Law::Deterministic { alpha } => alpha.powi(r as i32),
            Law::Power { c } => c / (c + rf),
            Law::Exponential { alpha } => factorial(r) * alpha.powi(r as i32),
            Law::Ferreira { .. } if r == 1 => self.mean,
            Law::Ferreira { beta, lambda, .. } => {
                // r ∫₀^∞ t^{r−1} (1 − G(t)) dt; the integrand decays like e^{−(λ+β)t}.
                let k = lambda + beta;
                let bound = |t: f64| t.powi(r as i32) * (-k * t).exp() * (lambda + k) / lambda;
                let horizon = truncation_horizon(bound, 1.0 / k, 1e-16, 1e9)?;
                let q = integrate(
                    |t| rf * t.powi(r as i32 - 1) * self.survival_at(t),
                    0.0,
                    horizon,
                    1e-14,
                    1e-13,
                )?;
                q.value
            }
            Law::Erlang { k, alpha } => {
                let rate = *k as f64 / alpha;
                (0..r).map(|j| (*k + j) as f64).product::<f64>() / rate.powi(r as i32)
            }
            Law::HyperExponential { weights, means } => weights
                .iter()
                .zip(means)
                .map(|(p, m)| p * factorial(r) * m.powi(r as i32))
                .sum(),
            Law::Empirical { points } => empirical_raw_moment(points, r),
        };
        Ok(value)
    }

    /// Squared coefficient of variation `(μ₂ − μ₁²)/μ₁²`.
    pub fn cv_squared(&self) -> Result<f64> {
        let m1 = self.moment(1)?;
        if m1 == 0.0 {
            return Err(Error::domain("coefficient of variation undefined for zero mean"));
        }
        let m2 = self.moment(2)?;
        Ok((m2 - m1 * m1) / (m1 * m1))
    }

    /// Inverse-CDF transform of a uniform variate `u ∈ (0, 1)`: the smallest
    /// `t` with `G(t) ≥ u`.
    pub fn sample(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("uniform variate must lie in (0, 1), got {u}")));
        }
        Ok(self.sample_at(u))
    }

    pub(crate) fn sample_at(&self, u: f64) -> f64 {
        match &self.law {
            Law::Deterministic { alpha } => *alpha,
            Law::Power { c } => u.powf(1.0 / c),
            Law::Exponential { alpha } => -alpha * (-u).ln_1p(),
            Law::Ferreira { beta, lambda, rho } => {
                let a = -(-rho).exp_m1();
                let k = lambda + beta;
                let q = 1.0 - u;
                // Survival at 0⁺ is a·k/λ; below that the atom at 0 absorbs u.
                if q >= a * k / lambda {
                    return 0.0;
                }
                let x = q * lambda * (-rho).exp() / (a * (k - q * lambda));
                (-x.ln() / k).max(0.0)
            }
            Law::Erlang { .. } | Law::HyperExponential { .. } => self.invert_survival(1.0 - u),
            Law::Empirical { points } => empirical_quantile(points, u),
        }
    }

    fn density_at(&self, t: f64) -> f64 {
        match &self.law {
            Law::Erlang { k, alpha } => {
                let rate = *k as f64 / alpha;
                rate * poisson_pmf(*k - 1, rate * t)
            }
            Law::HyperExponential { weights, means } => weights
                .iter()
                .zip(means)
                .map(|(p, m)| p / m * (-t / m).exp())
                .sum(),
            _ => f64::NAN,
        }
    }

    /// Solves `1 − G(t) = q` for the continuous, strictly decreasing survival
    /// functions of the erlang and hyperexponential families.
    fn invert_survival(&self, q: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.mean.max(f64::MIN_POSITIVE);
        while self.survival_at(hi) > q {
            lo = hi;
            hi *= 2.0;
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let s = self.survival_at(t) - q;
            if s == 0.0 {
                return t;
            }
            if s > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let d = self.density_at(t);
            let newton = t + s / d;
            t = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 2.0 * f64::EPSILON * hi {
                break;
            }
        }
        t
    }

    /// Points where `G` jumps or has a kink; quadrature panels start there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.law {
            Law::Deterministic { alpha } if *alpha > 0.0 => vec![*alpha],
            Law::Power { .. } => vec![1.0],
            Law::Empirical { points } => {
                let mut v: Vec<f64> = points.iter().copied().filter(|x| *x > 0.0).collect();
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }

    /// Smallest `t` with `G(t) = 1`, when finite.
    pub fn support_end(&self) -> Option<f64> {
        match &self.law {
            Law::Deterministic { alpha } => Some(*alpha),
            Law::Power { .. } => Some(1.0),
            Law::Empirical { points } => points.last().copied(),
            _ => None,
        }
    }
}

fn factorial(r: u32) -> f64 {
    (1..=r).map(f64::from).product()
}

fn poisson_pmf(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (n as f64 * x.ln() - x - ln_factorial(n)).exp()
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// `P(N ≤ n)` for `N ~ Poisson(x)`.
fn poisson_cdf(n: u32, x: f64) -> f64 {
    let mut term = (-x).exp();
    let mut sum = term;
    for j in 1..=n {
        term *= x / j as f64;
        sum += term;
    }
    sum.min(1.0)
}

/// `P(N > n)` for `N ~ Poisson(x)`, summed from the upper tail when `x` is
/// small so that tiny values keep their relative accuracy.
fn poisson_sf(n: u32, x: f64) -> f64 {
    if x <= n as f64 + 1.0 {
        let mut term = poisson_pmf(n + 1, x);
        let mut sum = 0.0;
        let mut j = n + 1;
        while term > f64::EPSILON * 1e-3 * sum || sum == 0.0 {
            sum += term;
            j += 1;
            term *= x / j as f64;
            if term == 0.0 {
                break;
            }
        }
        sum
    } else {
        1.0 - poisson_cdf(n, x)
    }
}

fn empirical_cdf(points: &[f64], t: f64) -> f64 {
    let n = points.len();
    // Number of observations ≤ t.
    let i = points.partition_point(|&x| x <= t);
    if i == 0 {
        return 0.0;
    }
    if i == n {
        return 1.0;
    }
    let (lo, hi) = (points[i - 1], points[i]);
    (i as f64 + (t - lo) / (hi - lo)) / n as f64
}

fn empirical_integrated_tail(points: &[f64], t: f64) -> f64 {
    let n = points.len() as f64;
    let first = points[0];
    if t <= first {
        return t;
    }
    let mut acc = first;
    for (j, w) in points.windows(2).enumerate() {
        let i = (j + 1) as f64;
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        if t >= hi {
            acc += (hi - lo) * (1.0 - (2.0 * i + 1.0) / (2.0 * n));
        } else {
            if t > lo {
                let d = t - lo;
                acc += d * (1.0 - i / n) - d * d / (2.0 * n * (hi - lo));
            }
            return acc;
        }
    }
    acc
}

fn empirical_quantile(points: &[f64], u: f64) -> f64 {
    let n = points.len();
    let scaled = u * n as f64;
    if scaled <= 1.0 {
        return points[0];
    }
    let i = (scaled.floor() as usize).min(n - 1);
    let (lo, hi) = (points[i - 1], points[i]);
    lo + (scaled - i as f64) * (hi - lo)
}

/// Raw moments of the piecewise-linear law: mass `1/n` at the smallest
/// point plus uniform mass `1/n` on each later gap.
fn empirical_raw_moment(points: &[f64], r: u32) -> f64 {
    let n = points.len() as f64;
    let ri = r as i32;
    let mut sum = points[0].powi(ri);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        sum += if b > a {
            (b.powi(ri + 1) - a.powi(ri + 1)) / ((r as f64 + 1.0) * (b - a))
        } else {
            a.powi(ri)
        };
    }
    sum / n
}

/// Arrival rate paired with a service law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueueModel {
    lambda: f64,
    service: ServiceDistribution,
}

impl QueueModel {
    pub fn new(lambda: f64, service: ServiceDistribution) -> Result<Self> {
        positive("arrival rate lambda", lambda)?;
        if let Law::Ferreira { lambda: ambient, .. } = service.law() {
            if (ambient - lambda).abs() > 1e-12 * lambda {
                return Err(Error::Range(format!(
                    "ferreira service was built for λ = {ambient} but the model uses λ = {lambda}"
                )));
            }
        }
        let rho = lambda * service.mean();
        if !rho.is_finite() {
            return Err(Error::Range(format!("traffic intensity ρ = {rho} is not finite")));
        }
        Ok(QueueModel { lambda, service })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn service(&self) -> &ServiceDistribution {
        &self.service
    }

    /// Traffic intensity `ρ = λα`.
    pub fn rho(&self) -> f64 {
        self.lambda * self.service.mean()
    }
}

/// Default traffic intensity for `ferreira` specs that omit `rho=`.
pub const FERREIRA_DEFAULT_RHO: f64 = 1.0;

/// Parses `family:key=value[,key=value...]`; list values use `;`.
///
/// `lambda` is the ambient arrival rate, needed only by `ferreira`.
pub fn parse_dist(spec: &str, lambda: Option<f64>) -> Result<ServiceDistribution> {
    let parse_err = |position: usize, message: String| Error::Parse { position, message };
    let Some(colon) = spec.find(':') else {
        return Err(parse_err(
            spec.len(),
            format!("expected `family:key=value` in {spec:?}"),
        ));
    };
    let family = spec[..colon].trim();
    let mut params: Vec<(&str, &str, usize)> = Vec::new();
    let mut offset = colon + 1;
    for item in spec[colon + 1..].split(',') {
        let start = offset;
        offset += item.len() + 1;
        if item.trim().is_empty() {
            return Err(parse_err(start, "empty parameter".into()));
        }
        let Some(eq) = item.find('=') else {
            return Err(parse_err(start, format!("expected key=value, got {item:?}")));
        };
        let key = item[..eq].trim();
        if params.iter().any(|(k, _, _)| *k == key) {
            return Err(parse_err(start, format!("duplicate key {key:?}")));
        }
        params.push((key, item[eq + 1..].trim(), start + eq + 1));
    }

    let allowed: &[&str] = match family {
        "det" => &["alpha"],
        "power" => &["c"],
        "exp" => &["mean"],
        "ferreira" => &["beta", "rho"],
        "erlang" => &["k", "mean"],
        "hyperexp" => &["p", "means"],
        "empirical" => &["file"],
        other => {
            return Err(parse_err(
                0,
                format!(
                    "unknown family {other:?}; expected det, power, exp, ferreira, erlang, hyperexp or empirical"
                ),
            ))
        }
    };
    for (key, _, pos) in &params {
        if !allowed.contains(key) {
            return Err(parse_err(
                pos.saturating_sub(key.len() + 1),
                format!("unknown key {key:?} for family {family}; expected one of {allowed:?}"),
            ));
        }
    }
    let raw = |key: &str| -> Result<(&str, usize)> {
        params
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|(_, v, p)| (*v, *p))
            .ok_or_else(|| parse_err(spec.len(), format!("missing key {key:?} for family {family}")))
    };
    let number = |key: &str| -> Result<f64> {
        let (v, pos) = raw(key)?;
        v.parse::<f64>()
            .map_err(|_| parse_err(pos, format!("{key} must be a number, got {v:?}")))
    };
    let list = |key: &str| -> Result<Vec<f64>> {
        let (v, pos) = raw(key)?;
        let mut out = Vec::new();
        let mut p = pos;
        for part in v.split(';') {
            out.push(
                part.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(p, format!("{key} entry must be a number, got {part:?}")))?,
            );
            p += part.len() + 1;
        }
        Ok(out)
    };

    match family {
        "det" => ServiceDistribution::deterministic(number("alpha")?),
        "power" => ServiceDistribution::power(number("c")?),
        "exp" => ServiceDistribution::exponential(number("mean")?),
        "ferreira" => {
            let beta = number("beta")?;
            let rho = if params.iter().any(|(k, _, _)| *k == "rho") {
                number("rho")?
            } else {
                FERREIRA_DEFAULT_RHO
            };
            let lambda = lambda.ok_or_else(|| {
                Error::Argument("ferreira service needs the arrival rate λ".into())
            })?;
            ServiceDistribution::ferreira(beta, lambda, rho)
        }
        "erlang" => {
            let (v, pos) = raw("k")?;
            let k = v
                .parse::<u32>()
                .map_err(|_| parse_err(pos, format!("k must be a positive integer, got {v:?}")))?;
            ServiceDistribution::erlang(k, number("mean")?)
        }
        "hyperexp" => ServiceDistribution::hyperexponential(list("p")?, list("means")?),
        "empirical" => {
            let (path, _) = raw("file")?;
            ServiceDistribution::empirical_from_csv(Path::new(path))
        }
        _ => unreachable!("family validated above"),
    }
}
