//! Reliability-class bounds on the renewal function.
//!
//! All four bounds come from one mechanism: substitute a tail envelope for the
//! service tail in the renewal formula. Because `R` is decreasing in the tail,
//! a distribution whose tail lies above a pointwise envelope has `R` below the
//! envelope's `R`, and so on for the mirrored cases.
//!
//! | class | envelope | premise | bound |
//! |-------|----------|---------|-------|
//! | NBUE  | remainder `α e^{−t/α}` | `∫ₜ^∞(1−G) ≤ α e^{−t/α}` | upper |
//! | NWUE  | remainder `α e^{−t/α}` | `∫ₜ^∞(1−G) ≥ α e^{−t/α}` | lower |
//! | DFR   | tail `e^{−t(γ²+1)/(2α)}` | `1 − G(t) ≥ e^{−t(γ²+1)/(2α)}` | upper |
//! | IMRL  | remainder `α e^{−κt}`, `κ = 4α²μ₃/(3μ₂³)` | `∫ₜ^∞(1−G) ≥ α e^{−κt}` | lower |
//!
//! Class membership is never assumed: [`envelope_premise_check`] scans the
//! premise on a grid for a concrete distribution.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dist::{QueueModel, ServiceDistribution};
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_cumulative_with_breaks, validate_grid, Tolerance};
use crate::renewal::{renewal_curve, renewal_value, Method};

/// What the envelope stands in for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeKind {
    /// The tail `1 − G(v)` itself.
    PointwiseTail,
    /// The remainder `∫ₜ^∞ (1 − G)`.
    IntegratedTail,
}

/// How the true tail (or remainder) compares with the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    TrueAbove,
    TrueBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Nbue,
    Nwue,
    Dfr,
    Imrl,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Nbue => "nbue",
            Provenance::Nwue => "nwue",
            Provenance::Dfr => "dfr",
            Provenance::Imrl => "imrl",
            Provenance::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundDirection {
    Upper,
    Lower,
}

impl fmt::Display for BoundDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundDirection::Upper => "upper bound",
            BoundDirection::Lower => "lower bound",
        })
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// `scale · e^{−rate·v}`
    Exponential { scale: f64, rate: f64 },
    Constant(f64),
    Custom { f: RealFn, integral: Option<RealFn> },
    /// The exact tail or remainder of a distribution.
    Exact(ServiceDistribution),
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Exponential { scale, rate } => write!(f, "{scale}·exp(-{rate}·v)"),
            Shape::Constant(c) => write!(f, "{c}"),
            Shape::Custom { integral, .. } => {
                write!(f, "custom(integral: {})", if integral.is_some() { "closed" } else { "numeric" })
            }
            Shape::Exact(d) => write!(f, "exact {} tail", d.family()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TailEnvelope {
    kind: EnvelopeKind,
    shape: Shape,
    comparison: Comparison,
    provenance: Provenance,
}

impl TailEnvelope {
    /// Pointwise envelope `e(v) = scale · e^{−rate v}`.
    pub fn pointwise_exponential(scale: f64, rate: f64, comparison: Comparison) -> Result<Self> {
        if !(0.0..=1.0).contains(&scale) || !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Argument(format!(
                "pointwise envelope needs scale in [0, 1] and positive rate (got {scale}, {rate})"
            )));
        }
        Ok(TailEnvelope {
            kind: EnvelopeKind::PointwiseTail,
            shape: Shape::Exponential { scale, rate },
            comparison,
            provenance: Provenance::Custom,
        })
    }

    /// Remainder envelope `∫ₜ^∞(1−G) ≈ α e^{−rate t}`.
    pub fn integrated_exponential(alpha: f64, rate: f64, comparison: Comparison) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Argument(format!(
                "integrated envelope needs positive mean and rate (got {alpha}, {rate})"
            )));
        }
        Ok(TailEnvelope {
            kind: EnvelopeKind::IntegratedTail,
            shape: Shape::Exponential { scale: alpha, rate },
            comparison,
            provenance: Provenance::Custom,
        })
    }

    pub fn constant(value: f64, comparison: Comparison) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Argument(format!("constant envelope {value} outside [0, 1]")));
        }
        Ok(TailEnvelope {
            kind: EnvelopeKind::PointwiseTail,
            shape: Shape::Constant(value),
            comparison,
            provenance: Provenance::Custom,
        })
    }

    /// Arbitrary pointwise envelope; `integral`, when given, must be `∫₀ᵗ f`.
    pub fn custom<F>(f: F, integral: Option<RealFn>, comparison: Comparison) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TailEnvelope {
            kind: EnvelopeKind::PointwiseTail,
            shape: Shape::Custom { f: Arc::new(f), integral },
            comparison,
            provenance: Provenance::Custom,
        }
    }

    /// The exact tail of `d`, used as a pointwise envelope.
    pub fn exact_tail(d: &ServiceDistribution) -> Self {
        TailEnvelope {
            kind: EnvelopeKind::PointwiseTail,
            shape: Shape::Exact(d.clone()),
            comparison: Comparison::TrueAbove,
            provenance: Provenance::Custom,
        }
    }

    /// `∫ₜ^∞(1−G) ≤ α e^{−t/α}`.
    pub fn nbue(alpha: f64) -> Result<Self> {
        Ok(Self::integrated_exponential(alpha, 1.0 / alpha, Comparison::TrueBelow)?
            .with_provenance(Provenance::Nbue))
    }

    /// `∫ₜ^∞(1−G) ≥ α e^{−t/α}`.
    pub fn nwue(alpha: f64) -> Result<Self> {
        Ok(Self::integrated_exponential(alpha, 1.0 / alpha, Comparison::TrueAbove)?
            .with_provenance(Provenance::Nwue))
    }

    /// `1 − G(t) ≥ exp(−(t/α)(γ² + 1)/2)`.
    pub fn dfr(alpha: f64, gamma_sq: f64) -> Result<Self> {
        if !(gamma_sq >= 0.0 && gamma_sq.is_finite()) {
            return Err(Error::Argument(format!(
                "squared coefficient of variation must be nonnegative, got {gamma_sq}"
            )));
        }
        positive_mean(alpha)?;
        Ok(Self::pointwise_exponential(1.0, dfr_rate(alpha, gamma_sq), Comparison::TrueAbove)?
            .with_provenance(Provenance::Dfr))
    }

    /// `∫ₜ^∞(1−G) ≥ α e^{−κt}` with `κ = 4α²μ₃/(3μ₂³)`.
    pub fn imrl(alpha: f64, mu2: f64, mu3: f64) -> Result<Self> {
        positive_mean(alpha)?;
        Ok(Self::integrated_exponential(alpha, imrl_rate(alpha, mu2, mu3)?, Comparison::TrueAbove)?
            .with_provenance(Provenance::Imrl))
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn kind(&self) -> EnvelopeKind {
        self.kind
    }

    pub fn comparison(&self) -> Comparison {
        self.comparison
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Which side of the true `R` the substituted `R` lands on when the
    /// premise holds.
    pub fn bound_direction(&self) -> BoundDirection {
        match (self.kind, self.comparison) {
            (EnvelopeKind::PointwiseTail, Comparison::TrueAbove) => BoundDirection::Upper,
            (EnvelopeKind::PointwiseTail, Comparison::TrueBelow) => BoundDirection::Lower,
            (EnvelopeKind::IntegratedTail, Comparison::TrueAbove) => BoundDirection::Lower,
            (EnvelopeKind::IntegratedTail, Comparison::TrueBelow) => BoundDirection::Upper,
        }
    }

    /// Envelope value at `t`: the tail for pointwise kind, the remainder for
    /// integrated kind.
    pub fn value(&self, t: f64) -> f64 {
        match (&self.shape, self.kind) {
            (Shape::Exponential { scale, rate }, _) => scale * (-rate * t).exp(),
            (Shape::Constant(c), _) => *c,
            (Shape::Custom { f, .. }, _) => f(t),
            (Shape::Exact(d), EnvelopeKind::PointwiseTail) => d.survival_at(t),
            (Shape::Exact(d), EnvelopeKind::IntegratedTail) => d.residual_tail_at(t),
        }
    }

    /// Kinks of the substituted integrand.
    fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Exact(d) => d.breakpoints(),
            _ => Vec::new(),
        }
    }

    /// The stand-in for `∫₀ᵗ (1 − G)` that enters the renewal formula.
    fn substituted_integrated_tail(&self, t: f64, tol: Tolerance) -> Result<f64> {
        Ok(match (&self.shape, self.kind) {
            (Shape::Exponential { scale, rate }, EnvelopeKind::PointwiseTail) => {
                -scale * (-rate * t).exp_m1() / rate
            }
            (Shape::Exponential { scale, rate }, EnvelopeKind::IntegratedTail) => {
                -scale * (-rate * t).exp_m1()
            }
            (Shape::Constant(c), _) => c * t,
            (Shape::Custom { integral: Some(i), .. }, _) => i(t),
            (Shape::Custom { f, integral: None }, _) => {
                integrate(|v| f(v), 0.0, t, tol.abs * 1e-3, tol.rel * 1e-3)?.value
            }
            (Shape::Exact(d), _) => d.integrated_tail_at(t),
        })
    }
}

fn positive_mean(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("mean service time must be positive, got {alpha}")))
    }
}

/// Exponent coefficient `(γ² + 1)/(2α)` of the DFR envelope.
pub fn dfr_rate(alpha: f64, gamma_sq: f64) -> f64 {
    (gamma_sq + 1.0) / (2.0 * alpha)
}

/// `κ = 4α²μ₃ / (3μ₂³)`; equals `1/α` at exponential moments.
pub fn imrl_rate(alpha: f64, mu2: f64, mu3: f64) -> Result<f64> {
    if !(mu2 > 0.0 && mu3 > 0.0 && mu2.is_finite() && mu3.is_finite()) {
        return Err(Error::Argument(format!(
            "IMRL bound needs positive moments (μ₂ = {mu2}, μ₃ = {mu3})"
        )));
    }
    Ok(4.0 * alpha * alpha * mu3 / (3.0 * mu2.powi(3)))
}

/// `e^{−λS(t)} + λ ∫₀ᵗ e^{−λS(u)} du` where `S` is the envelope's stand-in for
/// the integrated tail.
pub fn renewal_from_envelope(lambda: f64, env: &TailEnvelope, t: f64, tol: Tolerance) -> Result<f64> {
    Ok(renewal_curve_from_envelope(lambda, env, &[t], tol)?[0])
}

pub fn renewal_curve_from_envelope(
    lambda: f64,
    env: &TailEnvelope,
    grid: &[f64],
    tol: Tolerance,
) -> Result<Vec<f64>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Argument(format!("arrival rate must be positive, got {lambda}")));
    }
    validate_grid(grid)?;
    let mut failure = None;
    let mut p = |u: f64| match env.substituted_integrated_tail(u, tol) {
        Ok(s) => (-lambda * s).exp(),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let inner = Tolerance::absolute(tol.abs / lambda)?;
    let cumulative = integrate_cumulative_with_breaks(&mut p, grid, &env.breakpoints(), inner)?;
    let mut out = Vec::with_capacity(grid.len());
    for (&t, q) in grid.iter().zip(&cumulative) {
        out.push(if t == 0.0 { 1.0 } else { p(t) + lambda * q.value });
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// A bound value with its direction and class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassBound {
    pub value: f64,
    pub direction: BoundDirection,
    pub class: Provenance,
}

fn exponential_reference(lambda: f64, alpha: f64, grid: &[f64]) -> Result<Vec<f64>> {
    let m = QueueModel::new(lambda, ServiceDistribution::exponential(alpha)?)?;
    Ok(renewal_curve(&m, grid, Method::Closed, Tolerance::default())?.values)
}

/// `R^M(t)` (exponential service with mean `alpha`), an upper bound for NBUE
/// service with the same mean.
pub fn nbue_upper(lambda: f64, alpha: f64, t: f64) -> Result<ClassBound> {
    positive_mean(alpha)?;
    let m = QueueModel::new(lambda, ServiceDistribution::exponential(alpha)?)?;
    Ok(ClassBound {
        value: renewal_value(&m, t, Method::Closed, Tolerance::default())?.value,
        direction: BoundDirection::Upper,
        class: Provenance::Nbue,
    })
}

/// `R^M(t)`, a lower bound for NWUE service with the same mean.
pub fn nwue_lower(lambda: f64, alpha: f64, t: f64) -> Result<ClassBound> {
    Ok(ClassBound {
        direction: BoundDirection::Lower,
        class: Provenance::Nwue,
        ..nbue_upper(lambda, alpha, t)?
    })
}

pub fn dfr_upper(lambda: f64, alpha: f64, gamma_sq: f64, t: f64, tol: Tolerance) -> Result<ClassBound> {
    let env = TailEnvelope::dfr(alpha, gamma_sq)?;
    Ok(ClassBound {
        value: renewal_from_envelope(lambda, &env, t, tol)?,
        direction: BoundDirection::Upper,
        class: Provenance::Dfr,
    })
}

pub fn imrl_lower(lambda: f64, alpha: f64, mu2: f64, mu3: f64, t: f64, tol: Tolerance) -> Result<ClassBound> {
    let env = TailEnvelope::imrl(alpha, mu2, mu3)?;
    Ok(ClassBound {
        value: renewal_from_envelope(lambda, &env, t, tol)?,
        direction: BoundDirection::Lower,
        class: Provenance::Imrl,
    })
}

/// Parameters of a class bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum BoundClass {
    Nbue { alpha: f64 },
    Nwue { alpha: f64 },
    Dfr { alpha: f64, gamma_sq: f64 },
    Imrl { alpha: f64, mu2: f64, mu3: f64 },
}

impl BoundClass {
    pub fn envelope(&self) -> Result<TailEnvelope> {
        match *self {
            BoundClass::Nbue { alpha } => TailEnvelope::nbue(alpha),
            BoundClass::Nwue { alpha } => TailEnvelope::nwue(alpha),
            BoundClass::Dfr { alpha, gamma_sq } => TailEnvelope::dfr(alpha, gamma_sq),
            BoundClass::Imrl { alpha, mu2, mu3 } => TailEnvelope::imrl(alpha, mu2, mu3),
        }
    }
}

/// Bound curve for a class on a grid. NBUE/NWUE use the exponential closed
/// form; DFR/IMRL integrate the substituted formula.
pub fn bound_curve(lambda: f64, class: BoundClass, grid: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    match class {
        BoundClass::Nbue { alpha } | BoundClass::Nwue { alpha } => {
            positive_mean(alpha)?;
            exponential_reference(lambda, alpha, grid)
        }
        _ => renewal_curve_from_envelope(lambda, &class.envelope()?, grid, tol),
    }
}

/// Grid points where a distribution breaks the envelope premise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiseReport {
    pub violations: Vec<f64>,
    /// Largest amount by which the premise fails (0 when it holds).
    pub max_violation: f64,
    pub points_checked: usize,
}

impl PremiseReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds_at(&self, t: f64) -> bool {
        !self.violations.contains(&t)
    }

    pub fn verdict(&self) -> String {
        match self.violations.first() {
            None => "bound (premise verified on grid)".to_string(),
            Some(t) => format!(
                "bound (premise VIOLATED at t={t}; {} of {} grid points, max violation {:.3e})",
                self.violations.len(),
                self.points_checked,
                self.max_violation
            ),
        }
    }
}

/// Absolute slack under which a premise difference counts as rounding.
pub const PREMISE_SLACK: f64 = 1e-12;

/// Compares `1 − G(t)` (pointwise kind) or `∫ₜ^∞(1 − G)` (integrated kind)
/// with the envelope at every grid point.
pub fn envelope_premise_check(d: &ServiceDistribution, env: &TailEnvelope, grid: &[f64]) -> Result<PremiseReport> {
    validate_grid(grid)?;
    let mut violations = Vec::new();
    let mut max_violation: f64 = 0.0;
    for &t in grid {
        let truth = match env.kind {
            EnvelopeKind::PointwiseTail => d.survival_at(t),
            EnvelopeKind::IntegratedTail => d.residual_tail_at(t),
        };
        let bound = env.value(t);
        let shortfall = match env.comparison {
            Comparison::TrueAbove => bound - truth,
            Comparison::TrueBelow => truth - bound,
        };
        if shortfall > PREMISE_SLACK {
            violations.push(t);
            max_violation = max_violation.max(shortfall);
        }
    }
    Ok(PremiseReport {
        violations,
        max_violation,
        points_checked: grid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::new(1e-12, 1e-12).unwrap()
    }

    fn grid(step: f64, end: f64) -> Vec<f64> {
        let n = (end / step).round() as usize;
        (0..=n).map(|i| i as f64 * step).collect()
    }

    fn r_exp(lambda: f64, alpha: f64, t: f64) -> f64 {
        nbue_upper(lambda, alpha, t).unwrap().value
    }

    #[test]
    fn exact_exponential_tail_gives_exponential_curve() {
        let d = ServiceDistribution::exponential(1.3).unwrap();
        let env = TailEnvelope::exact_tail(&d);
        for t in [0.0, 0.4, 1.0, 3.0, 8.0] {
            let v = renewal_from_envelope(0.8, &env, t, tol()).unwrap();
            assert!((v - r_exp(0.8, 1.3, t)).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn zero_and_unit_envelopes() {
        let zero = TailEnvelope::constant(0.0, Comparison::TrueAbove).unwrap();
        let one = TailEnvelope::constant(1.0, Comparison::TrueBelow).unwrap();
        for t in [0.0, 0.5, 2.0, 7.0] {
            assert!((renewal_from_envelope(1.5, &zero, t, tol()).unwrap() - (1.0 + 1.5 * t)).abs() < 1e-11);
            assert!((renewal_from_envelope(1.5, &one, t, tol()).unwrap() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn custom_envelope_without_integral() {
        let env = TailEnvelope::custom(|v| (-v).exp(), None, Comparison::TrueAbove);
        let v = renewal_from_envelope(1.0, &env, 2.0, Tolerance::default()).unwrap();
        assert!((v - r_exp(1.0, 1.0, 2.0)).abs() < 1e-8);
    }

    #[test]
    fn envelope_monotonicity() {
        let small = TailEnvelope::pointwise_exponential(0.8, 1.5, Comparison::TrueAbove).unwrap();
        let large = TailEnvelope::pointwise_exponential(1.0, 1.0, Comparison::TrueAbove).unwrap();
        for t in grid(0.25, 6.0) {
            let a = renewal_from_envelope(1.0, &small, t, tol()).unwrap();
            let b = renewal_from_envelope(1.0, &large, t, tol()).unwrap();
            assert!(a >= b - 1e-12, "t={t}");
        }
    }

    #[test]
    fn nbue_nwue_wrap_exponential() {
        // mpmath golden for exponential(1), λ = 1, t = 1.
        let up = nbue_upper(1.0, 1.0, 1.0).unwrap();
        assert!((up.value - 1.235_298_028_540_476_6).abs() < 1e-12);
        assert_eq!(up.direction, BoundDirection::Upper);
        let lo = nwue_lower(1.0, 1.0, 1.0).unwrap();
        assert_eq!(lo.value, up.value);
        assert_eq!(lo.direction, BoundDirection::Lower);
        assert!(nbue_upper(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn dfr_reduces_to_exponential() {
        for t in grid(0.5, 6.0) {
            let v = dfr_upper(1.0, 1.0, 1.0, t, tol()).unwrap().value;
            assert!((v - r_exp(1.0, 1.0, t)).abs() <= 1e-10, "t={t}");
        }
    }

    #[test]
    fn dfr_golden() {
        // mpmath: 1.28410531147362294860114903756
        let v = dfr_upper(1.0, 1.0, 1.5, 1.0, tol()).unwrap();
        assert!((v.value - 1.284_105_311_473_623).abs() < 1e-10);
        assert!(dfr_upper(1.0, 1.0, -0.5, 1.0, tol()).is_err());
    }

    #[test]
    fn imrl_rate_examples() {
        assert!((imrl_rate(1.0, 2.0, 6.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((imrl_rate(1.0, 2.5, 10.5).unwrap() - 0.896).abs() < 1e-15);
        assert!((imrl_rate(2.0, 8.0, 48.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(imrl_rate(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn imrl_reduces_to_exponential() {
        for alpha in [0.5, 1.0, 2.0] {
            for t in grid(0.5, 6.0) {
                let v = imrl_lower(1.0, alpha, 2.0 * alpha * alpha, 6.0 * alpha.powi(3), t, tol())
                    .unwrap()
                    .value;
                assert!((v - r_exp(1.0, alpha, t)).abs() <= 1e-10, "alpha={alpha} t={t}");
            }
        }
    }

    #[test]
    fn premise_exponential_vs_own_tail() {
        let d = ServiceDistribution::exponential(1.0).unwrap();
        let g = grid(0.01, 5.0);
        for env in [
            TailEnvelope::exact_tail(&d),
            TailEnvelope::nbue(1.0).unwrap(),
            TailEnvelope::nwue(1.0).unwrap(),
            TailEnvelope::dfr(1.0, 1.0).unwrap(),
        ] {
            assert!(envelope_premise_check(&d, &env, &g).unwrap().holds(), "{env:?}");
        }
    }

    #[test]
    fn premise_deterministic_is_nbue() {
        let d = ServiceDistribution::deterministic(1.0).unwrap();
        let r = envelope_premise_check(&d, &TailEnvelope::nbue(1.0).unwrap(), &grid(0.01, 5.0)).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.verdict(), "bound (premise verified on grid)");
        // and is not NWUE
        let r = envelope_premise_check(&d, &TailEnvelope::nwue(1.0).unwrap(), &grid(0.01, 5.0)).unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn premise_h2_dfr_envelope_fails_near_origin() {
        // The tail 0.5e^{-2t} + 0.5e^{-2t/3} starts with slope -4/3, steeper than
        // the envelope's -5/4, so small t violate the pointwise premise.
        let d = ServiceDistribution::hyperexponential(vec![0.5, 0.5], vec![0.5, 1.5]).unwrap();
        let env = TailEnvelope::dfr(1.0, d.cv_squared().unwrap()).unwrap();
        let r = envelope_premise_check(&d, &env, &grid(0.01, 5.0)).unwrap();
        assert!(!r.holds());
        assert_eq!(r.violations[0], 0.01);
        assert!(r.verdict().starts_with("bound (premise VIOLATED at t=0.01"));
    }

    #[test]
    fn bound_directions() {
        assert_eq!(TailEnvelope::nbue(1.0).unwrap().bound_direction(), BoundDirection::Upper);
        assert_eq!(TailEnvelope::nwue(1.0).unwrap().bound_direction(), BoundDirection::Lower);
        assert_eq!(TailEnvelope::dfr(1.0, 2.0).unwrap().bound_direction(), BoundDirection::Upper);
        assert_eq!(TailEnvelope::imrl(1.0, 2.0, 6.0).unwrap().bound_direction(), BoundDirection::Lower);
    }
}
