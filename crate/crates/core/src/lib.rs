//! Busy-cycle renewal function of the M|G|∞ queue.
//!
//! `R(t)` is the expected number of busy periods that begin in `[0, t]` when
//! the time origin is the start of a busy period. This crate evaluates it in
//! closed form for deterministic, power, exponential and ferreira service,
//! by adaptive quadrature for any service law, and by reliability-class
//! bounds when only the class of the service law is known. A discrete-event
//! simulator gives an independent estimate of every analytic value.
//!
//! ```
//! use mginf::{renewal_value, Method, QueueModel, ServiceDistribution, Tolerance};
//!
//! let m = QueueModel::new(1.0, ServiceDistribution::deterministic(1.0)?)?;
//! let r = renewal_value(&m, 2.0, Method::Auto, Tolerance::default())?;
//! assert!((r.value - (1.0 + (-1f64).exp())).abs() < 1e-12);
//! # Ok::<(), mginf::Error>(())
//! ```

pub mod classbounds;
pub mod dist;
pub mod error;
pub mod mc;
pub mod numerics;
pub mod renewal;
mod special;

pub use classbounds::{
    bound_curve, dfr_upper, envelope_premise_check, imrl_lower, nbue_upper, nwue_lower,
    renewal_from_envelope, BoundClass, BoundDirection, ClassBound, PremiseReport, TailEnvelope,
};
pub use dist::{parse_dist, Family, Law, QueueModel, ServiceDistribution};
pub use error::{Error, Result};
pub use mc::{cycle_statistics, estimate_curve, estimate_curve_with_threads, SimulationEstimate};
pub use numerics::{integrate, integrate_cumulative, QuadratureResult, Tolerance};
pub use renewal::{
    asymptotic_intercept, cycle_mean, cycle_moments, cycle_second_moment, cycle_transform,
    elementary_bounds, emptiness_probability, renewal_curve, renewal_derivative, renewal_value,
    CycleMoments, Method, PointMethod, RenewalCurve, RenewalValue,
};
