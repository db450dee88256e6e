//! Adaptive one-dimensional quadrature.
//!
//! The integrator is a globally adaptive Gauss-Kronrod scheme: the 15-point
//! Kronrod rule gives the estimate, the embedded 7-point Gauss rule gives the
//! error, and the panel with the largest error is bisected until the summed
//! error meets `max(abs_tol, rel_tol * |value|)`. Error scaling follows the
//! QUADPACK heuristics, so smooth integrands are not over-refined.
//!
//! [`integrate_cumulative`] walks an ascending grid once and returns the
//! running integral at every grid point, which is what the renewal curve needs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance for every integral in the crate.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default relative tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

const MAX_SUBDIVISIONS: usize = 4000;
const KRONROD_POINTS: usize = 15;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub const ZERO: QuadratureResult = QuadratureResult {
        value: 0.0,
        abs_error_estimate: 0.0,
        evaluations: 0,
    };
}

/// Absolute and relative tolerance pair.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: DEFAULT_ABS_TOL,
            rel: DEFAULT_REL_TOL,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs > 0.0 && abs.is_finite()) || !(rel > 0.0 && rel.is_finite()) {
            return Err(Error::Argument(format!(
                "tolerances must be positive and finite (abs = {abs}, rel = {rel})"
            )));
        }
        Ok(Tolerance { abs, rel })
    }

    pub fn absolute(abs: f64) -> Result<Self> {
        Tolerance::new(abs, DEFAULT_REL_TOL)
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken on the left end so the refinement order is reproducible.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Applies the 15-point Kronrod rule on `[a, b]`.
///
/// Returns the panel together with a flag telling whether its error is already
/// at the rounding floor, in which case bisecting it further is pointless.
fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(Panel, bool)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    let at_floor = error <= floor || half.abs() <= 4.0 * f64::EPSILON * center.abs().max(f64::MIN_POSITIVE);
    Ok((Panel { a, b, value, error }, at_floor))
}

/// Integrates `f` over `[a, b]`.
///
/// Fails with [`Error::NonFinite`] when `f` returns a non-finite value and with
/// [`Error::Accuracy`] (carrying the best estimate) when the subdivision limit
/// is reached before the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_with_breaks(f, a, b, &[], Tolerance::new(abs_tol, rel_tol)?)
}

/// Like [`integrate`], but starts from panels split at `breaks`, the known
/// kinks or jumps of the integrand. Break points outside `(a, b)` are ignored.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Argument(format!(
            "integration interval [{a}, {b}] must be finite and ordered"
        )));
    }
    if a == b {
        return Ok(QuadratureResult::ZERO);
    }

    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    let mut evaluations = 0;
    for w in cuts.windows(2) {
        let (panel, at_floor) = kronrod(&mut f, w[0], w[1])?;
        evaluations += KRONROD_POINTS;
        if at_floor {
            settled_value += panel.value;
            settled_error += panel.error;
        } else {
            heap.push(panel);
        }
    }

    let mut subdivisions = 0;
    loop {
        let (active_value, active_error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        let value = settled_value + active_value;
        let error = settled_error + active_error;
        if error <= tol.target(value) || heap.is_empty() {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
            });
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Accuracy {
                best: value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (panel, at_floor) = kronrod(&mut f, lo, hi)?;
            evaluations += KRONROD_POINTS;
            if at_floor {
                settled_value += panel.value;
                settled_error += panel.error;
            } else {
                heap.push(panel);
            }
        }
        subdivisions += 1;
    }
}

/// Running integral `F(t_i) = ∫₀^{t_i} f` for an ascending grid starting at
/// `t_0 ≥ 0`.
///
/// Each grid gap is integrated once, so the work is linear in the grid length.
/// The absolute tolerance is shared among panels in proportion to their width.
pub fn integrate_cumulative<F: FnMut(f64) -> f64>(
    f: F,
    grid: &[f64],
    abs_tol: f64,
) -> Result<Vec<QuadratureResult>> {
    integrate_cumulative_with_breaks(f, grid, &[], Tolerance::absolute(abs_tol)?)
}

pub fn integrate_cumulative_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: &[f64],
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Vec<QuadratureResult>> {
    validate_grid(grid)?;
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    let span = last;
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = QuadratureResult::ZERO;
    let mut prev = 0.0;
    for &t in grid {
        if t > prev {
            let share = Tolerance {
                abs: tol.abs * (t - prev) / span,
                rel: tol.rel,
            };
            let panel = integrate_with_breaks(&mut f, prev, t, breaks, share)?;
            acc.value += panel.value;
            acc.abs_error_estimate += panel.abs_error_estimate;
            acc.evaluations += panel.evaluations;
        }
        out.push(acc);
        prev = t;
    }
    Ok(out)
}

/// Checks that a grid is finite, nonnegative and nondecreasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (i, &t) in grid.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Argument(format!(
                "grid point {i} ({t}) must be finite and nonnegative"
            )));
        }
        if i > 0 && t < prev {
            return Err(Error::Argument(format!(
                "grid must be ascending: point {i} ({t}) follows {prev}"
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Smallest horizon of the form `start * 2^k` at which `bound` drops to
/// `threshold` or below. `bound` must be nonincreasing.
///
/// Fails with [`Error::Accuracy`] once the horizon passes `cap`.
pub fn truncation_horizon<B: Fn(f64) -> f64>(
    bound: B,
    start: f64,
    threshold: f64,
    cap: f64,
) -> Result<f64> {
    let mut horizon = if start > 0.0 && start.is_finite() {
        start
    } else {
        1.0
    };
    loop {
        let b = bound(horizon);
        if b <= threshold {
            return Ok(horizon);
        }
        if horizon > cap {
            return Err(Error::Accuracy {
                best: f64::NAN,
                error_estimate: b,
            });
        }
        horizon *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn polynomial() {
        let r = integrate(|v| v * v, 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!(close(r.value, 1.0 / 3.0, 1e-15));
        assert!(r.evaluations >= KRONROD_POINTS);
    }

    #[test]
    fn empty_interval_is_exact_zero() {
        let r = integrate(|v| v.exp(), 2.0, 2.0, 1e-10, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.abs_error_estimate, 0.0);
    }

    #[test]
    fn double_exponential() {
        // mpmath, 30 digits: 1.91322032270309450968251372784
        let r = integrate(|u| (-u).exp().exp(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!(close(r.value, 1.913_220_322_703_094_5, 1e-12));
    }

    #[test]
    fn reversed_interval_is_rejected() {
        assert!(matches!(
            integrate(|v| v, 1.0, 0.0, 1e-10, 1e-10),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn nonfinite_reports_abscissa() {
        let err = integrate(|v| if v > 0.5 { f64::NAN } else { v }, 0.0, 1.0, 1e-10, 1e-10)
            .unwrap_err();
        match err {
            Error::NonFinite { at } => assert!(at > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn subdivision_limit_reports_best_estimate() {
        // 1/sqrt is integrable but the requested tolerance is below reach.
        let err = integrate(|v| 1.0 / v.sqrt().max(1e-300), 0.0, 1.0, 1e-300, 1e-300);
        match err {
            Err(Error::Accuracy { best, .. }) => assert!((best - 2.0).abs() < 1e-3),
            Ok(r) => assert!((r.value - 2.0).abs() <= r.abs_error_estimate.max(1e-12)),
            Err(other) => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn breaks_handle_jumps() {
        let step = |v: f64| if v < 1.0 { 1.0 } else { 0.0 };
        let r = integrate_with_breaks(step, 0.0, 2.0, &[1.0], Tolerance::default()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = integrate(step, 0.0, 2.0, 1e-10, 1e-10).unwrap();
        assert!(close(r.value, 1.0, 1e-10));
    }

    #[test]
    fn cumulative_constant() {
        let out = integrate_cumulative(|_| 1.0, &[0.0, 1.0, 2.0], 1e-12).unwrap();
        let values: Vec<f64> = out.iter().map(|r| r.value).collect();
        assert_eq!(values.len(), 3);
        for (v, e) in values.iter().zip([0.0, 1.0, 2.0]) {
            assert!(close(*v, e, 1e-14));
        }
    }

    #[test]
    fn cumulative_deterministic_tail() {
        let tail = |v: f64| if v < 1.0 { 1.0 } else { 0.0 };
        let out = integrate_cumulative_with_breaks(
            tail,
            &[0.5, 1.0, 2.0],
            &[1.0],
            Tolerance::absolute(1e-12).unwrap(),
        )
        .unwrap();
        let values: Vec<f64> = out.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![0.5, 1.0, 1.0]);
    }

    #[test]
    fn cumulative_matches_single_integral() {
        let f = |u: f64| (-u).exp() * (1.0 + u.sin());
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let out = integrate_cumulative(f, &grid, 1e-10).unwrap();
        let last = out.last().unwrap();
        let whole = integrate(f, 0.0, 10.0, 1e-10, 1e-10).unwrap();
        assert!(
            (last.value - whole.value).abs()
                <= last.abs_error_estimate + whole.abs_error_estimate + 1e-12
        );
    }

    #[test]
    fn cumulative_rejects_descending_grid() {
        assert!(integrate_cumulative(|_| 1.0, &[1.0, 0.5], 1e-10).is_err());
        assert!(integrate_cumulative(|_| 1.0, &[-1.0], 1e-10).is_err());
    }

    #[test]
    fn horizon_doubles_until_bound_met() {
        let t = truncation_horizon(|t| (-t).exp(), 1.0, 1e-11, 1e6).unwrap();
        assert_eq!(t, 32.0);
        assert!(truncation_horizon(|_| 1.0, 1.0, 1e-11, 1e3).is_err());
    }
}
