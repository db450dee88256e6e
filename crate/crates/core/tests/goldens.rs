//! Reference values computed independently with mpmath at 30 digits.

use approx::assert_abs_diff_eq;
use mginf::{
    asymptotic_intercept, cycle_second_moment, dfr_upper, emptiness_probability, renewal_value, Method, QueueModel,
    ServiceDistribution as D, Tolerance,
};

fn r(lambda: f64, d: D, t: f64, method: Method) -> f64 {
    let m = QueueModel::new(lambda, d).unwrap();
    renewal_value(&m, t, method, Tolerance::default()).unwrap().value
}

#[test]
fn exponential_service() {
    for method in [Method::Closed, Method::Quadrature] {
        assert_abs_diff_eq!(r(1.0, D::exponential(1.0).unwrap(), 1.0, method), 1.235_298_028_540_476_6, epsilon = 1e-9);
        assert_abs_diff_eq!(r(1.0, D::exponential(1.0).unwrap(), 5.0, method), 2.692_109_941_977_177, epsilon = 1e-9);
    }
    let m = QueueModel::new(1.0, D::exponential(1.0).unwrap()).unwrap();
    assert_abs_diff_eq!(emptiness_probability(&m, 1.0).unwrap(), 0.531_463_605_386_615_6, epsilon = 1e-14);
    let tol = Tolerance::default();
    assert_abs_diff_eq!(cycle_second_moment(&m, tol).unwrap(), 12.601_422_596_889_264, epsilon = 1e-7);
    assert_abs_diff_eq!(asymptotic_intercept(&m, tol).unwrap().value, 0.852_708_548_167_130, epsilon = 1e-8);
}

#[test]
fn power_and_deterministic_service() {
    for method in [Method::Closed, Method::Quadrature] {
        assert_abs_diff_eq!(r(1.0, D::power(1.0).unwrap(), 1.0, method), 1.331_309_118_719_709_8, epsilon = 1e-9);
        assert_abs_diff_eq!(r(1.0, D::deterministic(1.0).unwrap(), 10.0, method), 4.310_914_970_542_981, epsilon = 1e-9);
    }
    let m = QueueModel::new(1.0, D::deterministic(1.0).unwrap()).unwrap();
    assert_abs_diff_eq!(cycle_second_moment(&m, Tolerance::default()).unwrap(), 9.341_548_540_943_21, epsilon = 1e-7);
}

#[test]
fn dfr_bound_value() {
    let b = dfr_upper(1.0, 1.0, 1.5, 1.0, Tolerance::default()).unwrap();
    assert_abs_diff_eq!(b.value, 1.284_105_311_473_623, epsilon = 1e-9);
}

#[test]
fn hyperexponential_curve() {
    let h2 = || D::hyperexponential(vec![0.5, 0.5], vec![0.5, 1.5]).unwrap();
    let expected = [(0.5, 1.100_294_013), (1.0, 1.277_735_925), (2.0, 1.664_206_159), (5.0, 2.796_195_057)];
    for (t, want) in expected {
        assert_abs_diff_eq!(r(1.0, h2(), t, Method::Auto), want, epsilon = 1e-8);
    }
}
