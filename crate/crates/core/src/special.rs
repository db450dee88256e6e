/// `Σ_{n≥1} xⁿ / (n·n!)`, i.e. `Ei(x) − ln x − γ` for `x > 0`.
///
/// Entire and free of the logarithmic singularity, so differences
/// `Ei(a) − Ei(b)` with the logarithm handled analytically stay accurate as
/// `b → 0`. All terms are positive for `x ≥ 0`, so the sum has no cancellation.
pub(crate) fn ein_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = 1.0; // xⁿ / n!
    let mut sum = 0.0;
    let mut n = 1.0;
    loop {
        term *= x / n;
        let add = term / n;
        sum += add;
        if add.abs() <= f64::EPSILON * 0.25 * sum.abs() && n > x.abs() {
            return sum;
        }
        n += 1.0;
    }
}
