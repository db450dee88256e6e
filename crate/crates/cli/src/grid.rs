//! `--grid` parsing: `start:stop:step` or an explicit `t1,t2,...` list.

/// Stop is included when `stop − start` is a whole number of steps to
/// within this many steps.
const INCLUSIVE_SLACK: f64 = 1e-12;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty grid".into());
    }
    let grid = if spec.contains(':') {
        parse_range(spec)?
    } else {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("grid entry {s:?} is not a number"))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    for (i, &t) in grid.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(format!("grid point {t} must be finite and nonnegative"));
        }
        if i > 0 && t < grid[i - 1] {
            return Err(format!("grid must be ascending ({} then {t})", grid[i - 1]));
        }
    }
    Ok(grid)
}

fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, h] = parts.as_slice() else {
        return Err(format!("range grid must be start:stop:step, got {spec:?}"));
    };
    let num = |s: &str, what: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("grid {what} {s:?} is not a number"))
    };
    let (start, stop, step) = (num(a, "start")?, num(b, "stop")?, num(h, "step")?);
    if !(step > 0.0 && step.is_finite()) {
        return Err(format!("grid step must be positive, got {step}"));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(format!("grid stop {stop} must be finite and not precede start {start}"));
    }
    let steps = (stop - start) / step;
    let whole = steps.round();
    let inclusive = (steps - whole).abs() <= INCLUSIVE_SLACK * whole.max(1.0);
    let n = if inclusive { whole as usize } else { steps.floor() as usize };
    if n > 50_000_000 {
        return Err(format!("grid has too many points ({n})"));
    }
    let mut grid: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    if inclusive {
        if let Some(last) = grid.last_mut() {
            *last = stop;
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_range() {
        let g = parse_grid("0:10:0.5").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[20], 10.0);
        let g = parse_grid("0:10:0.1").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(*g.last().unwrap(), 10.0);
        assert_eq!(parse_grid("0:2:1").unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn exclusive_when_not_multiple() {
        let g = parse_grid("0:1:0.3").unwrap();
        assert_eq!(g.len(), 4);
        assert!((g[3] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn explicit_list() {
        assert_eq!(parse_grid("0.5, 2,10").unwrap(), vec![0.5, 2.0, 10.0]);
        assert_eq!(parse_grid("0").unwrap(), vec![0.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1,0.5").is_err());
        assert!(parse_grid("-1,2").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("2:1:0.1").is_err());
        assert!(parse_grid("a,b").is_err());
    }
}
