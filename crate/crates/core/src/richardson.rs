//! Extrapolation of grid results to zero spacing, assuming an error
//! expansion in even powers of the spacing.

/// Outcome of a Richardson table.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// Magnitude of the last correction applied.
    pub error_estimate: f64,
    /// True when the raw values move monotonically with refinement.
    pub monotone: bool,
}

/// Neville extrapolation to `dx = 0` in the variable `dx²`. `points` are
/// `(dx, value)` pairs ordered from coarse to fine.
pub fn extrapolate(points: &[(f64, f64)]) -> Extrapolation {
    assert!(!points.is_empty(), "need at least one point");
    if points.len() == 1 {
        return Extrapolation {
            value: points[0].1,
            error_estimate: f64::INFINITY,
            monotone: true,
        };
    }
    let x: Vec<f64> = points.iter().map(|p| p.0 * p.0).collect();
    let mut table: Vec<f64> = points.iter().map(|p| p.1).collect();
    let m = table.len();
    let mut last_step = 0.0;
    for level in 1..m {
        for i in (level..m).rev() {
            let prev = table[i];
            table[i] = (x[i - level] * table[i] - x[i] * table[i - 1]) / (x[i - level] - x[i]);
            if i == m - 1 {
                last_step = (table[i] - prev).abs();
            }
        }
    }
    let diffs: Vec<f64> = points.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let monotone = diffs.iter().all(|&d| d <= 0.0) || diffs.iter().all(|&d| d >= 0.0);
    Extrapolation {
        value: table[m - 1],
        error_estimate: last_step,
        monotone,
    }
}
