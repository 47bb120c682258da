//! `k`-level correlations
//! `R_k(f, x, N) = (1/N) Σ_{u ∈ U_k} Σ_{l ∈ ℤ^{k-1}} f(N(Δ(u, x) + l))`
//! for product test functions `f(y) = Π g(y_i)`.

use super::StatsError;
use crate::sampling::SequenceSample;
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_K: usize = 4;

/// One-dimensional factor `g` of a product test function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunction {
    /// Indicator of `[-w, w]`.
    Box { half_width: f64 },
    /// `max(0, 1 - |y| / w)`.
    Triangle { half_width: f64 },
    /// Linear interpolation through `(y, g(y))` points, zero outside.
    PiecewiseLinear { points: Vec<(f64, f64)> },
}

impl TestFunction {
    pub fn piecewise_linear(mut points: Vec<(f64, f64)>) -> Result<Self, StatsError> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.len() < 2 || points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(StatsError::InvalidInput("need at least two finite breakpoints".into()));
        }
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(StatsError::InvalidInput("breakpoints must be distinct".into()));
        }
        Ok(TestFunction::PiecewiseLinear { points })
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            TestFunction::Box { half_width } => {
                if y.abs() <= *half_width {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::Triangle { half_width } => (1.0 - y.abs() / half_width).max(0.0),
            TestFunction::PiecewiseLinear { points } => {
                let first = points[0].0;
                let last = points[points.len() - 1].0;
                if y < first || y > last {
                    return 0.0;
                }
                let i = points.partition_point(|p| p.0 <= y).clamp(1, points.len() - 1);
                let (x0, y0) = points[i - 1];
                let (x1, y1) = points[i];
                y0 + (y1 - y0) * (y - x0) / (x1 - x0)
            }
        }
    }

    /// Smallest `r` with `g = 0` outside `[-r, r]`.
    pub fn support(&self) -> f64 {
        match self {
            TestFunction::Box { half_width } | TestFunction::Triangle { half_width } => *half_width,
            TestFunction::PiecewiseLinear { points } => points[0].0.abs().max(points[points.len() - 1].0.abs()),
        }
    }

    /// `∫ g` over the line.
    pub fn integral_1d(&self) -> f64 {
        match self {
            TestFunction::Box { half_width } => 2.0 * half_width,
            TestFunction::Triangle { half_width } => *half_width,
            TestFunction::PiecewiseLinear { points } => points
                .windows(2)
                .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
                .sum(),
        }
    }

    /// `∫ f` over `ℝ^{k-1}`.
    pub fn integral(&self, k: usize) -> f64 {
        self.integral_1d().powi(k as i32 - 1)
    }

    fn is_valid(&self) -> bool {
        match self {
            TestFunction::Box { half_width } | TestFunction::Triangle { half_width } => {
                half_width.is_finite() && *half_width > 0.0
            }
            TestFunction::PiecewiseLinear { points } => points.len() >= 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub k: usize,
    pub value: f64,
    pub test_function: TestFunction,
    pub n: usize,
    pub integral: f64,
    pub deviation: f64,
    /// Tuples with a nonzero term.
    pub tuples: u64,
}

/// `Σ_{l ∈ {-1,0,1}} g(N(d + l))` for a difference `d ∈ (-1, 1)`.
///
/// With support below `N/2` at most one `l` contributes, so this equals the
/// full sum over `l ∈ ℤ`.
pub fn coordinate_term(g: &TestFunction, n: f64, d: f64) -> f64 {
    g.eval(n * (d - 1.0)) + g.eval(n * d) + g.eval(n * (d + 1.0))
}

/// Product of coordinate terms along the tuple `u`.
pub fn tuple_term(g: &TestFunction, values: &[f64], u: &[usize]) -> f64 {
    let n = values.len() as f64;
    let mut t = 1.0;
    for w in u.windows(2) {
        t *= coordinate_term(g, n, values[w[0]] - values[w[1]]);
    }
    t
}

/// `R_k` by enumerating only tuples whose consecutive circular gaps fall in
/// the support window. Terms are summed in lexicographic tuple order, the
/// same order as a full enumeration, so both give identical floats.
pub fn k_level_correlation(sample: &SequenceSample, k: usize, g: &TestFunction) -> Result<CorrelationResult, StatsError> {
    if !(2..=MAX_K).contains(&k) {
        return Err(StatsError::KOutOfRange(k));
    }
    if !g.is_valid() {
        return Err(StatsError::InvalidInput(format!("invalid test function {g:?}")));
    }
    let n = sample.len();
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    if g.support() >= n as f64 / 2.0 {
        return Err(StatsError::SupportTooWide {
            support: g.support(),
            n,
        });
    }
    let values: Vec<f64> = sample.values.iter().map(|v| v.rem_euclid(1.0)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    // Slack keeps every contributing neighbour despite rounding in N·d.
    let radius = g.support() / n as f64 * (1.0 + 1e-9) + 1e-12;

    let per_start: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|u1| {
            let mut tuples: Vec<(Vec<usize>, f64)> = Vec::new();
            let mut path = vec![u1];
            extend(&values, &sorted, &order, radius, k, g, &mut path, &mut tuples);
            tuples.sort_by(|a, b| a.0.cmp(&b.0));
            tuples.into_iter().map(|(_, t)| t).collect()
        })
        .collect();
    // One sequential accumulator in tuple order, as in the full enumeration.
    let mut total = 0.0;
    let mut tuples = 0;
    for t in per_start.iter().flatten() {
        total += t;
        if *t != 0.0 {
            tuples += 1;
        }
    }
    let value = total / n as f64;
    let integral = g.integral(k);
    Ok(CorrelationResult {
        k,
        value,
        test_function: g.clone(),
        n,
        integral,
        deviation: (value - integral).abs(),
        tuples,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    values: &[f64],
    sorted: &[f64],
    order: &[usize],
    radius: f64,
    k: usize,
    g: &TestFunction,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    if path.len() == k {
        out.push((path.clone(), tuple_term(g, values, path)));
        return;
    }
    let last = *path.last().expect("non-empty path");
    for next in neighbours(sorted, order, values[last], radius) {
        if path.contains(&next) {
            continue;
        }
        path.push(next);
        extend(values, sorted, order, radius, k, g, path, out);
        path.pop();
    }
}

/// Indices whose values lie within circular distance `radius` of `x`.
fn neighbours(sorted: &[f64], order: &[usize], x: f64, radius: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut push_range = |lo: f64, hi: f64| {
        let a = sorted.partition_point(|&v| v < lo);
        let b = sorted.partition_point(|&v| v <= hi);
        out.extend_from_slice(&order[a..b]);
    };
    push_range(x - radius, x + radius);
    if x - radius < 0.0 {
        push_range(x - radius + 1.0, 1.0);
    }
    if x + radius >= 1.0 {
        push_range(0.0, x + radius - 1.0);
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::uniform_sample;

    fn sample(v: &[f64]) -> SequenceSample {
        SequenceSample::from_values(v.to_vec(), "test")
    }

    #[test]
    fn three_points() {
        let r = k_level_correlation(&sample(&[0.0, 0.1, 0.5]), 2, &TestFunction::Box { half_width: 0.5 }).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.tuples, 2);
    }

    #[test]
    fn lattice_has_no_close_pairs() {
        let pts: Vec<f64> = (0..50).map(|i| i as f64 / 50.0).collect();
        let r = k_level_correlation(&sample(&pts), 2, &TestFunction::Box { half_width: 0.4 }).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn wraparound_pairs() {
        // 0.99 and 0.01 are 0.02 apart on the circle.
        let r = k_level_correlation(&sample(&[0.01, 0.99, 0.5, 0.3]), 2, &TestFunction::Box { half_width: 0.1 }).unwrap();
        assert_eq!(r.tuples, 2);
    }

    #[test]
    fn poisson_pair_correlation() {
        let r = k_level_correlation(&uniform_sample(10_000, 3), 2, &TestFunction::Box { half_width: 0.5 }).unwrap();
        assert!((r.value - 1.0).abs() < 0.1);
    }

    #[test]
    fn integrals() {
        assert_eq!(TestFunction::Box { half_width: 0.25 }.integral(3), 0.25);
        assert_eq!(TestFunction::Triangle { half_width: 0.5 }.integral(2), 0.5);
        let pl = TestFunction::piecewise_linear(vec![(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
        assert_eq!(pl.integral(2), 1.0);
        assert_eq!(pl.eval(0.5), 0.5);
        assert_eq!(pl.eval(1.5), 0.0);
    }

    #[test]
    fn guards() {
        let s = sample(&[0.1, 0.2]);
        assert!(matches!(
            k_level_correlation(&s, 5, &TestFunction::Box { half_width: 0.1 }),
            Err(StatsError::KOutOfRange(5))
        ));
        assert!(matches!(
            k_level_correlation(&s, 2, &TestFunction::Box { half_width: 1.0 }),
            Err(StatsError::SupportTooWide { .. })
        ));
    }
}
