use super::StatsError;
use crate::sampling::SequenceSample;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingReport {
    pub n: usize,
    /// Sorted gaps `N(θ_n − θ_{n−1})`, with `θ_0 = θ_N − 1`.
    pub gaps: Vec<f64>,
    pub grid: Vec<f64>,
    /// Empirical `G(s)` at each grid point.
    pub g: Vec<f64>,
    /// `sup_s |G(s) − (1 − e^{−s})|` over all `s ≥ 0`.
    pub sup_distance: f64,
    /// The same supremum restricted to the grid.
    pub grid_distance: f64,
}

/// `0, 0.1, …, 5`.
pub fn default_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 10.0).collect()
}

fn poisson_cdf(s: f64) -> f64 {
    -(-s).exp_m1()
}

/// Nearest-neighbour spacing distribution of the values mod 1.
pub fn level_spacings(sample: &SequenceSample, grid: &[f64]) -> Result<SpacingReport, StatsError> {
    let n = sample.len();
    if n < 2 {
        return Err(StatsError::InvalidInput(format!("need at least two points, have {n}")));
    }
    let mut theta: Vec<f64> = sample.values.iter().map(|v| v.rem_euclid(1.0)).collect();
    theta.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut gaps = Vec::with_capacity(n);
    gaps.push(nf * (theta[0] - (theta[n - 1] - 1.0)));
    for w in theta.windows(2) {
        gaps.push(nf * (w[1] - w[0]));
    }
    gaps.sort_by(f64::total_cmp);

    let g: Vec<f64> = grid
        .iter()
        .map(|&s| gaps.partition_point(|&x| x <= s) as f64 / nf)
        .collect();
    let grid_distance = grid
        .iter()
        .zip(&g)
        .map(|(&s, &gv)| (gv - poisson_cdf(s)).abs())
        .fold(0.0, f64::max);
    // G jumps at each gap; the supremum is attained at a jump.
    let mut sup_distance: f64 = 0.0;
    for (i, &x) in gaps.iter().enumerate() {
        let f = poisson_cdf(x);
        sup_distance = sup_distance.max(((i + 1) as f64 / nf - f).abs()).max((f - i as f64 / nf).abs());
    }
    Ok(SpacingReport {
        n,
        gaps,
        grid: grid.to_vec(),
        g,
        sup_distance,
        grid_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::uniform_sample;

    #[test]
    fn three_points_with_wraparound() {
        let s = SequenceSample::from_values(vec![0.1, 0.4, 0.7], "test");
        let r = level_spacings(&s, &[1.0]).unwrap();
        assert!((r.g[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.gaps[2] - 1.2).abs() < 1e-12);
        let unscaled: f64 = r.gaps.iter().sum::<f64>() / 3.0;
        assert!((unscaled - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equidistant_points() {
        let pts: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
        let r = level_spacings(&SequenceSample::from_values(pts, "lattice"), &[0.5, 0.999, 1.0, 2.0]).unwrap();
        assert_eq!(r.g, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn poisson_spacings() {
        let r = level_spacings(&uniform_sample(10_000, 8), &default_grid()).unwrap();
        assert!(r.sup_distance <= 0.03);
        assert!(r.g.windows(2).all(|w| w[0] <= w[1]));
    }
}
