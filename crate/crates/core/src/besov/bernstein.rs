use serde::Serialize;

use super::exponent::Exponent;
use super::norms::lp_norm;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::MAX_DIM;
use crate::ops;
use crate::samples::RandomEnsemble;

/// Where the spectrum of the test field lives, at scale `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectralSupport {
    /// `|ξ| ≤ r1·λ`.
    Ball { r1: f64 },
    /// `r1·λ ≤ |ξ| ≤ r2·λ`.
    Shell { r1: f64, r2: f64 },
}

impl SpectralSupport {
    fn contains(&self, radius: f64, lambda: f64) -> bool {
        let tol = 1e-12 * lambda;
        match *self {
            SpectralSupport::Ball { r1 } => radius <= r1 * lambda + tol,
            SpectralSupport::Shell { r1, r2 } => {
                radius >= r1 * lambda - tol && radius <= r2 * lambda + tol
            }
        }
    }
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in 0..=order {
        for mut rest in multi_indices(dim - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `sup_{|α| = k} ‖∂^α f‖_b / (λ^{k + n(1/a - 1/b)} ‖f‖_a)`.
pub fn bernstein_ratio(
    f: &Field,
    a: Exponent,
    b: Exponent,
    order: usize,
    support: SpectralSupport,
    lambda: f64,
) -> Result<f64> {
    if a.reciprocal() < b.reciprocal() {
        return Err(Error::ExponentRelation(format!("need a <= b, got a = {a}, b = {b}")));
    }
    let grid = f.grid();
    let spec = f.spectrum();
    let norms = grid.frequency_norms();
    let threshold = 1e-13 * spec.max_abs();
    for c in 0..f.components() {
        for (z, r) in spec.component(c).iter().zip(&norms) {
            if z.norm() > threshold && !support.contains(*r, lambda) {
                return Err(Error::SupportViolation(format!(
                    "coefficient at |xi| = {r} outside the {support:?} at lambda = {lambda}"
                )));
            }
        }
    }
    let base = lp_norm(f, a);
    if base == 0.0 {
        return Ok(0.0);
    }
    let n = grid.dim() as f64;
    let scale = lambda.powf(order as f64 + n * (a.reciprocal() - b.reciprocal()));
    let mut worst: f64 = 0.0;
    for alpha in multi_indices(grid.dim(), order) {
        debug_assert!(alpha.len() <= MAX_DIM);
        let d = ops::derivative(f, &alpha)?;
        worst = worst.max(lp_norm(&d, b));
    }
    Ok(worst / (scale * base))
}

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinReport {
    pub a: Exponent,
    pub b: Exponent,
    pub order: usize,
    pub support: SpectralSupport,
    pub lambdas: Vec<f64>,
    /// Largest ratio over the sample at each `λ`.
    pub max_ratios: Vec<f64>,
    /// Smallest ratio over the sample at each `λ` (the lower bound in the shell case).
    pub min_ratios: Vec<f64>,
    /// Least-squares slope of `ln max_ratio` against `ln λ`.
    pub log_slope: f64,
    /// Set when the ratio grows with `λ` (slope above `0.2`).
    pub grows: bool,
}

/// Ratios for random fields supported at scales `λ`.
pub fn bernstein_sweep(
    grid: crate::grid::Grid,
    a: Exponent,
    b: Exponent,
    order: usize,
    support: SpectralSupport,
    lambdas: &[f64],
    samples: u64,
    seed: u64,
) -> Result<BernsteinReport> {
    let mut max_ratios = Vec::new();
    let mut min_ratios = Vec::new();
    for &lambda in lambdas {
        let ens = match support {
            SpectralSupport::Ball { r1 } => RandomEnsemble::new(grid.dim(), r1 * lambda),
            SpectralSupport::Shell { r1, r2 } => {
                RandomEnsemble::new(grid.dim(), r2 * lambda).with_min_frequency(r1 * lambda)
            }
        };
        if ens.band >= grid.nyquist() {
            return Err(Error::InvalidArgument(format!(
                "scale {lambda} does not fit under Nyquist {}",
                grid.nyquist()
            )));
        }
        let mut hi: f64 = 0.0;
        let mut lo = f64::INFINITY;
        for trial in 0..samples {
            let f = ens.field(grid, 1, seed, trial);
            let r = bernstein_ratio(&f, a, b, order, support, lambda)?;
            hi = hi.max(r);
            lo = lo.min(r);
        }
        max_ratios.push(hi);
        min_ratios.push(lo);
    }
    let log_slope = fit_slope(
        &lambdas.iter().map(|l| l.ln()).collect::<Vec<_>>(),
        &max_ratios.iter().map(|r| r.ln()).collect::<Vec<_>>(),
    );
    Ok(BernsteinReport {
        a,
        b,
        order,
        support,
        lambdas: lambdas.to_vec(),
        max_ratios,
        min_ratios,
        log_slope,
        grows: log_slope > 0.2,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::samples::single_mode;

    #[test]
    fn pure_mode_ratio_is_one() {
        let g = Grid::periodic(2, 32).unwrap();
        let f = single_mode(g, &[4, 0], 1.0).unwrap();
        let two = Exponent::Finite(2.0);
        let r = bernstein_ratio(&f, two, two, 1, SpectralSupport::Shell { r1: 0.75, r2: 8.0 / 3.0 }, 4.0)
            .unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_is_enforced() {
        let g = Grid::periodic(2, 32).unwrap();
        let f = single_mode(g, &[9, 0], 1.0).unwrap();
        let two = Exponent::Finite(2.0);
        assert!(matches!(
            bernstein_ratio(&f, two, two, 0, SpectralSupport::Ball { r1: 1.0 }, 4.0),
            Err(Error::SupportViolation(_))
        ));
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(2, 2).len(), 3);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert!(multi_indices(3, 3).iter().all(|a| a.iter().sum::<usize>() == 3));
    }

    #[test]
    fn ball_sweep_is_bounded() {
        let g = Grid::periodic(2, 64).unwrap();
        let rep = bernstein_sweep(
            g,
            Exponent::Finite(2.0),
            Exponent::Infinity,
            1,
            SpectralSupport::Ball { r1: 1.0 },
            &[2.0, 4.0, 8.0, 16.0],
            8,
            3,
        )
        .unwrap();
        assert!(!rep.grows, "{rep:?}");
    }
}
