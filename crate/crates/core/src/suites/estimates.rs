use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::Check;
use crate::besov::{bernstein_sweep, BernsteinReport, Exponent, SpectralSupport};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::paraproduct::{bilinear_stability, BilinearEstimateSpec, Lemma, StabilityReport};

#[derive(Debug, Clone, Serialize)]
pub struct BilinearSuiteReport {
    pub suite: String,
    pub dim: usize,
    pub points: Vec<usize>,
    pub seed: u64,
    pub trials: u64,
    pub growth_limit: f64,
    pub lemma: Vec<Lemma>,
    /// Largest sampled ratio per lemma, one entry per resolution.
    pub ratios: BTreeMap<String, Vec<f64>>,
    pub estimates: Vec<StabilityReport>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Sampled product constants for each lemma at every resolution in `points`;
/// the largest ratio may grow by at most `growth` per refinement.
pub fn bilinear_suite(
    lemmas: &[Lemma],
    dim: usize,
    points: &[usize],
    trials: u64,
    seed: u64,
    growth: f64,
) -> Result<BilinearSuiteReport> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("stability needs at least two resolutions".into()));
    }
    let reports: Vec<StabilityReport> = lemmas
        .par_iter()
        .map(|&lemma| bilinear_stability(&BilinearEstimateSpec::standard(lemma, dim, trials, seed), points, growth))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for r in &reports {
        let worst = r
            .resolutions
            .windows(2)
            .map(|w| if w[0].max_ratio > 0.0 { w[1].max_ratio / w[0].max_ratio } else { 1.0 })
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("lemma_{}_growth", r.lemma), worst, growth));
        let last = r.resolutions.last().expect("two resolutions");
        checks.push(Check::at_least(format!("lemma_{}_finite", r.lemma), last.max_ratio.is_finite() as u8 as f64, 1.0));
    }
    let ratios = reports
        .iter()
        .map(|r| (r.lemma.to_string(), r.resolutions.iter().map(|e| e.max_ratio).collect()))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(BilinearSuiteReport {
        suite: "bilinear".into(),
        dim,
        points: points.to_vec(),
        seed,
        trials,
        growth_limit: growth,
        lemma: lemmas.to_vec(),
        ratios,
        estimates: reports,
        checks,
        pass,
    })
}

/// One Bernstein configuration: `(a, b, order, support)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BernsteinCase {
    pub name: &'static str,
    pub a: Exponent,
    pub b: Exponent,
    pub order: usize,
    pub support: SpectralSupport,
}

pub const SHELL: SpectralSupport = SpectralSupport::Shell { r1: 0.75, r2: 2.0 };

pub fn bernstein_family() -> Vec<BernsteinCase> {
    let (one, two, inf) = (Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity);
    let ball = SpectralSupport::Ball { r1: 1.0 };
    vec![
        BernsteinCase { name: "ball_2_inf_order1", a: two, b: inf, order: 1, support: ball },
        BernsteinCase { name: "ball_2_2_order1", a: two, b: two, order: 1, support: ball },
        BernsteinCase { name: "ball_1_inf_order0", a: one, b: inf, order: 0, support: ball },
        BernsteinCase { name: "shell_2_2_order1", a: two, b: two, order: 1, support: SHELL },
        BernsteinCase { name: "shell_inf_inf_order1", a: inf, b: inf, order: 1, support: SHELL },
    ]
}

/// Dyadic scales `2, 4, 8, ...` whose widest band stays under Nyquist.
pub fn bernstein_scales(grid: &Grid) -> Vec<f64> {
    let unit = grid.frequency_unit();
    (1..)
        .map(|j| (1u64 << j) as f64 * unit)
        .take_while(|l| 2.0 * l < grid.nyquist())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinSuiteReport {
    pub suite: String,
    pub dim: usize,
    pub points: usize,
    pub seed: u64,
    pub samples: u64,
    pub lambdas: Vec<f64>,
    pub cases: Vec<String>,
    pub sweeps: Vec<BernsteinReport>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Upper ratios must not grow with `λ` (log slope at most 0.2); on shells the
/// smallest ratio must stay within a factor 2 of its value at the first scale.
pub fn bernstein_suite(dim: usize, points: usize, seed: u64, samples: u64) -> Result<BernsteinSuiteReport> {
    let grid = Grid::periodic(dim, points)?;
    let lambdas = bernstein_scales(&grid);
    if lambdas.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "N={points} leaves fewer than two dyadic scales under Nyquist"
        )));
    }
    let family = bernstein_family();
    let sweeps: Vec<BernsteinReport> = family
        .par_iter()
        .map(|c| bernstein_sweep(grid, c.a, c.b, c.order, c.support, &lambdas, samples, seed))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for (c, s) in family.iter().zip(&sweeps) {
        checks.push(Check::at_most(format!("{}_upper_slope", c.name), s.log_slope, 0.2));
        if matches!(c.support, SpectralSupport::Shell { .. }) {
            // the lower constant must not drift to zero as λ grows
            let floor = s.min_ratios.iter().copied().fold(f64::INFINITY, f64::min);
            checks.push(Check::at_least(format!("{}_lower_floor", c.name), floor / s.min_ratios[0], 0.5));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(BernsteinSuiteReport {
        suite: "bernstein".into(),
        dim,
        points,
        seed,
        samples,
        lambdas,
        cases: family.iter().map(|c| c.name.to_string()).collect(),
        sweeps,
        checks,
        pass,
    })
}
