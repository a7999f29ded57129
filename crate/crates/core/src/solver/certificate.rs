use rayon::prelude::*;
use serde::Serialize;

use super::config::SolverConfig;
use super::norms::{DataNorms, RegimeNorms};
use super::rhs::{buoyancy_linear, check_data, temperature_bilinear, velocity_bilinear, State};
use crate::error::Result;
use crate::field::{Field, Spectrum};
use crate::grid::Grid;
use crate::lp::LittlewoodPaley;
use crate::ops;
use crate::samples::RandomEnsemble;

/// Measured bounds of the Duhamel operators in the regime norms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OperatorConstants {
    /// Largest `‖B₁(x₁,x₂)‖_X / (‖x₁‖_X ‖x₂‖_X)` seen.
    pub velocity_ratio: f64,
    /// Largest `‖B₂(x,y)‖_Y / (‖x‖_X ‖y‖_Y)` seen.
    pub temperature_ratio: f64,
    /// Largest `‖L(y)‖_X / ‖y‖_Y` seen.
    pub linear_ratio: f64,
    /// `2·max(velocity_ratio, temperature_ratio)`.
    pub lambda: f64,
    /// `2·linear_ratio`.
    pub eta: f64,
    /// False when both constants were supplied and the ratios are unset.
    pub measured: bool,
    pub trials: u64,
    pub seed: u64,
}

impl OperatorConstants {
    /// Ratios over heat flows of random band-limited data on the solver grid.
    pub fn measure(grid: Grid, config: &SolverConfig) -> Result<Self> {
        config.validate(grid.dim())?;
        let times = config.time_grid();
        let norms = RegimeNorms::new(config.regime, grid.dim(), times.clone(), config.horizon);
        let ens = RandomEnsemble::new(grid.dim(), LittlewoodPaley::default().band_radius(&grid));
        let a = config.buoyancy.as_slice();
        let flow = |f: Spectrum| -> Result<Vec<Spectrum>> {
            times.iter().map(|&t| ops::heat_spectrum(&f, t)).collect()
        };
        let ratios: Vec<(f64, f64, f64)> = (0..config.constant_trials)
            .into_par_iter()
            .map(|k| -> Result<(f64, f64, f64)> {
                let solenoidal = |trial| ens.solenoidal(grid, config.seed, trial).spectrum().clone();
                let x1 = flow(solenoidal(3 * k))?;
                let x2 = flow(solenoidal(3 * k + 1))?;
                let y = flow(ens.spectrum(grid, 1, config.seed, 3 * k + 2))?;
                let (nx1, nx2, ny) = (norms.velocity(&x1), norms.velocity(&x2), norms.temperature(&y));
                let b1 = norms.velocity(&velocity_bilinear(&times, &x1, &x2)?) / (nx1 * nx2);
                let b2 = norms.temperature(&temperature_bilinear(&times, &x1, &y)?) / (nx1 * ny);
                let l = norms.velocity(&buoyancy_linear(&times, &y, a)?) / ny;
                Ok((b1, b2, l))
            })
            .collect::<Result<_>>()?;
        let max = |f: fn(&(f64, f64, f64)) -> f64| ratios.iter().map(f).fold(0.0, f64::max);
        let velocity_ratio = max(|r| r.0);
        let temperature_ratio = max(|r| r.1);
        let linear_ratio = max(|r| r.2);
        Ok(Self {
            velocity_ratio,
            temperature_ratio,
            linear_ratio,
            lambda: 2.0 * velocity_ratio.max(temperature_ratio),
            eta: 2.0 * linear_ratio,
            measured: true,
            trials: config.constant_trials,
            seed: config.seed,
        })
    }

    /// Constants taken from the config, measuring only what is missing.
    pub fn resolve(grid: Grid, config: &SolverConfig) -> Result<Self> {
        match (config.lambda, config.eta) {
            (Some(lambda), Some(eta)) => Ok(Self {
                velocity_ratio: 0.0,
                temperature_ratio: 0.0,
                linear_ratio: 0.0,
                lambda,
                eta,
                measured: false,
                trials: 0,
                seed: config.seed,
            }),
            (lambda, eta) => {
                let mut c = Self::measure(grid, config)?;
                c.lambda = lambda.unwrap_or(c.lambda);
                c.eta = eta.unwrap_or(c.eta);
                Ok(c)
            }
        }
    }
}

/// Smallness test `‖x₀‖ + c★‖y₀‖ < 1/(16λ)` on the free evolution.
#[derive(Debug, Clone, Serialize)]
pub struct SmallnessCertificate {
    pub lambda: f64,
    pub eta: f64,
    pub c_star: f64,
    /// `‖e^{tΔ}u₀‖` in the velocity norm.
    pub x0_norm: f64,
    /// `‖e^{tΔ}θ₀‖` in the temperature norm.
    pub y0_norm: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub data: DataNorms,
    pub constants: OperatorConstants,
}

impl SmallnessCertificate {
    pub(crate) fn build(constants: OperatorConstants, x0_norm: f64, y0_norm: f64, data: DataNorms) -> Self {
        let c_star = (2.0 * constants.eta).max(1.0);
        let lhs = x0_norm + c_star * y0_norm;
        let rhs = 1.0 / (16.0 * constants.lambda);
        Self {
            lambda: constants.lambda,
            eta: constants.eta,
            c_star,
            x0_norm,
            y0_norm,
            lhs,
            rhs,
            pass: lhs < rhs,
            data,
            constants,
        }
    }
}

pub(crate) fn certify(
    norms: &RegimeNorms,
    free: &State,
    constants: OperatorConstants,
    u0: &Field,
    theta0: &Field,
) -> SmallnessCertificate {
    let (x0, y0) = rayon::join(|| norms.velocity(&free.u), || norms.temperature(&free.theta));
    SmallnessCertificate::build(constants, x0, y0, norms.data(u0, theta0))
}

pub fn smallness_certificate(u0: &Field, theta0: &Field, config: &SolverConfig) -> Result<SmallnessCertificate> {
    check_data(u0, theta0)?;
    let grid = *u0.grid();
    config.validate(grid.dim())?;
    let constants = OperatorConstants::resolve(grid, config)?;
    let times = config.time_grid();
    let norms = RegimeNorms::new(config.regime, grid.dim(), times.clone(), config.horizon);
    let free = State::free(&times, u0.spectrum(), theta0.spectrum())?;
    Ok(certify(&norms, &free, constants, u0, theta0))
}
