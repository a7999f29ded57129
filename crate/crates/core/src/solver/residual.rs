use serde::Serialize;

use super::certificate::OperatorConstants;
use super::config::SolverConfig;
use super::norms::RegimeNorms;
use super::picard::picard_solve;
use super::rhs::{check_data, mild_map, spectra_of, State};
use crate::besov::FieldTrajectory;
use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// `‖u - J₁(u,θ)‖` in the velocity norm.
    pub u_residual: f64,
    /// `‖θ - J₂(u,θ)‖` in the temperature norm.
    pub theta_residual: f64,
    /// `u_residual + c★ theta_residual` over `‖(u, c★θ)‖`.
    pub relative: f64,
    pub c_star: f64,
    /// Step-halving estimate of the time-quadrature error, when computed.
    pub quadrature_estimate: Option<f64>,
    /// `max(10 tol, quadrature_estimate)`.
    pub tolerance: f64,
    pub pass: bool,
}

/// Mild-form residuals of a trajectory pair on the solver grid.
pub fn residual_check(
    u: &FieldTrajectory,
    theta: &FieldTrajectory,
    u0: &Field,
    theta0: &Field,
    config: &SolverConfig,
) -> Result<ResidualReport> {
    check_data(u0, theta0)?;
    let grid = *u0.grid();
    config.validate(grid.dim())?;
    let times = config.time_grid();
    if u.times() != times.as_slice() || theta.times() != times.as_slice() {
        return Err(Error::InvalidArgument(
            "trajectories must be sampled on the solver time grid".into(),
        ));
    }
    let c_star = match config.eta {
        Some(eta) => (2.0 * eta).max(1.0),
        None => (2.0 * OperatorConstants::measure(grid, config)?.eta).max(1.0),
    };
    residual_with(u, theta, u0, theta0, config, c_star, None)
}

pub(crate) fn residual_with(
    u: &FieldTrajectory,
    theta: &FieldTrajectory,
    u0: &Field,
    theta0: &Field,
    config: &SolverConfig,
    c_star: f64,
    quadrature_estimate: Option<f64>,
) -> Result<ResidualReport> {
    let grid = *u0.grid();
    let times = config.time_grid();
    let norms = RegimeNorms::new(config.regime, grid.dim(), times.clone(), config.horizon);
    let free = State::free(&times, u0.spectrum(), theta0.spectrum())?;
    let state = State {
        u: spectra_of(u),
        theta: spectra_of(theta),
    };
    let image = mild_map(&times, &state, &free, config.buoyancy.as_slice(), config.nonlinear)?;
    let diff = state.combine(1.0, &image, -1.0)?;
    let (u_residual, theta_residual, pair_res) = norms.pair(&diff.u, &diff.theta, c_star);
    let (_, _, pair) = norms.pair(&state.u, &state.theta, c_star);
    let relative = if pair == 0.0 { pair_res } else { pair_res / pair };
    let tolerance = (10.0 * config.tol).max(quadrature_estimate.unwrap_or(0.0));
    Ok(ResidualReport {
        u_residual,
        theta_residual,
        relative,
        c_star,
        quadrature_estimate,
        tolerance,
        pass: relative <= tolerance,
    })
}

/// Relative time-quadrature error of the converged solution, from solves at
/// `M` and `2M` compared on the coarse uniform grid (second-order panels, so
/// the difference is scaled by 1/3).
pub fn quadrature_error_estimate(u0: &Field, theta0: &Field, config: &SolverConfig) -> Result<f64> {
    let coarse = picard_solve(u0, theta0, config)?;
    let mut fine_cfg = config.clone();
    fine_cfg.steps *= 2;
    fine_cfg.lambda = Some(coarse.report.certificate.lambda);
    fine_cfg.eta = Some(coarse.report.certificate.eta);
    let fine = picard_solve(u0, theta0, &fine_cfg)?;
    let c_star = coarse.report.certificate.c_star;

    let pick = |traj: &FieldTrajectory, grid_times: &[f64]| -> Vec<Spectrum> {
        grid_times
            .iter()
            .map(|t| {
                let i = traj
                    .times()
                    .iter()
                    .position(|s| (s - t).abs() <= 1e-12 * config.horizon)
                    .expect("coarse uniform times are on the fine grid");
                traj.fields()[i].spectrum().clone()
            })
            .collect()
    };
    let panels = config.steps * config.substeps;
    let uniform: Vec<f64> = (0..=panels)
        .map(|i| config.horizon * i as f64 / panels as f64)
        .collect();
    let norms = RegimeNorms::new(config.regime, u0.grid().dim(), uniform.clone(), config.horizon);
    let (cu, ct) = (pick(&coarse.u, &uniform), pick(&coarse.theta, &uniform));
    let (fu, ft) = (pick(&fine.u, &uniform), pick(&fine.theta, &uniform));
    let du: Vec<Spectrum> = cu.iter().zip(&fu).map(|(a, b)| a.combine(1.0, b, -1.0)).collect::<Result<_>>()?;
    let dt: Vec<Spectrum> = ct.iter().zip(&ft).map(|(a, b)| a.combine(1.0, b, -1.0)).collect::<Result<_>>()?;
    let (_, _, diff) = norms.pair(&du, &dt, c_star);
    let (_, _, size) = norms.pair(&fu, &ft, c_star);
    Ok(if size == 0.0 { diff / 3.0 } else { diff / (3.0 * size) })
}
