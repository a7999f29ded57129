use rayon::prelude::*;
use serde::Serialize;

use super::certificate::OperatorConstants;
use super::config::SolverConfig;
use super::picard::{picard_solve, SolveStatus};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::samples::{single_mode, taylor_green};

/// Data family `u₀ = A_u·TG`, `θ₀ = A_θ cos(k·x)`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub amplitudes_u: Vec<f64>,
    pub amplitudes_theta: Vec<f64>,
    pub theta_mode: Vec<i64>,
}

impl SweepSpec {
    pub fn data(&self, grid: Grid, amp_u: f64, amp_theta: f64) -> Result<(Field, Field)> {
        Ok((taylor_green(grid, amp_u)?, single_mode(grid, &self.theta_mode, amp_theta)?))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub amp_u: f64,
    pub amp_theta: f64,
    pub certificate_pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub converged: bool,
    pub status: SolveStatus,
    pub iterations: usize,
    pub u_norm: f64,
    pub theta_norm: f64,
    pub u_bound: bool,
    pub theta_bound: bool,
    pub pair_bound: bool,
}

/// Solves every amplitude pair with constants measured once.
pub fn sweep(grid: Grid, spec: &SweepSpec, config: &SolverConfig) -> Result<(OperatorConstants, Vec<SweepRow>)> {
    if spec.amplitudes_u.is_empty() || spec.amplitudes_theta.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one amplitude on each axis".into()));
    }
    config.validate(grid.dim())?;
    let constants = OperatorConstants::resolve(grid, config)?;
    let mut cfg = config.clone();
    cfg.lambda = Some(constants.lambda);
    cfg.eta = Some(constants.eta);
    let pairs: Vec<(f64, f64)> = spec
        .amplitudes_u
        .iter()
        .flat_map(|&a| spec.amplitudes_theta.iter().map(move |&b| (a, b)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(amp_u, amp_theta)| -> Result<SweepRow> {
            let (u0, theta0) = spec.data(grid, amp_u, amp_theta)?;
            let sol = picard_solve(&u0, &theta0, &cfg)?;
            let r = &sol.report;
            Ok(SweepRow {
                amp_u,
                amp_theta,
                certificate_pass: r.certificate.pass,
                lhs: r.certificate.lhs,
                rhs: r.certificate.rhs,
                converged: r.converged,
                status: r.status,
                iterations: r.iteration_count(),
                u_norm: r.bounds.u_norm,
                theta_norm: r.bounds.theta_norm,
                u_bound: r.bounds.u_bound,
                theta_bound: r.bounds.theta_bound,
                pair_bound: r.bounds.pair_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((constants, rows))
}
