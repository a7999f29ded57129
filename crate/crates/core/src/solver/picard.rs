use serde::Serialize;

use super::certificate::{certify, OperatorConstants, SmallnessCertificate};
use super::config::SolverConfig;
use super::norms::RegimeNorms;
use super::rhs::{check_data, divergence_defect, mild_map, trajectory_of, State};
use crate::besov::FieldTrajectory;
use crate::error::Result;
use crate::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Diverged,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub u_norm: f64,
    pub theta_norm: f64,
    /// `‖u_k - u_{k-1}‖ + c★‖θ_k - θ_{k-1}‖`.
    pub difference: f64,
    /// `difference` over the product norm of the new iterate.
    pub relative_difference: f64,
    /// Ratio of successive differences; absent for the first iteration.
    pub contraction: Option<f64>,
    /// Largest `‖div u_k(t)‖₂ / ‖u_k(t)‖₂` over the time grid.
    pub divergence: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundChecks {
    pub mu1: f64,
    pub mu2: f64,
    pub u_norm: f64,
    pub theta_norm: f64,
    /// `‖u‖ ≤ 2μ₁`.
    pub u_bound: bool,
    /// `‖θ‖ ≤ 2μ₂`.
    pub theta_bound: bool,
    pub pair_norm: f64,
    pub free_pair_norm: f64,
    /// `‖(u, c★θ)‖ ≤ 4‖(x₀, c★y₀)‖`.
    pub pair_bound: bool,
}

impl BoundChecks {
    pub fn all(&self) -> bool {
        self.u_bound && self.theta_bound && self.pair_bound
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationReport {
    pub status: SolveStatus,
    pub converged: bool,
    pub certificate: SmallnessCertificate,
    pub iterations: Vec<IterationRecord>,
    pub bounds: BoundChecks,
    /// Largest contraction factor recorded.
    pub max_contraction: Option<f64>,
    /// Successive differences strictly decrease from the second iteration on.
    pub differences_decreasing: bool,
    /// The contraction factors themselves are non-increasing.
    pub factors_nonincreasing: bool,
}

impl IterationReport {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    pub fn contraction_factors(&self) -> Vec<f64> {
        self.iterations.iter().filter_map(|r| r.contraction).collect()
    }
}

#[derive(Debug, Clone)]
pub struct MildSolution {
    pub u: FieldTrajectory,
    pub theta: FieldTrajectory,
    pub report: IterationReport,
}

fn max_divergence(state: &State) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in &state.u {
        worst = worst.max(divergence_defect(s)?);
    }
    Ok(worst)
}

/// Picard iteration `(u, θ)_{k+1} = (J₁, J₂)(u_k, θ_k)` from the free evolution.
pub fn picard_solve(u0: &Field, theta0: &Field, config: &SolverConfig) -> Result<MildSolution> {
    check_data(u0, theta0)?;
    let grid = *u0.grid();
    config.validate(grid.dim())?;
    let constants = OperatorConstants::resolve(grid, config)?;
    let times = config.time_grid();
    let norms = RegimeNorms::new(config.regime, grid.dim(), times.clone(), config.horizon);
    let free = State::free(&times, u0.spectrum(), theta0.spectrum())?;
    let certificate = certify(&norms, &free, constants, u0, theta0);
    let c_star = certificate.c_star;
    let free_pair = certificate.lhs;
    let a = config.buoyancy.as_slice();

    let mut state = free.clone();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    for k in 1..=config.max_iterations {
        let next = mild_map(&times, &state, &free, a, config.nonlinear)?;
        if !next.is_finite() {
            status = SolveStatus::Diverged;
            break;
        }
        let diff = next.combine(1.0, &state, -1.0)?;
        let (_, _, difference) = norms.pair(&diff.u, &diff.theta, c_star);
        let (u_norm, theta_norm, pair) = norms.pair(&next.u, &next.theta, c_star);
        let contraction = records.last().map(|r| {
            if r.difference == 0.0 {
                0.0
            } else {
                difference / r.difference
            }
        });
        records.push(IterationRecord {
            iteration: k,
            u_norm,
            theta_norm,
            difference,
            relative_difference: if pair == 0.0 { 0.0 } else { difference / pair },
            contraction,
            divergence: max_divergence(&next)?,
        });
        state = next;
        if free_pair > 0.0 && pair > config.divergence_factor * free_pair {
            status = SolveStatus::Diverged;
            break;
        }
        if difference <= config.tol * pair {
            status = SolveStatus::Converged;
            break;
        }
    }

    let (u_norm, theta_norm, pair_norm) = norms.pair(&state.u, &state.theta, c_star);
    let data = certificate.data;
    let bounds = BoundChecks {
        mu1: data.mu1,
        mu2: data.mu2,
        u_norm,
        theta_norm,
        u_bound: u_norm <= 2.0 * data.mu1,
        theta_bound: theta_norm <= 2.0 * data.mu2,
        pair_norm,
        free_pair_norm: free_pair,
        pair_bound: pair_norm <= 4.0 * free_pair,
    };
    let factors: Vec<f64> = records.iter().filter_map(|r| r.contraction).collect();
    let max_contraction = factors.iter().copied().reduce(f64::max);
    let differences_decreasing = records
        .windows(2)
        .all(|w| w[1].difference < w[0].difference || w[0].difference == 0.0);
    let factors_nonincreasing = factors.windows(2).all(|w| w[1] <= w[0]);
    let report = IterationReport {
        status,
        converged: status == SolveStatus::Converged,
        certificate,
        iterations: records,
        bounds,
        max_contraction,
        differences_decreasing,
        factors_nonincreasing,
    };
    Ok(MildSolution {
        u: trajectory_of(&times, &state.u, config.horizon)?,
        theta: trajectory_of(&times, &state.theta, config.horizon)?,
        report,
    })
}
