use serde::Serialize;

use super::config::SolverConfig;
use super::picard::{picard_solve, MildSolution};
use super::rhs::check_data;
use crate::error::Result;
use crate::field::{Field, Spectrum};
use crate::grid::MAX_DIM;
use crate::ops::{gradient_spectrum, product_spectrum, project_spectrum};

/// Refinement of the oracle step relative to the solver step.
pub const ORACLE_REFINEMENT: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    /// `‖(u, θ)_mild - (u, θ)_oracle‖₂ / ‖(u, θ)_oracle‖₂` at `t = T`.
    pub relative_error: f64,
    pub u_error: f64,
    pub theta_error: f64,
    pub steps: usize,
    /// False when the stepper blew up; the error is then infinite.
    pub stable: bool,
}

/// Advective terms `P(θa - (u·∇)u)` and `-(u·∇θ)`, formed from gradients.
fn tendencies(u: &Spectrum, theta: &Spectrum, a: &[f64], nonlinear: bool) -> Result<(Spectrum, Spectrum)> {
    let grid = *u.grid();
    let dim = grid.dim();
    let n = grid.len();
    let mut force = Spectrum::zeros(grid, dim);
    for (i, ai) in a.iter().enumerate() {
        for (z, t) in force.component_mut(i).iter_mut().zip(theta.component(0)) {
            *z = t * ai;
        }
    }
    let mut heat_src = Spectrum::zeros(grid, 1);
    if nonlinear {
        let comps: Vec<Spectrum> = (0..dim)
            .map(|j| Spectrum::new(grid, 1, u.component(j).to_vec()))
            .collect::<Result<_>>()?;
        let mut adv = Spectrum::zeros(grid, dim);
        for i in 0..dim {
            let grad = gradient_spectrum(&comps[i]);
            for j in 0..dim {
                let dj = Spectrum::new(grid, 1, grad.component(j).to_vec())?;
                let prod = product_spectrum(&comps[j], &dj)?;
                for (z, p) in adv.component_mut(i).iter_mut().zip(prod.component(0)) {
                    *z += p;
                }
            }
        }
        force = force.combine(1.0, &adv, -1.0)?;
        let grad_t = gradient_spectrum(theta);
        for j in 0..dim {
            let dj = Spectrum::new(grid, 1, grad_t.component(j).to_vec())?;
            let prod = product_spectrum(&comps[j], &dj)?;
            for (z, p) in heat_src.coeffs_mut()[..n].iter_mut().zip(prod.component(0)) {
                *z -= p;
            }
        }
    }
    Ok((project_spectrum(&force)?, heat_src))
}

/// Exponential Euler `f ← e^{-|ξ|²h} f + φ(h) g` with `φ(h) = (1 - e^{-|ξ|²h})/|ξ|²`.
fn step(f: &mut Spectrum, g: &Spectrum, decay: &[f64], phi: &[f64]) {
    let n = decay.len();
    for c in 0..f.components() {
        let src = &g.coeffs()[c * n..(c + 1) * n];
        for (k, z) in f.component_mut(c).iter_mut().enumerate() {
            *z = *z * decay[k] + src[k] * phi[k];
        }
    }
}

fn distance(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    Ok(a.combine(1.0, b, -1.0)?.l2_norm())
}

/// First-order exponential integrator of the differential system with
/// `ORACLE_REFINEMENT·M` uniform steps, compared with a mild solution at `T`.
pub fn oracle_compare_with(
    solution: &MildSolution,
    u0: &Field,
    theta0: &Field,
    config: &SolverConfig,
) -> Result<OracleReport> {
    check_data(u0, theta0)?;
    let grid = *u0.grid();
    let steps = ORACLE_REFINEMENT * config.steps;
    let h = config.horizon / steps as f64;
    let mut decay = Vec::with_capacity(grid.len());
    let mut phi = Vec::with_capacity(grid.len());
    for xi in grid.frequencies() {
        let l: f64 = xi[..grid.dim().min(MAX_DIM)].iter().map(|v| v * v).sum();
        decay.push((-l * h).exp());
        phi.push(if l == 0.0 { h } else { -(-l * h).exp_m1() / l });
    }
    let a = config.buoyancy.as_slice();
    let mut u = u0.spectrum().clone();
    let mut theta = theta0.spectrum().clone();
    let start = (u.l2_norm().powi(2) + theta.l2_norm().powi(2)).sqrt();
    let mut stable = true;
    for _ in 0..steps {
        let (gu, gt) = tendencies(&u, &theta, a, config.nonlinear)?;
        step(&mut u, &gu, &decay, &phi);
        step(&mut theta, &gt, &decay, &phi);
        let size = (u.l2_norm().powi(2) + theta.l2_norm().powi(2)).sqrt();
        if !size.is_finite() || (start > 0.0 && size > 1e6 * start) {
            stable = false;
            break;
        }
    }
    if !stable {
        return Ok(OracleReport {
            relative_error: f64::INFINITY,
            u_error: f64::INFINITY,
            theta_error: f64::INFINITY,
            steps,
            stable,
        });
    }
    let mu = solution.u.last().spectrum();
    let mt = solution.theta.last().spectrum();
    let u_error = distance(mu, &u)?;
    let theta_error = distance(mt, &theta)?;
    let size = (u.l2_norm().powi(2) + theta.l2_norm().powi(2)).sqrt();
    let total = (u_error.powi(2) + theta_error.powi(2)).sqrt();
    let scale = grid.volume().sqrt();
    Ok(OracleReport {
        relative_error: if size == 0.0 { total } else { total / size },
        u_error: u_error * scale,
        theta_error: theta_error * scale,
        steps,
        stable,
    })
}

/// Solves by Picard iteration, then runs the oracle on the same data.
pub fn oracle_compare(u0: &Field, theta0: &Field, config: &SolverConfig) -> Result<OracleReport> {
    let sol = picard_solve(u0, theta0, config)?;
    oracle_compare_with(&sol, u0, theta0, config)
}
