use rayon::prelude::*;

use super::config::SolverConfig;
use super::duhamel::duhamel_spectra;
use crate::besov::FieldTrajectory;
use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};
use crate::ops::{self, flux_divergence, project_spectrum};

/// Largest tolerated `‖div u‖₂ / ‖u‖₂` for initial velocity data.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

/// `‖div u‖₂ / ‖u‖₂` measured on the coefficients (0 for the zero field).
pub fn divergence_defect(u: &Spectrum) -> Result<f64> {
    let norm = u.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(ops::divergence_spectrum(u)?.l2_norm() / norm)
}

pub(crate) fn check_data(u0: &Field, theta0: &Field) -> Result<()> {
    let grid = u0.grid();
    let dim = grid.dim();
    if !(2..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "the coupled system needs dimension 2 or 3, got {dim}"
        )));
    }
    if u0.components() != dim {
        return Err(Error::ComponentMismatch(format!(
            "velocity needs {dim} components, got {}",
            u0.components()
        )));
    }
    if theta0.components() != 1 {
        return Err(Error::ComponentMismatch(format!(
            "temperature must be scalar, got {} components",
            theta0.components()
        )));
    }
    if theta0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let defect = divergence_defect(u0.spectrum())?;
    if defect > DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree(defect));
    }
    Ok(())
}

/// `θa` as a vector spectrum.
fn buoyancy_force(theta: &Spectrum, a: &[f64]) -> Result<Spectrum> {
    let grid = *theta.grid();
    let mut coeffs = Vec::with_capacity(a.len() * grid.len());
    for &ai in a {
        coeffs.extend(theta.component(0).iter().map(|z| z * ai));
    }
    Spectrum::new(grid, a.len(), coeffs)
}

fn negate(s: Spectrum) -> Spectrum {
    s.scaled(-1.0)
}

/// Time-by-time sources of the two Duhamel maps:
/// `P(θa - ∇·(u⊗u))` and `-∇·(uθ)`.
fn sources(u: &Spectrum, theta: &Spectrum, a: &[f64], nonlinear: bool) -> Result<(Spectrum, Spectrum)> {
    let force = buoyancy_force(theta, a)?;
    if !nonlinear {
        return Ok((project_spectrum(&force)?, Spectrum::zeros(*theta.grid(), 1)));
    }
    let g1 = project_spectrum(&force.combine(1.0, &flux_divergence(u, u)?, -1.0)?)?;
    let g2 = negate(flux_divergence(u, theta)?);
    Ok((g1, g2))
}

/// State of the iteration: both unknowns on the solver time grid.
#[derive(Debug, Clone)]
pub(crate) struct State {
    pub u: Vec<Spectrum>,
    pub theta: Vec<Spectrum>,
}

impl State {
    pub fn free(times: &[f64], u0: &Spectrum, theta0: &Spectrum) -> Result<Self> {
        let evolve = |f: &Spectrum| -> Result<Vec<Spectrum>> {
            times.par_iter().map(|&t| ops::heat_spectrum(f, t)).collect()
        };
        Ok(State {
            u: evolve(u0)?,
            theta: evolve(theta0)?,
        })
    }

    pub fn combine(&self, a: f64, other: &State, b: f64) -> Result<State> {
        let mix = |x: &[Spectrum], y: &[Spectrum]| -> Result<Vec<Spectrum>> {
            x.iter().zip(y).map(|(p, q)| p.combine(a, q, b)).collect()
        };
        Ok(State {
            u: mix(&self.u, &other.u)?,
            theta: mix(&self.theta, &other.theta)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.u
            .iter()
            .chain(&self.theta)
            .all(|s| s.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

/// `(J₁, J₂)` of the current state: free evolution plus the Duhamel terms.
pub(crate) fn mild_map(times: &[f64], state: &State, free: &State, a: &[f64], nonlinear: bool) -> Result<State> {
    let src: Vec<(Spectrum, Spectrum)> = state
        .u
        .par_iter()
        .zip(state.theta.par_iter())
        .map(|(u, th)| sources(u, th, a, nonlinear))
        .collect::<Result<_>>()?;
    let (g1, g2): (Vec<Spectrum>, Vec<Spectrum>) = src.into_iter().unzip();
    let (i1, i2) = rayon::join(
        || duhamel_spectra(times, &g1, times),
        || duhamel_spectra(times, &g2, times),
    );
    let add = |f: &[Spectrum], i: Vec<Spectrum>| -> Result<Vec<Spectrum>> {
        f.iter().zip(&i).map(|(x, y)| x.combine(1.0, y, 1.0)).collect()
    };
    Ok(State {
        u: add(&free.u, i1?)?,
        theta: add(&free.theta, i2?)?,
    })
}

/// `B₁(x₁, x₂) = -∫ e^{(t-s)Δ} P∇·(x₁⊗x₂) ds`.
pub(crate) fn velocity_bilinear(times: &[f64], x1: &[Spectrum], x2: &[Spectrum]) -> Result<Vec<Spectrum>> {
    let g: Vec<Spectrum> = x1
        .par_iter()
        .zip(x2.par_iter())
        .map(|(a, b)| Ok(negate(project_spectrum(&flux_divergence(a, b)?)?)))
        .collect::<Result<_>>()?;
    duhamel_spectra(times, &g, times)
}

/// `B₂(x, y) = -∫ e^{(t-s)Δ} ∇·(xy) ds`.
pub(crate) fn temperature_bilinear(times: &[f64], x: &[Spectrum], y: &[Spectrum]) -> Result<Vec<Spectrum>> {
    let g: Vec<Spectrum> = x
        .par_iter()
        .zip(y.par_iter())
        .map(|(a, b)| Ok(negate(flux_divergence(a, b)?)))
        .collect::<Result<_>>()?;
    duhamel_spectra(times, &g, times)
}

/// `L(y) = ∫ e^{(t-s)Δ} P(ya) ds`.
pub(crate) fn buoyancy_linear(times: &[f64], y: &[Spectrum], a: &[f64]) -> Result<Vec<Spectrum>> {
    let g: Vec<Spectrum> = y
        .par_iter()
        .map(|th| project_spectrum(&buoyancy_force(th, a)?))
        .collect::<Result<_>>()?;
    duhamel_spectra(times, &g, times)
}

pub(crate) fn spectra_of(traj: &FieldTrajectory) -> Vec<Spectrum> {
    traj.fields().par_iter().map(|f| f.spectrum().clone()).collect()
}

pub(crate) fn trajectory_of(times: &[f64], spectra: &[Spectrum], horizon: f64) -> Result<FieldTrajectory> {
    let fields = spectra.par_iter().map(Spectrum::to_field).collect();
    FieldTrajectory::new(times.to_vec(), fields, horizon)
}

/// The two Duhamel maps evaluated on the time grid shared by `u` and `θ`.
pub fn boussinesq_rhs(
    u: &FieldTrajectory,
    theta: &FieldTrajectory,
    u0: &Field,
    theta0: &Field,
    config: &SolverConfig,
) -> Result<(FieldTrajectory, FieldTrajectory)> {
    check_data(u0, theta0)?;
    if u.times() != theta.times() {
        return Err(Error::InvalidArgument("u and theta use different time grids".into()));
    }
    if u.fields()[0].grid() != u0.grid() || theta.fields()[0].grid() != u0.grid() {
        return Err(Error::GridMismatch);
    }
    if u.fields()[0].components() != u0.components() || theta.fields()[0].components() != 1 {
        return Err(Error::ComponentMismatch("trajectories do not match the data".into()));
    }
    let times = u.times();
    let free = State::free(times, u0.spectrum(), theta0.spectrum())?;
    let state = State {
        u: spectra_of(u),
        theta: spectra_of(theta),
    };
    let next = mild_map(times, &state, &free, config.buoyancy.as_slice(), config.nonlinear)?;
    Ok((
        trajectory_of(times, &next.u, u.horizon())?,
        trajectory_of(times, &next.theta, u.horizon())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::samples::{single_mode, taylor_green};

    fn setup() -> (Grid, SolverConfig, Vec<f64>) {
        let g = Grid::periodic(2, 16).unwrap();
        let c = SolverConfig::new(2, 0.5, 8, super::super::Regime::Intersection);
        let t = c.time_grid();
        (g, c, t)
    }

    #[test]
    fn zero_data_gives_zero() {
        let (g, c, t) = setup();
        let z2 = Field::zeros(g, 2);
        let z1 = Field::zeros(g, 1);
        let u = FieldTrajectory::from_fn(t.clone(), 0.5, |_| z2.clone()).unwrap();
        let th = FieldTrajectory::from_fn(t, 0.5, |_| z1.clone()).unwrap();
        let (j1, j2) = boussinesq_rhs(&u, &th, &z2, &z1, &c).unwrap();
        assert!(j1.fields().iter().chain(j2.fields()).all(|f| f.max_abs() == 0.0));
    }

    #[test]
    fn rejects_compressible_data() {
        let (g, c, t) = setup();
        let bad = Field::from_fn(g, 2, |x, i| if i == 0 { x[0].sin() } else { 0.0 });
        let z1 = Field::zeros(g, 1);
        let u = FieldTrajectory::from_fn(t.clone(), 0.5, |_| bad.clone()).unwrap();
        let th = FieldTrajectory::from_fn(t, 0.5, |_| z1.clone()).unwrap();
        assert!(matches!(
            boussinesq_rhs(&u, &th, &bad, &z1, &c),
            Err(Error::NotDivergenceFree(_))
        ));
    }

    #[test]
    fn frozen_zero_velocity_is_linear_in_theta() {
        let (g, c, t) = setup();
        let z2 = Field::zeros(g, 2);
        let a = single_mode(g, &[1, 2], 0.3).unwrap();
        let b = single_mode(g, &[2, -1], 0.2).unwrap();
        let u = FieldTrajectory::from_fn(t.clone(), 0.5, |_| z2.clone()).unwrap();
        let run = |th0: &Field| {
            let th = FieldTrajectory::from_fn(t.clone(), 0.5, |s| ops::heat_propagate(th0, s).unwrap()).unwrap();
            boussinesq_rhs(&u, &th, &z2, th0, &c).unwrap()
        };
        let (ja, _) = run(&a);
        let (jb, _) = run(&b);
        let (jab, jth) = run(&a.combine(2.0, &b, -3.0).unwrap());
        let expect = ja.combine(2.0, &jb, -3.0).unwrap();
        assert!(jab.max_abs_diff(&expect).unwrap() < 1e-14);
        // J₂ is the free evolution of θ₀ when u vanishes
        let free = a.combine(2.0, &b, -3.0).unwrap();
        assert!(jth.last().max_abs_diff(&ops::heat_propagate(&free, 0.5).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn no_temperature_decouples() {
        let (g, c, t) = setup();
        let u0 = taylor_green(g, 0.1).unwrap();
        let z1 = Field::zeros(g, 1);
        let u = FieldTrajectory::from_fn(t.clone(), 0.5, |s| ops::heat_propagate(&u0, s).unwrap()).unwrap();
        let th = FieldTrajectory::from_fn(t, 0.5, |_| z1.clone()).unwrap();
        let (j1, j2) = boussinesq_rhs(&u, &th, &u0, &z1, &c).unwrap();
        assert!(j2.fields().iter().all(|f| f.max_abs() < 1e-15));
        // Taylor–Green advection is a pure gradient, so J₁ is the heat flow
        assert!(j1.max_abs_diff(&u).unwrap() < 1e-14);
    }
}
