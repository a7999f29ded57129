use rayon::prelude::*;

use super::exponent::Exponent;
use super::norms::{lp_norm, BesovSpec};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lp::LittlewoodPaley;

/// Fields sampled at increasing times in `[0, T]`.
#[derive(Debug, Clone)]
pub struct FieldTrajectory {
    times: Vec<f64>,
    fields: Vec<Field>,
    horizon: f64,
}

impl FieldTrajectory {
    pub fn new(times: Vec<f64>, fields: Vec<Field>, horizon: f64) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        if times.len() != fields.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times but {} fields",
                times.len(),
                fields.len()
            )));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
        }
        if times[0] < 0.0 {
            return Err(Error::NegativeTime(times[0]));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
        if *times.last().expect("nonempty") > horizon * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument("times exceed the horizon".into()));
        }
        let first = &fields[0];
        if fields
            .iter()
            .any(|f| f.grid() != first.grid() || f.components() != first.components())
        {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            times,
            fields,
            horizon,
        })
    }

    /// Samples `f(t)` on the given times.
    pub fn from_fn(times: Vec<f64>, horizon: f64, f: impl Fn(f64) -> Field + Sync + Send) -> Result<Self> {
        let fields = times.par_iter().map(|&t| f(t)).collect();
        Self::new(times, fields, horizon)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("nonempty")
    }

    pub fn map(&self, f: impl Fn(&Field) -> Field + Sync + Send) -> FieldTrajectory {
        FieldTrajectory {
            times: self.times.clone(),
            fields: self.fields.par_iter().map(f).collect(),
            horizon: self.horizon,
        }
    }

    /// Pointwise-in-time `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &FieldTrajectory, b: f64) -> Result<FieldTrajectory> {
        if self.times != other.times {
            return Err(Error::InvalidArgument("trajectories use different times".into()));
        }
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(x, y)| x.combine(a, y, b))
            .collect::<Result<_>>()?;
        Ok(FieldTrajectory {
            times: self.times.clone(),
            fields,
            horizon: self.horizon,
        })
    }

    pub fn max_abs_diff(&self, other: &FieldTrajectory) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (x, y) in self.fields.iter().zip(&other.fields) {
            worst = worst.max(x.max_abs_diff(y)?);
        }
        Ok(worst)
    }
}

/// `L^ρ(0, T)` norm of samples `g(t_i)` by the trapezoid rule; the first
/// and last values are held constant out to `0` and `T`.
pub fn time_norm(times: &[f64], values: &[f64], horizon: f64, rho: Exponent) -> f64 {
    match rho {
        Exponent::Infinity => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        Exponent::Finite(r) => {
            let g: Vec<f64> = values.iter().map(|v| v.abs().powf(r)).collect();
            let mut integral = times[0] * g[0];
            for i in 1..times.len() {
                integral += 0.5 * (times[i] - times[i - 1]) * (g[i] + g[i - 1]);
            }
            integral += (horizon - times[times.len() - 1]).max(0.0) * g[g.len() - 1];
            integral.powf(1.0 / r)
        }
    }
}

impl LittlewoodPaley {
    /// `‖Δ_q u‖_{L^p}` at every sample time, indexed `[q + 1][i]`.
    pub fn block_time_norms(&self, traj: &FieldTrajectory, p: Exponent) -> Vec<Vec<f64>> {
        let per_time: Vec<Vec<f64>> = traj
            .fields
            .par_iter()
            .map(|f| self.block_norms(f, p))
            .collect();
        let blocks = per_time[0].len();
        (0..blocks)
            .map(|q| per_time.iter().map(|v| v[q]).collect())
            .collect()
    }

    /// `‖u‖_{L̃^ρ_T(B^{s,α}_{p,r})}`: time norm of each block, then the shell sum.
    pub fn chemin_lerner_norm(&self, traj: &FieldTrajectory, rho: Exponent, spec: &BesovSpec) -> f64 {
        let blocks = self.block_time_norms(traj, spec.p);
        let per_block: Vec<f64> = blocks
            .iter()
            .map(|v| time_norm(&traj.times, v, traj.horizon, rho))
            .collect();
        spec.combine(&per_block)
    }

    /// `‖u‖_{L^ρ_T(B^{s,α}_{p,r})}`: shell sum at each time, then the time norm.
    pub fn lebesgue_besov_norm(&self, traj: &FieldTrajectory, rho: Exponent, spec: &BesovSpec) -> f64 {
        let blocks = self.block_time_norms(traj, spec.p);
        let at_time: Vec<f64> = (0..traj.len())
            .map(|i| {
                let b: Vec<f64> = blocks.iter().map(|v| v[i]).collect();
                spec.combine(&b)
            })
            .collect();
        time_norm(&traj.times, &at_time, traj.horizon, rho)
    }
}

pub fn chemin_lerner_norm(traj: &FieldTrajectory, rho: Exponent, spec: &BesovSpec) -> f64 {
    LittlewoodPaley::default().chemin_lerner_norm(traj, rho, spec)
}

pub fn lebesgue_besov_norm(traj: &FieldTrajectory, rho: Exponent, spec: &BesovSpec) -> f64 {
    LittlewoodPaley::default().lebesgue_besov_norm(traj, rho, spec)
}

/// `t^{1/2}|ln(t/e²)|^σ`.
pub fn kato_weight(t: f64, sigma: f64) -> f64 {
    t.sqrt() * (t.ln() - 2.0).abs().powf(sigma)
}

/// `sup_i t_i^{1/2}|ln(t_i/e²)|^σ ‖u(t_i)‖_p`. Requires `0 < t_i ≤ T ≤ 1`.
pub fn kato_weighted_norm(traj: &FieldTrajectory, sigma: f64, p: Exponent) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
    }
    if traj.horizon > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "weighted sup needs T <= 1, got {}",
            traj.horizon
        )));
    }
    if traj.times[0] <= 0.0 {
        return Err(Error::InvalidArgument(
            "weighted sup is undefined at t = 0".into(),
        ));
    }
    Ok(traj
        .times
        .par_iter()
        .zip(traj.fields.par_iter())
        .map(|(&t, f)| kato_weight(t, sigma) * lp_norm(f, p))
        .reduce(|| 0.0, f64::max))
}
