use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::besov::{BesovSpec, Exponent, FieldTrajectory};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::lp::LittlewoodPaley;
use crate::ops;
use crate::samples::RandomEnsemble;

/// Which product estimate is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma {
    /// `‖uv‖_{B⁰_{p,r}} ≲ ‖u‖_{B⁰_{p1,1} ∩ B^{0,1}_{p1,∞}} ‖v‖_{B⁰_{p2,r}}`.
    #[serde(rename = "2.4")]
    Product,
    /// Algebra bound on `B⁰_{p,1} ∩ B^{0,1}_{p,∞}`.
    #[serde(rename = "2.5")]
    Algebra,
    /// Time version of the product bound in Chemin–Lerner spaces.
    #[serde(rename = "2.6")]
    TimeProduct,
    /// Time version of the algebra bound.
    #[serde(rename = "2.7")]
    TimeAlgebra,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::Product, Lemma::Algebra, Lemma::TimeProduct, Lemma::TimeAlgebra];

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Lemma::TimeProduct | Lemma::TimeAlgebra)
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::Product => "2.4",
            Lemma::Algebra => "2.5",
            Lemma::TimeProduct => "2.6",
            Lemma::TimeAlgebra => "2.7",
        })
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2.4" => Ok(Lemma::Product),
            "2.5" => Ok(Lemma::Algebra),
            "2.6" => Ok(Lemma::TimeProduct),
            "2.7" => Ok(Lemma::TimeAlgebra),
            other => Err(Error::InvalidArgument(format!(
                "unknown lemma `{other}` (expected 2.4, 2.5, 2.6 or 2.7)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BilinearEstimateSpec {
    pub lemma: Lemma,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    /// Summation index of the target space (ignored by the algebra bounds).
    pub r: Exponent,
    pub rho: Exponent,
    pub rho1: Exponent,
    pub rho2: Exponent,
    pub trials: u64,
    pub seed: u64,
    pub dim: usize,
    /// Horizon of the sampled trajectories.
    pub horizon: f64,
    /// Time samples per trajectory (uniform, including `t = 0`).
    pub time_samples: usize,
}

impl BilinearEstimateSpec {
    /// The exponent configuration used for each lemma.
    pub fn standard(lemma: Lemma, dim: usize, trials: u64, seed: u64) -> Self {
        let inf = Exponent::Infinity;
        let two = Exponent::Finite(2.0);
        let one = Exponent::Finite(1.0);
        let (p, p1, p2) = match lemma {
            Lemma::Product | Lemma::TimeProduct => (two, inf, two),
            Lemma::Algebra | Lemma::TimeAlgebra => (inf, inf, inf),
        };
        Self {
            lemma,
            p,
            p1,
            p2,
            r: two,
            rho: one,
            rho1: two,
            rho2: two,
            trials,
            seed,
            dim,
            horizon: 0.5,
            time_samples: 17,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let holder = |a: Exponent, b: Exponent, c: Exponent, name: &str| -> Result<()> {
            if (a.reciprocal() - b.reciprocal() - c.reciprocal()).abs() > 1e-12 {
                return Err(Error::ExponentRelation(format!(
                    "1/{name} = 1/{name}1 + 1/{name}2 fails for ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        holder(self.p, self.p1, self.p2, "p")?;
        if self.lemma.is_time_dependent() {
            holder(self.rho, self.rho1, self.rho2, "rho")?;
            if !(self.horizon > 0.0) || self.time_samples < 2 {
                return Err(Error::InvalidArgument("trajectories need T > 0 and two samples".into()));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateStatistics {
    pub points: usize,
    pub trials: u64,
    /// Trials with a zero right-hand side.
    pub skipped: u64,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub ratios: Vec<f64>,
}

fn intersection(blocks: &[f64], p: Exponent) -> f64 {
    BesovSpec::plain(0.0, p, Exponent::Finite(1.0)).combine(blocks)
        + BesovSpec::new(0.0, p, Exponent::Infinity, 1.0)
            .expect("valid")
            .combine(blocks)
}

fn cl_blocks(lp: &LittlewoodPaley, traj: &FieldTrajectory, p: Exponent, rho: Exponent) -> Vec<f64> {
    lp.block_time_norms(traj, p)
        .iter()
        .map(|v| crate::besov::time_norm(traj.times(), v, traj.horizon(), rho))
        .collect()
}

fn trajectory(a: &Field, b: &Field, horizon: f64, samples: usize) -> Result<FieldTrajectory> {
    let times: Vec<f64> = (0..samples)
        .map(|i| horizon * i as f64 / (samples - 1) as f64)
        .collect();
    let (sa, sb) = (a.spectrum(), b.spectrum());
    FieldTrajectory::from_fn(times, horizon, |t| {
        let w = (std::f64::consts::PI * t / horizon).cos();
        ops::heat_spectrum(sa, t)
            .expect("t >= 0")
            .combine(1.0, sb, w)
            .expect("same layout")
            .to_field()
    })
}

/// One trial: `(LHS, RHS)`.
fn trial(inputs: &TrialInputs, lp: &LittlewoodPaley, t: u64) -> Result<(f64, f64)> {
    let TrialInputs { spec, grid, ensemble } = inputs;
    let draw = |k: u64| ensemble.field(*grid, 1, spec.seed, 4 * t + k);
    let r = spec.r;
    match spec.lemma {
        Lemma::Product | Lemma::Algebra => {
            let (u, v) = (draw(0), draw(1));
            let uv = ops::dealiased_product(&u, &v)?;
            let ub = lp.block_norms(&u, spec.p1);
            let vb = lp.block_norms(&v, spec.p2);
            let wb = lp.block_norms(&uv, spec.p);
            Ok(if spec.lemma == Lemma::Product {
                (
                    BesovSpec::plain(0.0, spec.p, r).combine(&wb),
                    intersection(&ub, spec.p1) * BesovSpec::plain(0.0, spec.p2, r).combine(&vb),
                )
            } else {
                (intersection(&wb, spec.p), intersection(&ub, spec.p1) * intersection(&vb, spec.p2))
            })
        }
        Lemma::TimeProduct | Lemma::TimeAlgebra => {
            let u = trajectory(&draw(0), &draw(1), spec.horizon, spec.time_samples)?;
            let v = trajectory(&draw(2), &draw(3), spec.horizon, spec.time_samples)?;
            let uv = FieldTrajectory::new(
                u.times().to_vec(),
                u.fields()
                    .par_iter()
                    .zip(v.fields().par_iter())
                    .map(|(a, b)| ops::dealiased_product(a, b))
                    .collect::<Result<_>>()?,
                u.horizon(),
            )?;
            let ub = cl_blocks(lp, &u, spec.p1, spec.rho1);
            let vb = cl_blocks(lp, &v, spec.p2, spec.rho2);
            let wb = cl_blocks(lp, &uv, spec.p, spec.rho);
            Ok(if spec.lemma == Lemma::TimeProduct {
                (
                    BesovSpec::plain(0.0, spec.p, r).combine(&wb),
                    intersection(&ub, spec.p1) * BesovSpec::plain(0.0, spec.p2, r).combine(&vb),
                )
            } else {
                (intersection(&wb, spec.p), intersection(&ub, spec.p1) * intersection(&vb, spec.p2))
            })
        }
    }
}

struct TrialInputs<'a> {
    spec: &'a BilinearEstimateSpec,
    grid: Grid,
    ensemble: RandomEnsemble,
}

/// Ratio `LHS/RHS` over random band-limited samples on an `N`-point grid.
///
/// Fields fill the band `|ξ| ≤ band_radius(grid)`, so refining the grid
/// adds higher shells to the same draws.
pub fn bilinear_constant_estimate(spec: &BilinearEstimateSpec, points: usize) -> Result<EstimateStatistics> {
    spec.validate()?;
    let grid = Grid::periodic(spec.dim, points)?;
    let lp = LittlewoodPaley::default();
    let inputs = TrialInputs {
        spec,
        grid,
        ensemble: RandomEnsemble::new(spec.dim, lp.band_radius(&grid)),
    };
    let pairs: Vec<(f64, f64)> = (0..spec.trials)
        .into_par_iter()
        .map(|t| trial(&inputs, &lp, t))
        .collect::<Result<_>>()?;
    let mut ratios = Vec::with_capacity(pairs.len());
    let mut skipped = 0;
    for (lhs, rhs) in pairs {
        if rhs > 0.0 {
            ratios.push(lhs / rhs);
        } else {
            skipped += 1;
        }
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median_ratio = if sorted.is_empty() {
        0.0
    } else if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    Ok(EstimateStatistics {
        points,
        trials: spec.trials,
        skipped,
        max_ratio: sorted.last().copied().unwrap_or(0.0),
        median_ratio,
        ratios,
    })
}

/// Estimates at several resolutions; stable when each refinement keeps the
/// maximum ratio within `growth` of the previous one.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub lemma: Lemma,
    pub spec: BilinearEstimateSpec,
    pub resolutions: Vec<EstimateStatistics>,
    pub growth_limit: f64,
    pub pass: bool,
}

pub fn bilinear_stability(spec: &BilinearEstimateSpec, points: &[usize], growth: f64) -> Result<StabilityReport> {
    let resolutions = points
        .iter()
        .map(|&n| bilinear_constant_estimate(spec, n))
        .collect::<Result<Vec<_>>>()?;
    let pass = resolutions
        .windows(2)
        .all(|w| w[1].max_ratio <= growth * w[0].max_ratio);
    Ok(StabilityReport {
        lemma: spec.lemma,
        spec: spec.clone(),
        resolutions,
        growth_limit: growth,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_relation_is_checked() {
        let mut s = BilinearEstimateSpec::standard(Lemma::Product, 2, 4, 1);
        assert!(s.validate().is_ok());
        s.p = Exponent::Finite(3.0);
        assert!(matches!(s.validate(), Err(Error::ExponentRelation(_))));
        let mut t = BilinearEstimateSpec::standard(Lemma::TimeProduct, 2, 4, 1);
        t.rho = Exponent::Finite(2.0);
        assert!(t.validate().is_err());
    }

    #[test]
    fn lemma_names_round_trip() {
        for l in Lemma::ALL {
            assert_eq!(l.to_string().parse::<Lemma>().unwrap(), l);
        }
        assert!("2.8".parse::<Lemma>().is_err());
    }

    #[test]
    fn small_sample_is_bounded_and_deterministic() {
        let spec = BilinearEstimateSpec::standard(Lemma::Algebra, 2, 6, 11);
        let a = bilinear_constant_estimate(&spec, 32).unwrap();
        let b = bilinear_constant_estimate(&spec, 32).unwrap();
        assert_eq!(a.ratios, b.ratios);
        assert!(a.max_ratio > 0.0 && a.max_ratio < 10.0);
    }
}
