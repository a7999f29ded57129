use rayon::prelude::*;
use serde::Serialize;

use super::config::Regime;
use crate::besov::{kato_weight, lp_norm, time_norm, BesovSpec, Exponent};
use crate::field::{Field, Spectrum};
use crate::lp::LittlewoodPaley;

/// Solution and data norms of one regime on a fixed time grid.
#[derive(Debug, Clone)]
pub struct RegimeNorms {
    regime: Regime,
    dim: usize,
    times: Vec<f64>,
    horizon: f64,
    lp: LittlewoodPaley,
}

/// Initial-data sizes `μ₁`, `μ₂`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DataNorms {
    pub mu1: f64,
    pub mu2: f64,
}

const L2_TIME: Exponent = Exponent::Finite(2.0);

impl RegimeNorms {
    pub fn new(regime: Regime, dim: usize, times: Vec<f64>, horizon: f64) -> Self {
        Self {
            regime,
            dim,
            times,
            horizon,
            lp: LittlewoodPaley::default(),
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn critical_exponent(&self) -> Exponent {
        Exponent::Finite(self.dim as f64 / 2.0)
    }

    /// `‖Δ_q f(t_i)‖_{L^ρ_T}` for each block.
    fn block_time_norms(&self, path: &[Spectrum], p: Exponent) -> Vec<f64> {
        let per_time: Vec<Vec<f64>> = path.par_iter().map(|s| self.lp.block_norms_of(s, p)).collect();
        (0..per_time[0].len())
            .map(|q| {
                let v: Vec<f64> = per_time.iter().map(|b| b[q]).collect();
                time_norm(&self.times, &v, self.horizon, L2_TIME)
            })
            .collect()
    }

    /// `‖·‖_{L̃²(B⁰_{p,1})} + ‖·‖_{L̃²(B^{0,1}_{p,∞})}`.
    fn intersection(&self, path: &[Spectrum], p: Exponent) -> f64 {
        let blocks = self.block_time_norms(path, p);
        BesovSpec::plain(0.0, p, Exponent::Finite(1.0)).combine(&blocks)
            + BesovSpec { s: 0.0, p, r: Exponent::Infinity, alpha: 1.0 }.combine(&blocks)
    }

    fn weighted_sup(&self, path: &[Spectrum], sigma: f64, p: Exponent) -> f64 {
        self.times
            .par_iter()
            .zip(path.par_iter())
            .filter(|(t, _)| **t > 0.0)
            .map(|(&t, s)| kato_weight(t, sigma) * lp_norm(&s.to_field(), p))
            .reduce(|| 0.0, f64::max)
    }

    /// Velocity norm `X_T` (or the weighted sup with `σ = 1`).
    pub(crate) fn velocity(&self, path: &[Spectrum]) -> f64 {
        match self.regime {
            Regime::Intersection | Regime::Lebesgue { .. } => self.intersection(path, Exponent::Infinity),
            Regime::Weighted { .. } => self.weighted_sup(path, 1.0, Exponent::Infinity),
        }
    }

    /// Temperature norm `Y_T`, `Z_T` or the weighted sup with `σ = ε`.
    pub(crate) fn temperature(&self, path: &[Spectrum]) -> f64 {
        match self.regime {
            Regime::Intersection => self.intersection(path, self.critical_exponent()),
            Regime::Lebesgue { p, r } => {
                let blocks = self.block_time_norms(path, p);
                BesovSpec::plain(0.0, p, r).combine(&blocks)
            }
            Regime::Weighted { p, eps } => self.weighted_sup(path, eps, p),
        }
    }

    /// Product norm `‖x‖ + c★‖y‖`.
    pub(crate) fn pair(&self, u: &[Spectrum], theta: &[Spectrum], c_star: f64) -> (f64, f64, f64) {
        let (a, b) = rayon::join(|| self.velocity(u), || self.temperature(theta));
        (a, b, a + c_star * b)
    }

    /// Data norms matched to the regime.
    pub fn data(&self, u0: &Field, theta0: &Field) -> DataNorms {
        let inf = Exponent::Infinity;
        let one = Exponent::Finite(1.0);
        let log1 = |p: Exponent, alpha: f64| BesovSpec { s: -1.0, p, r: inf, alpha };
        let u_full = || {
            self.lp.besov_norm(u0, &BesovSpec::plain(-1.0, inf, one)) + self.lp.besov_norm(u0, &log1(inf, 1.0))
        };
        match self.regime {
            Regime::Intersection => {
                let p = self.critical_exponent();
                DataNorms {
                    mu1: u_full(),
                    mu2: self.lp.besov_norm(theta0, &BesovSpec::plain(-1.0, p, one))
                        + self.lp.besov_norm(theta0, &log1(p, 1.0)),
                }
            }
            Regime::Lebesgue { p, r } => DataNorms {
                mu1: u_full(),
                mu2: self.lp.besov_norm(theta0, &BesovSpec::plain(-1.0, p, r)),
            },
            Regime::Weighted { p, eps } => DataNorms {
                mu1: self.lp.besov_norm(u0, &log1(inf, 1.0)),
                mu2: self.lp.besov_norm(theta0, &log1(p, eps)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::ops;
    use crate::samples::taylor_green;

    #[test]
    fn weighted_velocity_of_decaying_vortex() {
        // |e^{tΔ}u₀|_∞ = A e^{-2t} for Taylor–Green
        let g = Grid::periodic(2, 16).unwrap();
        let u0 = taylor_green(g, 0.2).unwrap();
        let times: Vec<f64> = (0..=8).map(|i| 0.5 * i as f64 / 8.0).collect();
        let path: Vec<Spectrum> = times
            .iter()
            .map(|&t| ops::heat_spectrum(u0.spectrum(), t).unwrap())
            .collect();
        let expect = times[1..]
            .iter()
            .map(|&t| kato_weight(t, 1.0) * 0.2 * (-2.0 * t).exp())
            .fold(0.0, f64::max);
        let n = RegimeNorms::new("thm1.4:2,0.5".parse().unwrap(), 2, times, 0.5);
        let got = n.velocity(&path);
        assert!((got - expect).abs() < 1e-12 * expect, "{got} vs {expect}");
        // all of Taylor–Green sits in the q = 0 shell: weight 3
        let mu = n.data(&u0, &Field::zeros(g, 1));
        assert!((mu.mu1 - 3.0 * u0.max_abs()).abs() < 1e-12);
        assert_eq!(mu.mu2, 0.0);
    }

    #[test]
    fn zero_path_has_zero_norms() {
        let g = Grid::periodic(2, 16).unwrap();
        let times = vec![0.0, 0.25, 0.5];
        let z: Vec<Spectrum> = times.iter().map(|_| Spectrum::zeros(g, 2)).collect();
        let zt: Vec<Spectrum> = times.iter().map(|_| Spectrum::zeros(g, 1)).collect();
        for r in ["thm1.2", "thm1.3:2,inf"] {
            let n = RegimeNorms::new(r.parse().unwrap(), 2, times.clone(), 0.5);
            assert_eq!(n.pair(&z, &zt, 2.0).2, 0.0);
        }
    }
}
