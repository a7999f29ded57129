use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::besov::Exponent;
use crate::error::{Error, Result};
use crate::field::BuoyancyVector;

/// Which pair of solution norms the iteration is measured in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `u` in `L̃²_T(B⁰_{∞,1}) ∩ L̃²_T(B^{0,1}_{∞,∞})`,
    /// `θ` in `L̃²_T(B⁰_{n/2,1}) ∩ L̃²_T(B^{0,1}_{n/2,∞})`.
    Intersection,
    /// Same `u` space, `θ` in `L̃²_T(B⁰_{p,r})`.
    Lebesgue { p: Exponent, r: Exponent },
    /// Weighted sups `t^{1/2}|ln(t/e²)|‖u‖_∞` and `t^{1/2}|ln(t/e²)|^ε‖θ‖_p`.
    Weighted { p: Exponent, eps: f64 },
}

impl Regime {
    pub fn validate(&self, dim: usize, horizon: f64) -> Result<()> {
        let half = dim as f64 / 2.0;
        let check_p = |p: &Exponent| -> Result<()> {
            match p {
                Exponent::Finite(v) if *v > half => Ok(()),
                _ => Err(Error::InvalidArgument(format!(
                    "regime needs p in (n/2, inf) = ({half}, inf), got {p}"
                ))),
            }
        };
        match self {
            Regime::Intersection => Ok(()),
            Regime::Lebesgue { p, .. } => check_p(p),
            Regime::Weighted { p, eps } => {
                check_p(p)?;
                if !(*eps > 0.0) {
                    return Err(Error::InvalidArgument(format!("need eps > 0, got {eps}")));
                }
                if horizon > 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "weighted regime needs T <= 1, got {horizon}"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Intersection => f.write_str("thm1.2"),
            Regime::Lebesgue { p, r } => write!(f, "thm1.3:{p},{r}"),
            Regime::Weighted { p, eps } => write!(f, "thm1.4:{p},{eps}"),
        }
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse regime `{s}`"));
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let pair = |a: Option<&str>| -> Result<(String, String)> {
            let (x, y) = a.and_then(|a| a.split_once(',')).ok_or_else(bad)?;
            Ok((x.to_string(), y.to_string()))
        };
        match name {
            "thm1.2" if args.is_none() => Ok(Regime::Intersection),
            "thm1.3" => {
                let (p, r) = pair(args)?;
                Ok(Regime::Lebesgue {
                    p: p.parse()?,
                    r: r.parse()?,
                })
            }
            "thm1.4" => {
                let (p, e) = pair(args)?;
                Ok(Regime::Weighted {
                    p: p.parse()?,
                    eps: e.trim().parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub horizon: f64,
    /// Uniform time steps on `[0, T]`.
    pub steps: usize,
    /// Panels per step used by the Duhamel quadrature.
    pub substeps: usize,
    pub max_iterations: usize,
    /// Relative tolerance on successive differences.
    pub tol: f64,
    pub buoyancy: BuoyancyVector,
    pub regime: Regime,
    /// Bilinear constant; measured when absent.
    pub lambda: Option<f64>,
    /// Linear constant; measured when absent.
    pub eta: Option<f64>,
    /// Abort once the iterate norm exceeds this multiple of the free evolution.
    pub divergence_factor: f64,
    /// Drop the advection terms (linear heat-buoyancy system).
    pub nonlinear: bool,
    /// Extra log-spaced times inserted in `(0, T/M)` for the weighted regime.
    pub log_decades: usize,
    pub log_per_decade: usize,
    /// Samples used when measuring `λ` and `η`.
    pub constant_trials: u64,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(dim: usize, horizon: f64, steps: usize, regime: Regime) -> Self {
        Self {
            horizon,
            steps,
            substeps: 1,
            max_iterations: 50,
            tol: 1e-8,
            buoyancy: BuoyancyVector::vertical(dim),
            regime,
            lambda: None,
            eta: None,
            divergence_factor: 10.0,
            nonlinear: true,
            log_decades: 6,
            log_per_decade: 4,
            constant_trials: 8,
            seed: 0,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("need T > 0, got {}", self.horizon)));
        }
        if self.steps == 0 || self.substeps == 0 {
            return Err(Error::InvalidArgument("need at least one time step".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("need at least one iteration".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("need tol > 0, got {}", self.tol)));
        }
        if self.buoyancy.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: self.buoyancy.len(),
            });
        }
        for c in [self.lambda, self.eta].into_iter().flatten() {
            if !(c > 0.0) {
                return Err(Error::InvalidArgument(format!("operator constants must be positive, got {c}")));
            }
        }
        self.regime.validate(dim, self.horizon)
    }

    /// Solver time grid: `0`, the log-spaced points of the weighted regime,
    /// then `M·substeps` uniform panels.
    pub fn time_grid(&self) -> Vec<f64> {
        let panels = self.steps * self.substeps;
        let h = self.horizon / panels as f64;
        let mut times = vec![0.0];
        if matches!(self.regime, Regime::Weighted { .. }) && self.log_per_decade > 0 {
            let count = self.log_decades * self.log_per_decade;
            for i in (1..=count).rev() {
                times.push(h * 10f64.powf(-(i as f64) / self.log_per_decade as f64));
            }
        }
        times.extend((1..=panels).map(|i| self.horizon * i as f64 / panels as f64));
        times
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_strings_round_trip() {
        for s in ["thm1.2", "thm1.3:2,inf", "thm1.4:2,0.5"] {
            assert_eq!(s.parse::<Regime>().unwrap().to_string(), s);
        }
        assert!("thm1.5".parse::<Regime>().is_err());
        assert!("thm1.3:2".parse::<Regime>().is_err());
    }

    #[test]
    fn regime_constraints() {
        assert!(Regime::Lebesgue { p: Exponent::Finite(1.0), r: Exponent::Infinity }.validate(2, 1.0).is_err());
        assert!(Regime::Lebesgue { p: Exponent::Infinity, r: Exponent::Infinity }.validate(2, 1.0).is_err());
        let w = Regime::Weighted { p: Exponent::Finite(2.0), eps: 0.5 };
        assert!(w.validate(2, 1.0).is_ok());
        assert!(w.validate(2, 1.5).is_err());
    }

    #[test]
    fn weighted_grid_adds_small_times() {
        let mut c = SolverConfig::new(2, 0.5, 4, "thm1.4:2,0.5".parse().unwrap());
        c.log_decades = 2;
        c.log_per_decade = 2;
        let t = c.time_grid();
        assert_eq!(t.len(), 1 + 4 + 4);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!((t[1] - 0.125e-2).abs() < 1e-15);
    }
}
