use rayon::prelude::*;
use serde::Serialize;

use super::exponent::Exponent;
use super::norms::lp_norm;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ops;

/// Log-uniform sample of `(t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogTimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: usize,
}

impl Default for LogTimeGrid {
    fn default() -> Self {
        Self {
            t_min: 1e-8,
            t_max: 1.0,
            per_decade: 64,
        }
    }
}

impl LogTimeGrid {
    pub fn new(t_min: f64, t_max: f64, per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && per_decade > 0) {
            return Err(Error::InvalidArgument(format!(
                "log grid needs 0 < t_min < t_max and points per decade, got ({t_min}, {t_max}, {per_decade})"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            per_decade,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        let decades = (self.t_max / self.t_min).log10();
        let m = (decades * self.per_decade as f64).ceil().max(1.0) as usize;
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        (0..=m)
            .map(|i| (a + (b - a) * i as f64 / m as f64).exp())
            .collect()
    }
}

/// `L^r((0,1), dt/t)` quadrature of `t^{|s|/2}|ln(t/e²)|^σ ‖e^{tΔ}f‖_p`,
/// trapezoidal in `ln t`.
pub fn heat_characterization_norm(
    f: &Field,
    s: f64,
    sigma: f64,
    p: Exponent,
    r: Exponent,
    grid: &LogTimeGrid,
) -> Result<f64> {
    if !(s < 0.0) {
        return Err(Error::InvalidArgument(format!("need s < 0, got {s}")));
    }
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("need sigma >= 0, got {sigma}")));
    }
    let times = grid.times();
    let spec = f.spectrum();
    let values: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            let w = t.powf(-s / 2.0) * (t.ln() - 2.0).abs().powf(sigma);
            let heat = ops::heat_spectrum(spec, t).expect("positive time").to_field();
            w * lp_norm(&heat, p)
        })
        .collect();
    Ok(match r {
        Exponent::Infinity => values.iter().fold(0.0, |m, v| m.max(*v)),
        Exponent::Finite(r) => {
            let logs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
            let mut integral = 0.0;
            for i in 1..values.len() {
                integral += 0.5 * (logs[i] - logs[i - 1]) * (values[i].powf(r) + values[i - 1].powf(r));
            }
            integral.powf(1.0 / r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::samples::single_mode;

    #[test]
    fn single_mode_closed_form() {
        // ‖e^{tΔ}cos(kx)‖_∞ = e^{-k²t}: sup_t t^{1/2} e^{-k²t} = (2e k²)^{-1/2}
        let g = Grid::periodic(1, 64).unwrap();
        let f = single_mode(g, &[8], 1.0).unwrap();
        let grid = LogTimeGrid::new(1e-6, 1.0, 400).unwrap();
        let v = heat_characterization_norm(&f, -1.0, 0.0, Exponent::Infinity, Exponent::Infinity, &grid).unwrap();
        let exact = 1.0 / (2.0 * std::f64::consts::E * 64.0).sqrt();
        assert!((v - exact).abs() < 1e-4 * exact, "{v} vs {exact}");
    }

    #[test]
    fn rejects_nonnegative_regularity() {
        let g = Grid::periodic(1, 16).unwrap();
        let f = Field::zeros(g, 1);
        let grid = LogTimeGrid::default();
        assert!(heat_characterization_norm(&f, 0.0, 0.0, Exponent::Infinity, Exponent::Infinity, &grid).is_err());
        let z = heat_characterization_norm(&f, -1.0, 1.0, Exponent::Finite(2.0), Exponent::Finite(2.0), &grid).unwrap();
        assert_eq!(z, 0.0);
    }
}
