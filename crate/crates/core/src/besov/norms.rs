use rayon::prelude::*;
use serde::Serialize;

use super::exponent::Exponent;
use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};
use crate::lp::LittlewoodPaley;

/// Rectangle-rule `L^p` norm of the pointwise magnitude; `p = ∞` is the
/// sample maximum.
pub fn lp_norm(f: &Field, p: Exponent) -> f64 {
    lp_norm_of_samples(&f.magnitude(), f.grid().cell_volume(), p)
}

fn lp_norm_of_samples(values: &[f64], cell: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        Exponent::Finite(p) => {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            let s: f64 = values.iter().map(|v| (v.abs() / scale).powf(p)).sum();
            scale * (cell * s).powf(1.0 / p)
        }
    }
}

/// Parameters `(s, p, r, α)` of `B^{s,α}_{p,r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesovSpec {
    pub s: f64,
    pub p: Exponent,
    pub r: Exponent,
    pub alpha: f64,
}

impl BesovSpec {
    pub fn new(s: f64, p: Exponent, r: Exponent, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need finite s and alpha >= 0, got s = {s}, alpha = {alpha}"
            )));
        }
        Ok(Self { s, p, r, alpha })
    }

    /// `B^s_{p,r}` without logarithmic weight.
    pub fn plain(s: f64, p: Exponent, r: Exponent) -> Self {
        Self { s, p, r, alpha: 0.0 }
    }

    /// Shell weight `2^{qs}(3+q)^α`.
    pub fn weight(&self, q: i32) -> f64 {
        2f64.powf(q as f64 * self.s) * ((3 + q) as f64).powf(self.alpha)
    }

    /// Combines per-block `L^p` norms (index `q + 1`).
    pub fn combine(&self, block_norms: &[f64]) -> f64 {
        self.r.sum(
            block_norms
                .iter()
                .enumerate()
                .map(|(i, b)| self.weight(i as i32 - 1) * b),
        )
    }
}

impl LittlewoodPaley {
    /// `‖Δ_q f‖_p` for `q = -1..=q_top`.
    pub fn block_norms(&self, f: &Field, p: Exponent) -> Vec<f64> {
        self.block_norms_of(f.spectrum(), p)
    }

    pub fn block_norms_of(&self, f: &Spectrum, p: Exponent) -> Vec<f64> {
        let top = self.q_top(f.grid());
        (-1..=top)
            .into_par_iter()
            .map(|q| lp_norm(&self.block_spectrum(f, q).to_field(), p))
            .collect()
    }

    pub fn besov_norm(&self, f: &Field, spec: &BesovSpec) -> f64 {
        spec.combine(&self.block_norms(f, spec.p))
    }
}

/// `‖f‖_{B^{s,α}_{p,r}} = ‖(2^{qs}(3+q)^α‖Δ_q f‖_p)_q‖_{ℓ^r}`.
pub fn besov_norm(f: &Field, spec: &BesovSpec) -> f64 {
    LittlewoodPaley::default().besov_norm(f, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::samples::single_mode;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sine() {
        let g = Grid::periodic(2, 16).unwrap();
        let c = Field::from_fn(g, 1, |_, _| -3.0);
        for p in [1.0, 2.0, 3.5] {
            let expect = 3.0 * (2.0 * PI).powf(2.0 / p);
            assert!((lp_norm(&c, Exponent::Finite(p)) - expect).abs() < 1e-12 * expect);
        }
        let g1 = Grid::periodic(1, 64).unwrap();
        let s = Field::from_fn(g1, 1, |x, _| x[0].sin());
        assert!((lp_norm(&s, Exponent::Finite(2.0)) - PI.sqrt()).abs() < 1e-10);
        assert!((lp_norm(&s, Exponent::Infinity) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn single_shell_mode() {
        // |k| = 12 sits where only q = 3 (φ(1.5)) and q = 2 (φ(3) = 0) can see it
        let g = Grid::periodic(2, 64).unwrap();
        let f = single_mode(g, &[12, 0], 1.0).unwrap();
        let spec = BesovSpec::new(-1.0, Exponent::Finite(2.0), Exponent::Finite(1.0), 1.0).unwrap();
        let c = crate::lp::CutoffPair::standard();
        let block = c.phi(1.5) * (2.0 * PI * PI).sqrt();
        let expect = 2f64.powi(-3) * 6.0 * block;
        assert!((besov_norm(&f, &spec) - expect).abs() < 1e-12 * expect);
    }
}
