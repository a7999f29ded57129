use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::lp::CutoffPair;

const KERNEL_POINTS: usize = 1 << 16;
/// Spatial period of the kernel grid; `h` is negligible well before `±PERIOD/2`.
const KERNEL_PERIOD: f64 = 2048.0;
const SUP_SAMPLES: usize = 4096;

/// Kernels `h = F^{-1}φ` and `h̃ = F^{-1}χ` on a fine 1-D grid.
#[derive(Debug)]
pub struct CombKernels {
    dx: f64,
    h: Vec<f64>,
    h_low: Vec<f64>,
}

impl CombKernels {
    fn build(cutoffs: &CutoffPair) -> Self {
        let n = KERNEL_POINTS;
        let dxi = 2.0 * PI / KERNEL_PERIOD;
        let dx = KERNEL_PERIOD / n as f64;
        let invert = |profile: &dyn Fn(f64) -> f64| -> Vec<f64> {
            let mut buf: Vec<Complex64> = (0..n)
                .map(|i| {
                    let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                    Complex64::new(profile((k * dxi).abs()) * dxi / (2.0 * PI), 0.0)
                })
                .collect();
            fft::inverse(&mut buf, 1, n);
            buf.into_iter().map(|z| z.re).collect()
        };
        Self {
            dx,
            h: invert(&|r| cutoffs.phi(r)),
            h_low: invert(&|r| cutoffs.chi(r)),
        }
    }

    /// Standard kernels, computed once.
    pub fn standard() -> &'static CombKernels {
        static KERNELS: OnceLock<CombKernels> = OnceLock::new();
        KERNELS.get_or_init(|| CombKernels::build(&CutoffPair::standard()))
    }

    fn transform(values: &[f64], dx: f64, omega: f64) -> f64 {
        let n = values.len();
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            let x = if i < n / 2 { i as f64 } else { i as f64 - n as f64 } * dx;
            acc += v * (omega * x).cos();
        }
        acc * dx
    }

    /// Quadrature of `∫ h(x) e^{-iωx} dx`, which recovers `φ(ω)`.
    pub fn shell_transform(&self, omega: f64) -> f64 {
        Self::transform(&self.h, self.dx, omega)
    }

    /// Quadrature of `∫ h̃(x) e^{-iωx} dx`, which recovers `χ(ω)`.
    pub fn low_transform(&self, omega: f64) -> f64 {
        Self::transform(&self.h_low, self.dx, omega)
    }

    /// `‖h‖_∞`, attained at the origin.
    pub fn peak(&self) -> f64 {
        self.h[0]
    }
}

/// Frequency-side comb `Σ_{j ≥ -1} a_j δ_{2^j}` truncated at `J`.
#[derive(Debug, Clone, Serialize)]
pub struct DiracCombSpec {
    /// `coefficients[i]` is `a_{i-1}`.
    pub coefficients: Vec<f64>,
}

impl DiracCombSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument("comb needs a_{-1} and a_0 at least".into()));
        }
        Ok(Self { coefficients })
    }

    /// `a_j = 1/(j+3)` for `0 ≤ j ≤ J`, `a_{-1} = 0`.
    pub fn harmonic(truncation: usize) -> Self {
        let mut c = vec![0.0];
        c.extend((0..=truncation).map(|j| 1.0 / (j as f64 + 3.0)));
        Self { coefficients: c }
    }

    /// `a_j = δ_{jk}/(3+j)` up to `J`.
    pub fn spike(k: usize, truncation: usize) -> Self {
        let mut c = vec![0.0; truncation + 2];
        c[k + 1] = 1.0 / (k as f64 + 3.0);
        Self { coefficients: c }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 2
    }

    pub fn a(&self, j: i32) -> f64 {
        self.coefficients[(j + 1) as usize]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CombNorms {
    /// `Σ_{q ≤ J} ‖Δ_q f‖_∞`.
    pub b01_partial: f64,
    /// `sup_q (q+3)‖Δ_q f‖_∞`.
    pub b0log_inf: f64,
    /// `‖Δ_q f‖_∞` for `q = -1..=J`.
    pub blocks: Vec<f64>,
}

/// Block sup norms of the comb.
///
/// The block `Δ_q` acts on the atom at frequency `2^j` through the numerical
/// transform of its kernel at `2^{j-q}`; the sup over `x` is taken on a
/// uniform sample of one period containing the origin.
pub fn dirac_comb_norms(spec: &DiracCombSpec) -> CombNorms {
    let kernels = CombKernels::standard();
    let top = spec.truncation() as i32;
    let mut cache = std::collections::HashMap::new();
    let mut multiplier = |q: i32, j: i32| -> f64 {
        *cache.entry(if q == -1 { (true, j) } else { (false, j - q) }).or_insert_with(|| {
            if q == -1 {
                kernels.low_transform(2f64.powi(j))
            } else {
                kernels.shell_transform(2f64.powi(j - q))
            }
        })
    };
    let xs: Vec<f64> = (0..SUP_SAMPLES)
        .map(|m| 2.0 * PI * m as f64 / SUP_SAMPLES as f64)
        .collect();
    let mut blocks = Vec::new();
    for q in -1..=top {
        let terms: Vec<(f64, f64)> = (-1..=top)
            .filter(|&j| spec.a(j) != 0.0 && (j - q).abs() <= 2)
            .map(|j| (spec.a(j) * multiplier(q, j), 2f64.powi(j)))
            .filter(|(c, _)| c.abs() > 1e-14)
            .collect();
        let sup = xs
            .iter()
            .map(|x| terms.iter().map(|(c, w)| c * (w * x).cos()).sum::<f64>().abs())
            .fold(0.0, f64::max);
        blocks.push(sup);
    }
    let b01_partial = blocks.iter().sum();
    let b0log_inf = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (i as f64 + 2.0) * b)
        .fold(0.0, f64::max);
    CombNorms {
        b01_partial,
        b0log_inf,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_transform_recovers_profiles() {
        let k = CombKernels::standard();
        let c = CutoffPair::standard();
        for w in [0.5, 1.0, 1.1, 2.0, 2.5, 4.0] {
            assert!((k.shell_transform(w) - c.phi(w)).abs() < 1e-9, "{w} {} {}", k.shell_transform(w), c.phi(w));
            assert!((k.low_transform(w) - c.chi(w)).abs() < 1e-9, "{w}");
        }
        assert!(k.peak() > 0.0);
    }

    #[test]
    fn zero_comb() {
        let n = dirac_comb_norms(&DiracCombSpec::new(vec![0.0; 6]).unwrap());
        assert_eq!((n.b01_partial, n.b0log_inf), (0.0, 0.0));
    }

    #[test]
    fn spike_sums_to_its_coefficient() {
        // φ(1) + φ(2) = 1 - χ(1) + χ(1) - χ(2) = 1
        let n = dirac_comb_norms(&DiracCombSpec::spike(4, 10));
        assert!((n.b01_partial - 1.0 / 7.0).abs() < 1e-8);
    }
}
