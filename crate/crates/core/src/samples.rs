//! Canonical test fields and the seeded random ensemble.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};
use crate::grid::Grid;
use crate::ops;

/// Taylor–Green velocity `A(sin x cos y, -cos x sin y)` (times `cos z`, with
/// a zero third component, in 3-D). Divergence free.
pub fn taylor_green(grid: Grid, amplitude: f64) -> Result<Field> {
    let unit = grid.frequency_unit();
    match grid.dim() {
        2 => Ok(Field::from_fn(grid, 2, |x, c| {
            let (a, b) = (unit * x[0], unit * x[1]);
            amplitude
                * if c == 0 {
                    a.sin() * b.cos()
                } else {
                    -a.cos() * b.sin()
                }
        })),
        3 => Ok(Field::from_fn(grid, 3, |x, c| {
            let (a, b, z) = (unit * x[0], unit * x[1], unit * x[2]);
            amplitude
                * match c {
                    0 => a.sin() * b.cos() * z.cos(),
                    1 => -a.cos() * b.sin() * z.cos(),
                    _ => 0.0,
                }
        })),
        d => Err(Error::InvalidArgument(format!(
            "Taylor-Green field needs dimension 2 or 3, got {d}"
        ))),
    }
}

/// Real single mode `A cos(ξ·x)` with lattice wave vector `k`.
pub fn single_mode(grid: Grid, k: &[i64], amplitude: f64) -> Result<Field> {
    if k.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            actual: k.len(),
        });
    }
    let unit = grid.frequency_unit();
    Ok(Field::from_fn(grid, 1, |x, _| {
        let phase: f64 = x.iter().zip(k).map(|(xi, &ki)| xi * ki as f64 * unit).sum();
        amplitude * phase.cos()
    }))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5eed_u64, |acc, &p| splitmix(acc ^ splitmix(p)))
}

/// Random band-limited fields with Gaussian spectral coefficients of
/// amplitude `|ξ|^{-decay}` inside `|ξ| <= band`.
///
/// Every coefficient is drawn from its own stream keyed by
/// `(seed, trial, component, k)`, so refining the grid keeps the coarse
/// modes and only adds new ones.
#[derive(Debug, Clone, Copy)]
pub struct RandomEnsemble {
    pub band: f64,
    pub decay: f64,
    /// Coefficients with `|ξ|` below this are left zero.
    pub min_frequency: f64,
}

impl RandomEnsemble {
    /// Decay `n/2 + 1`.
    pub fn new(dim: usize, band: f64) -> Self {
        Self {
            band,
            decay: dim as f64 / 2.0 + 1.0,
            min_frequency: 0.0,
        }
    }

    pub fn with_min_frequency(mut self, min_frequency: f64) -> Self {
        self.min_frequency = min_frequency;
        self
    }

    pub fn spectrum(&self, grid: Grid, components: usize, seed: u64, trial: u64) -> Spectrum {
        let mut spec = Spectrum::zeros(grid, components);
        let norms = grid.frequency_norms();
        let n = grid.len();
        for c in 0..components {
            for flat in 0..n {
                let r = norms[flat];
                if r > self.band || r < self.min_frequency || grid.touches_nyquist(flat) {
                    continue;
                }
                let k = grid.wave_vector(flat);
                let key = mix(&[
                    seed,
                    trial,
                    c as u64,
                    k[0] as u64,
                    k[1] as u64,
                    k[2] as u64,
                ]);
                let mut rng = ChaCha8Rng::seed_from_u64(key);
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let amp = if r > 0.0 { r.powf(-self.decay) } else { 1.0 };
                spec.component_mut(c)[flat] = Complex64::new(re, im) * amp;
            }
        }
        spec.symmetrize();
        spec
    }

    pub fn field(&self, grid: Grid, components: usize, seed: u64, trial: u64) -> Field {
        self.spectrum(grid, components, seed, trial).to_field()
    }

    /// Divergence-free vector sample (projected).
    pub fn solenoidal(&self, grid: Grid, seed: u64, trial: u64) -> Field {
        let spec = self.spectrum(grid, grid.dim(), seed, trial);
        ops::project_spectrum(&spec)
            .expect("component count equals dimension")
            .to_field()
    }
}
