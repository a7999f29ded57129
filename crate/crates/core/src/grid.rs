use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// Uniform sampling of the torus `[0, L)^n` with `N` points per axis.
///
/// Samples are stored row-major with axis 0 slowest. The frequency lattice is
/// `2π/L · k` with integer `k` in `[-N/2, N/2)` per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: usize,
    period: f64,
}

impl Grid {
    pub fn new(dim: usize, points: usize, period: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidGrid(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis {points} is not a power of two >= 2"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period {period} must be positive")));
        }
        Ok(Self { dim, points, period })
    }

    /// Grid on the standard torus of side `2π`.
    pub fn periodic(dim: usize, points: usize) -> Result<Self> {
        Self::new(dim, points, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `L/N`.
    pub fn spacing(&self) -> f64 {
        self.period / self.points as f64
    }

    /// Quadrature weight of one sample, `(L/N)^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Torus volume `L^n`.
    pub fn volume(&self) -> f64 {
        self.period.powi(self.dim as i32)
    }

    /// Spacing of the frequency lattice, `2π/L`.
    pub fn frequency_unit(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Largest frequency magnitude resolved along a single axis, `(N/2)·2π/L`.
    pub fn nyquist(&self) -> f64 {
        (self.points / 2) as f64 * self.frequency_unit()
    }

    /// Largest `|ξ|` on the lattice (a corner of the frequency box).
    pub fn max_frequency(&self) -> f64 {
        self.nyquist() * (self.dim as f64).sqrt()
    }

    /// Signed integer wavenumber of an axis index; `N/2` maps to `-N/2`.
    pub fn wavenumber(&self, index: usize) -> i64 {
        let n = self.points as i64;
        let i = index as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Axis index of a signed wavenumber (taken modulo `N`).
    pub fn index_of(&self, wavenumber: i64) -> usize {
        wavenumber.rem_euclid(self.points as i64) as usize
    }

    pub fn is_nyquist(&self, index: usize) -> bool {
        index == self.points / 2
    }

    /// Per-axis indices of a flat sample index (unused axes are zero).
    pub fn unflatten(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.dim]
            .iter()
            .fold(0, |acc, &i| acc * self.points + i)
    }

    /// Signed wave vector of a flat spectral index.
    pub fn wave_vector(&self, flat: usize) -> [i64; MAX_DIM] {
        let idx = self.unflatten(flat);
        let mut k = [0; MAX_DIM];
        for axis in 0..self.dim {
            k[axis] = self.wavenumber(idx[axis]);
        }
        k
    }

    /// Flat index of the lattice point `-k` (Hermitian partner).
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let idx = self.unflatten(flat);
        let mut out = [0; MAX_DIM];
        for axis in 0..self.dim {
            out[axis] = (self.points - idx[axis]) % self.points;
        }
        self.flatten(&out)
    }

    /// Physical frequency vectors `ξ = 2π k / L` for every flat index.
    pub fn frequencies(&self) -> Vec<[f64; MAX_DIM]> {
        let unit = self.frequency_unit();
        (0..self.len())
            .map(|flat| {
                let k = self.wave_vector(flat);
                let mut xi = [0.0; MAX_DIM];
                for axis in 0..self.dim {
                    xi[axis] = k[axis] as f64 * unit;
                }
                xi
            })
            .collect()
    }

    /// `|ξ|` for every flat index.
    pub fn frequency_norms(&self) -> Vec<f64> {
        self.frequencies()
            .iter()
            .map(|xi| xi.iter().map(|c| c * c).sum::<f64>().sqrt())
            .collect()
    }

    /// True when any axis of the flat index sits on the Nyquist line.
    pub fn touches_nyquist(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        idx[..self.dim].iter().any(|&i| self.is_nyquist(i))
    }

    /// Physical coordinates of a flat sample index.
    pub fn coordinates(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.unflatten(flat);
        let h = self.spacing();
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = idx[axis] as f64 * h;
        }
        x
    }

    /// Same torus sampled with `points` per axis.
    pub fn with_points(&self, points: usize) -> Result<Self> {
        Self::new(self.dim, points, self.period)
    }
}
