use rayon::prelude::*;
use serde::Serialize;

use super::cutoff::CutoffPair;
use crate::field::{Field, Spectrum};
use crate::grid::Grid;

/// Dyadic blocks `Δ_q` and partial sums `S_q` built from a cutoff pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LittlewoodPaley {
    cutoffs: CutoffPair,
}

impl LittlewoodPaley {
    pub fn new(cutoffs: CutoffPair) -> Self {
        Self { cutoffs }
    }

    pub fn cutoffs(&self) -> &CutoffPair {
        &self.cutoffs
    }

    /// Largest `q` whose shell `{|ξ| ≤ 2γ·2^q}` fits under Nyquist.
    pub fn q_max(&self, grid: &Grid) -> i32 {
        let ratio = grid.nyquist() / (2.0 * self.cutoffs.gamma());
        if ratio < 1.0 {
            -1
        } else {
            ratio.log2().floor() as i32
        }
    }

    /// Last block that can be nonzero on this grid (covers the corners of
    /// the frequency box).
    pub fn q_top(&self, grid: &Grid) -> i32 {
        let reach = grid.max_frequency();
        let mut q = -1;
        while self.cutoffs.inner() * 2f64.powi(q + 1) < reach {
            q += 1;
        }
        q
    }

    /// Radius below which `Σ_{q ≤ q_max} Δ_q` is the identity.
    pub fn band_radius(&self, grid: &Grid) -> f64 {
        self.cutoffs.inner() * 2f64.powi(self.q_max(grid) + 1)
    }

    pub fn block_weights(&self, grid: &Grid, q: i32) -> Vec<f64> {
        grid.frequency_norms()
            .into_iter()
            .map(|r| self.cutoffs.block_symbol(q, r))
            .collect()
    }

    pub fn partial_sum_weights(&self, grid: &Grid, q: i32) -> Vec<f64> {
        grid.frequency_norms()
            .into_iter()
            .map(|r| self.cutoffs.partial_sum_symbol(q, r))
            .collect()
    }

    pub fn block_spectrum(&self, f: &Spectrum, q: i32) -> Spectrum {
        if q < -1 {
            return Spectrum::zeros(*f.grid(), f.components());
        }
        f.apply_weights(&self.block_weights(f.grid(), q))
    }

    pub fn partial_sum_spectrum(&self, f: &Spectrum, q: i32) -> Spectrum {
        if q < 0 {
            return Spectrum::zeros(*f.grid(), f.components());
        }
        f.apply_weights(&self.partial_sum_weights(f.grid(), q))
    }

    pub fn block(&self, f: &Field, q: i32) -> Field {
        self.block_spectrum(f.spectrum(), q).to_field()
    }

    pub fn partial_sum(&self, f: &Field, q: i32) -> Field {
        self.partial_sum_spectrum(f.spectrum(), q).to_field()
    }

    /// Spectra of `Δ_q f` for `q = -1..=q_top`.
    pub fn block_spectra(&self, f: &Spectrum) -> Vec<Spectrum> {
        let top = self.q_top(f.grid());
        (-1..=top)
            .into_par_iter()
            .map(|q| self.block_spectrum(f, q))
            .collect()
    }

    pub fn decompose(&self, f: &Field) -> DyadicDecomposition {
        let grid = *f.grid();
        let blocks = self
            .block_spectra(f.spectrum())
            .into_par_iter()
            .map(|s| s.to_field())
            .collect();
        DyadicDecomposition {
            source: f.clone(),
            blocks,
            q_max: self.q_max(&grid),
            q_top: self.q_top(&grid),
            cutoffs: self.cutoffs,
        }
    }
}

/// `Δ_q f` for `q = -1, …, q_top`.
#[derive(Debug, Clone)]
pub struct DyadicDecomposition {
    pub source: Field,
    /// `blocks[i]` is `Δ_{i-1} f`.
    pub blocks: Vec<Field>,
    /// Largest shell not clipped by Nyquist.
    pub q_max: i32,
    /// Largest shell that can carry lattice frequencies.
    pub q_top: i32,
    pub cutoffs: CutoffPair,
}

impl DyadicDecomposition {
    pub fn block(&self, q: i32) -> Option<&Field> {
        if q < -1 {
            return None;
        }
        self.blocks.get((q + 1) as usize)
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.blocks.len()).map(|i| i as i32 - 1)
    }

    /// `Σ_q Δ_q f`.
    pub fn reconstruct(&self) -> Field {
        let mut acc = Field::zeros(*self.source.grid(), self.source.components());
        for b in &self.blocks {
            acc = acc.add(b).expect("blocks share the source layout");
        }
        acc
    }
}

/// `Δ_q f` with the standard cutoffs. Zero for `q ≤ -2`.
pub fn dyadic_block(f: &Field, q: i32) -> Field {
    LittlewoodPaley::default().block(f, q)
}

/// `S_q f = Σ_{p ≤ q-1} Δ_p f` with the standard cutoffs.
pub fn partial_sum(f: &Field, q: i32) -> Field {
    LittlewoodPaley::default().partial_sum(f, q)
}

pub fn decompose(f: &Field) -> DyadicDecomposition {
    LittlewoodPaley::default().decompose(f)
}
