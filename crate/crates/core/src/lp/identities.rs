use serde::Serialize;

use super::blocks::LittlewoodPaley;
use crate::error::Result;
use crate::field::{Field, Spectrum};
use crate::ops;

/// Largest violation of each block-interaction identity, relative to the
/// input magnitudes.
#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    /// `Δ_k Δ_q f = 0` for `|k - q| ≥ 2`.
    pub block_orthogonality: f64,
    /// `Δ_k(S_{q-1}f Δ_q g) = 0` for `|k - q| ≥ 5`.
    pub paraproduct_localization: f64,
    /// `Δ_k(Δ_q f Δ_{q+l} g) = 0` for `|l| ≤ 1`, `k ≥ q + 4`.
    pub remainder_localization: f64,
    /// Number of `(k, q[, l])` cases examined.
    pub cases: usize,
    pub tolerance: f64,
    pub pass: bool,
}

fn sup_norm(f: &Spectrum) -> f64 {
    f.to_field().max_abs()
}

impl LittlewoodPaley {
    /// Checks the three block-interaction identities on `f` and `g`.
    pub fn support_identities(&self, f: &Field, g: &Field, tolerance: f64) -> Result<SupportReport> {
        if f.grid() != g.grid() {
            return Err(crate::error::Error::GridMismatch);
        }
        let grid = *f.grid();
        let top = self.q_top(&grid);
        let weights: Vec<Vec<f64>> = (-1..=top).map(|q| self.block_weights(&grid, q)).collect();
        let w = |q: i32| &weights[(q + 1) as usize];
        let max_after = |s: &Spectrum, q: i32| s.apply_weights(w(q)).max_abs();
        let mut cases = 0;

        let fs = f.spectrum();
        let gs = g.spectrum();
        let f_scale = sup_norm(fs).max(f64::MIN_POSITIVE);
        let g_scale = sup_norm(gs).max(f64::MIN_POSITIVE);
        let pair_scale = f_scale * g_scale;

        let mut orth: f64 = 0.0;
        let f_blocks: Vec<Spectrum> = (-1..=top).map(|q| fs.apply_weights(w(q))).collect();
        let g_blocks: Vec<Spectrum> = (-1..=top).map(|q| gs.apply_weights(w(q))).collect();
        for q in -1..=top {
            for k in -1..=top {
                if (k - q).abs() >= 2 {
                    orth = orth.max(max_after(&f_blocks[(q + 1) as usize], k) / f_scale);
                    cases += 1;
                }
            }
        }

        let mut para: f64 = 0.0;
        for (u, vb) in [(fs, &g_blocks), (gs, &f_blocks)] {
            for q in -1..=top {
                let low = self.partial_sum_spectrum(u, q - 1);
                let prod = ops::product_spectrum(&low, &vb[(q + 1) as usize])?;
                for k in -1..=top {
                    if (k - q).abs() >= 5 {
                        para = para.max(max_after(&prod, k) / pair_scale);
                        cases += 1;
                    }
                }
            }
        }

        let mut rem: f64 = 0.0;
        for q in -1..=top {
            for l in -1..=1 {
                let ql = q + l;
                if ql < -1 || ql > top {
                    continue;
                }
                let prod = ops::product_spectrum(&f_blocks[(q + 1) as usize], &g_blocks[(ql + 1) as usize])?;
                for k in (q + 4)..=top {
                    rem = rem.max(max_after(&prod, k) / pair_scale);
                    cases += 1;
                }
            }
        }

        let pass = orth < tolerance && para < tolerance && rem < tolerance;
        Ok(SupportReport {
            block_orthogonality: orth,
            paraproduct_localization: para,
            remainder_localization: rem,
            cases,
            tolerance,
            pass,
        })
    }

    /// `max |1 - Σ_q m_q(ξ)|` over every lattice frequency of the grid.
    pub fn partition_error(&self, grid: &crate::grid::Grid) -> f64 {
        let top = self.q_top(grid);
        grid.frequency_norms()
            .into_iter()
            .map(|r| {
                let s: f64 = (-1..=top).map(|q| self.cutoffs().block_symbol(q, r)).sum();
                (1.0 - s).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Block-interaction identities with the standard cutoffs and tolerance `1e-12`.
pub fn support_identities_check(f: &Field, g: &Field) -> Result<SupportReport> {
    LittlewoodPaley::default().support_identities(f, g, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::lp::blocks::dyadic_block;
    use crate::samples::RandomEnsemble;

    #[test]
    fn far_blocks_annihilate() {
        let g = Grid::periodic(2, 64).unwrap();
        let f = RandomEnsemble::new(2, 40.0).field(g, 1, 2, 0);
        let b = dyadic_block(&dyadic_block(&f, 7), 3);
        assert!(b.max_abs() == 0.0);
        let b = dyadic_block(&dyadic_block(&f, 3), 5);
        assert!(b.max_abs() == 0.0);
    }

    #[test]
    fn identities_on_random_pair() {
        let g = Grid::periodic(2, 32).unwrap();
        let ens = RandomEnsemble::new(2, 22.0);
        let f = ens.field(g, 1, 9, 0);
        let h = ens.field(g, 1, 9, 1);
        let rep = support_identities_check(&f, &h).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.cases > 20);
    }

    #[test]
    fn partition_on_lattice() {
        let lp = LittlewoodPaley::default();
        for n in [16, 32, 64] {
            assert!(lp.partition_error(&Grid::periodic(2, n).unwrap()) < 1e-14);
        }
    }
}
