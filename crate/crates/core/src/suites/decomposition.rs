use rayon::prelude::*;

use super::{relative, Check, SuiteReport};
use crate::error::Result;
use crate::field::Field;
use crate::grid::Grid;
use crate::lp::LittlewoodPaley;
use crate::ops;
use crate::paraproduct::bony_identity;
use crate::samples::RandomEnsemble;

const EXACT: f64 = 1e-12;

struct TrialErrors {
    reconstruction: f64,
    orthogonality: f64,
    paraproduct: f64,
    remainder: f64,
    s0: f64,
    telescoping: f64,
    heat: f64,
    bony: f64,
}

fn trial(lp: &LittlewoodPaley, f: &Field, g: &Field) -> Result<TrialErrors> {
    let grid = *f.grid();
    let top = lp.q_top(&grid);
    let sup = f.max_abs();
    let rel = |d: f64| relative(d, sup);

    let reconstruction = rel(lp.decompose(f).reconstruct().max_abs_diff(f)?);
    let support = lp.support_identities(f, g, EXACT)?;
    let s0 = rel(lp.partial_sum(f, 0).max_abs_diff(&lp.block(f, -1))?);
    let mut telescoping: f64 = 0.0;
    let mut acc = lp.block(f, -1);
    for q in 0..=top + 1 {
        telescoping = telescoping.max(rel(lp.partial_sum(f, q).max_abs_diff(&acc)?));
        acc = acc.add(&lp.block(f, q))?;
    }
    let heated = ops::heat_propagate(f, 0.01)?;
    let mut heat: f64 = 0.0;
    for q in -1..=top {
        let a = lp.block(&heated, q);
        let b = ops::heat_propagate(&lp.block(f, q), 0.01)?;
        heat = heat.max(rel(a.max_abs_diff(&b)?));
    }
    Ok(TrialErrors {
        reconstruction,
        orthogonality: support.block_orthogonality,
        paraproduct: support.paraproduct_localization,
        remainder: support.remainder_localization,
        s0,
        telescoping,
        heat,
        bony: bony_identity(f, g)?.relative,
    })
}

/// Cutoff invariants, partition of unity, reconstruction, partial sums,
/// block-interaction identities, heat commutation and the Bony identity on
/// `trials` random pairs.
pub fn lp_suite(dim: usize, points: usize, seed: u64, trials: u64) -> Result<SuiteReport> {
    let grid = Grid::periodic(dim, points)?;
    let lp = LittlewoodPaley::default();
    let cutoff = lp.cutoffs().verify(20_000, 64.0);
    let ens = RandomEnsemble::new(dim, lp.band_radius(&grid));
    let errors: Vec<TrialErrors> = (0..trials)
        .into_par_iter()
        .map(|t| trial(&lp, &ens.field(grid, 1, seed, 2 * t), &ens.field(grid, 1, seed, 2 * t + 1)))
        .collect::<Result<_>>()?;
    let worst = |f: fn(&TrialErrors) -> f64| errors.iter().map(f).fold(0.0, f64::max);
    let violations =
        cutoff.range_violations + cutoff.chi_support_violations + cutoff.phi_support_violations;
    let checks = vec![
        Check::at_most("cutoff_support_violations", violations as f64, 0.0),
        Check::at_most("cutoff_partition", cutoff.partition_error, EXACT),
        Check::at_most("lattice_partition", lp.partition_error(&grid), EXACT),
        Check::at_most("reconstruction", worst(|e| e.reconstruction), EXACT),
        Check::at_most("block_orthogonality", worst(|e| e.orthogonality), EXACT),
        Check::at_most("paraproduct_localization", worst(|e| e.paraproduct), EXACT),
        Check::at_most("remainder_localization", worst(|e| e.remainder), EXACT),
        Check::at_most("s0_equals_low_block", worst(|e| e.s0), EXACT),
        Check::at_most("partial_sum_telescoping", worst(|e| e.telescoping), EXACT),
        Check::at_most("heat_commutation", worst(|e| e.heat), EXACT),
        Check::at_most("bony_identity", worst(|e| e.bony), EXACT),
    ];
    Ok(SuiteReport::new("lp", dim, vec![points], seed, trials, checks))
}
