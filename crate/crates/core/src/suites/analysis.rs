use rayon::prelude::*;
use serde::Serialize;

use super::{relative, Check, SuiteReport};
use crate::besov::{
    dirac_comb_norms, embedding_check, fit_slope, heat_characterization_norm, BesovSpec, DiracCombSpec,
    EmbeddingParams, EmbeddingReport, Exponent, FieldTrajectory, LogTimeGrid,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::lp::LittlewoodPaley;
use crate::ops;
use crate::samples::{single_mode, RandomEnsemble};

const ROUNDOFF: f64 = 1e-10;

fn norm_specs() -> Vec<BesovSpec> {
    let (two, inf, one) = (Exponent::Finite(2.0), Exponent::Infinity, Exponent::Finite(1.0));
    vec![
        BesovSpec { s: -1.0, p: two, r: one, alpha: 0.0 },
        BesovSpec { s: 0.0, p: inf, r: inf, alpha: 1.0 },
        BesovSpec { s: 0.5, p: two, r: two, alpha: 0.5 },
        BesovSpec { s: -1.0, p: inf, r: one, alpha: 1.0 },
    ]
}

#[derive(Default)]
struct NormErrors {
    triangle: f64,
    homogeneity: f64,
    r_monotone: f64,
    alpha_monotone: f64,
    minkowski_below: f64,
    minkowski_above: f64,
    minkowski_equal: f64,
}

fn norm_trial(lp: &LittlewoodPaley, f: &Field, g: &Field, h: &Field) -> Result<NormErrors> {
    let mut e = NormErrors::default();
    let sum = f.add(g)?;
    for spec in norm_specs() {
        let (nf, ng) = (lp.besov_norm(f, &spec), lp.besov_norm(g, &spec));
        e.triangle = e.triangle.max(relative(lp.besov_norm(&sum, &spec) - nf - ng, nf + ng));
        let scaled = lp.besov_norm(&f.scaled(-2.5), &spec);
        e.homogeneity = e.homogeneity.max(relative((scaled - 2.5 * nf).abs(), 2.5 * nf));
    }
    for p in [Exponent::Finite(2.0), Exponent::Infinity] {
        let blocks = lp.block_norms(f, p);
        let at = |r: Exponent, alpha: f64| BesovSpec { s: -1.0, p, r, alpha }.combine(&blocks);
        let rs = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
        for w in rs.windows(2) {
            e.r_monotone = e.r_monotone.max(relative(at(w[1], 0.0), at(w[0], 0.0)));
        }
        e.alpha_monotone = e.alpha_monotone.max(relative(at(Exponent::Finite(2.0), 0.5), at(Exponent::Finite(2.0), 1.0)));
    }
    let times: Vec<f64> = (0..=16).map(|i| 0.5 * i as f64 / 16.0).collect();
    let traj = FieldTrajectory::from_fn(times, 0.5, |t| {
        ops::heat_propagate(g, t)
            .and_then(|a| a.combine(1.0, h, 1.0 - 2.0 * t))
            .expect("same grid")
    })?;
    let rho = Exponent::Finite(2.0);
    for (r, slot) in [
        (Exponent::Finite(1.0), 0usize),
        (Exponent::Infinity, 1),
        (Exponent::Finite(2.0), 2),
    ] {
        let spec = BesovSpec::plain(0.0, Exponent::Finite(2.0), r);
        let tilde = lp.chemin_lerner_norm(&traj, rho, &spec);
        let plain = lp.lebesgue_besov_norm(&traj, rho, &spec);
        match slot {
            // r ≤ ρ: the time norm inside is larger
            0 => e.minkowski_below = e.minkowski_below.max(relative(plain, tilde)),
            1 => e.minkowski_above = e.minkowski_above.max(relative(tilde, plain)),
            _ => e.minkowski_equal = e.minkowski_equal.max(relative((tilde - plain).abs(), plain)),
        }
    }
    Ok(e)
}

/// Norm axioms, monotonicity in `r` and `α`, Minkowski relations between
/// the two time-space norms, and embedding constants at `N` and `2N`.
pub fn besov_suite(dim: usize, points: usize, seed: u64, trials: u64) -> Result<SuiteReport> {
    let grid = Grid::periodic(dim, points)?;
    let fine = grid.with_points(2 * points)?;
    let lp = LittlewoodPaley::default();
    let ens = RandomEnsemble::new(dim, lp.band_radius(&grid));
    let errors: Vec<NormErrors> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let f = ens.field(grid, 1, seed, 3 * t);
            let g = ens.field(grid, 1, seed, 3 * t + 1);
            let h = ens.field(grid, 1, seed, 3 * t + 2);
            norm_trial(&lp, &f, &g, &h)
        })
        .collect::<Result<_>>()?;
    let worst = |f: fn(&NormErrors) -> f64| errors.iter().map(f).fold(f64::MIN, f64::max);
    let params = EmbeddingParams::default();
    let embed = |g: Grid| -> EmbeddingReport {
        (0..trials)
            .into_par_iter()
            .map(|t| embedding_check(&ens.field(g, 1, seed, 3 * t), &params))
            .collect::<Vec<_>>()
            .iter()
            .fold(EmbeddingReport::default(), |acc, r| acc.max(r))
    };
    let (coarse, doubled) = (embed(grid), embed(fine));
    let mut checks = vec![
        Check::at_most("triangle_inequality", worst(|e| e.triangle), ROUNDOFF),
        Check::at_most("homogeneity", worst(|e| e.homogeneity), ROUNDOFF),
        Check::at_most("r_monotonicity", worst(|e| e.r_monotone), 1.0 + ROUNDOFF),
        Check::at_most("alpha_monotonicity", worst(|e| e.alpha_monotone), 1.0 + ROUNDOFF),
        Check::at_most("minkowski_r1_rho2", worst(|e| e.minkowski_below), 1.0 + ROUNDOFF),
        Check::at_most("minkowski_rinf_rho2", worst(|e| e.minkowski_above), 1.0 + ROUNDOFF),
        Check::at_most("minkowski_r2_rho2", worst(|e| e.minkowski_equal), ROUNDOFF),
    ];
    for ((name, c), (_, d)) in coarse.ratios().iter().zip(doubled.ratios().iter()) {
        checks.push(Check::at_most(format!("embedding_{name}"), *d, 1.1 * c));
    }
    Ok(SuiteReport::new("besov", dim, vec![points, 2 * points], seed, trials, checks))
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatCharEntry {
    pub function: String,
    pub sigma: f64,
    pub p: Exponent,
    /// Heat norm over Besov norm, one per resolution.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatCharReport {
    pub suite: String,
    pub dim: usize,
    pub points: Vec<usize>,
    pub seed: u64,
    pub s: f64,
    pub r: Exponent,
    pub time_grid: LogTimeGrid,
    pub functions: usize,
    /// `max(ratio, 1/ratio)` over the family, per resolution.
    pub c_star: Vec<f64>,
    pub entries: Vec<HeatCharEntry>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub const HEATCHAR_FAMILY: usize = 20;

/// Single modes that fit under the band, then random fields up to the
/// family size. Built on the coarsest grid so every resolution sees the same
/// functions.
fn heat_family(grid: Grid, band: f64, seed: u64) -> Result<Vec<(String, Field)>> {
    let modes: [[i64; 3]; 6] = [[1, 0, 0], [1, 1, 0], [2, 1, 1], [3, 0, 1], [4, 2, 0], [5, 3, 0]];
    let dim = grid.dim();
    let mut family = Vec::new();
    for k in modes.iter() {
        let k = &k[..dim];
        let r = k.iter().map(|v| (*v as f64).powi(2)).sum::<f64>().sqrt() * grid.frequency_unit();
        if r <= band {
            let label: Vec<String> = k.iter().map(|v| v.to_string()).collect();
            family.push((format!("mode({})", label.join(",")), single_mode(grid, k, 1.0)?));
        }
    }
    let ens = RandomEnsemble::new(dim, band);
    let mut t = 0;
    while family.len() < HEATCHAR_FAMILY {
        family.push((format!("random{t}"), ens.field(grid, 1, seed, t)));
        t += 1;
    }
    Ok(family)
}

fn resample(f: &Field, grid: Grid) -> Result<Field> {
    // band-limited: evaluate the trigonometric polynomial on the new grid
    let src = f.grid();
    let spec = f.spectrum();
    let mut out = crate::field::Spectrum::zeros(grid, 1);
    for flat in 0..src.len() {
        if src.touches_nyquist(flat) {
            continue;
        }
        let k = src.wave_vector(flat);
        let idx: Vec<usize> = k[..grid.dim()].iter().map(|&v| grid.index_of(v)).collect();
        out.component_mut(0)[grid.flatten(&idx)] = spec.component(0)[flat];
    }
    Ok(out.to_field())
}

/// Equivalence ratios between the heat-flow norm and the Besov norm with
/// `s = -1`, `r = ∞`, `σ ∈ {0, 1}`, `p ∈ {2, ∞}` over a 20-function family.
pub fn heatchar_suite(dim: usize, points: &[usize], seed: u64, time_grid: &LogTimeGrid) -> Result<HeatCharReport> {
    let coarse_points = *points.iter().min().ok_or(Error::InvalidArgument("need a resolution".into()))?;
    let coarse = Grid::periodic(dim, coarse_points)?;
    let lp = LittlewoodPaley::default();
    let family = heat_family(coarse, lp.band_radius(&coarse), seed)?;
    let s = -1.0;
    let r = Exponent::Infinity;
    let configs: Vec<(f64, Exponent)> = [0.0, 1.0]
        .iter()
        .flat_map(|&sigma| [Exponent::Finite(2.0), Exponent::Infinity].map(|p| (sigma, p)))
        .collect();
    let mut entries: Vec<HeatCharEntry> = Vec::new();
    for (name, _) in &family {
        for &(sigma, p) in &configs {
            entries.push(HeatCharEntry {
                function: name.clone(),
                sigma,
                p,
                ratios: Vec::new(),
            });
        }
    }
    for &n in points {
        let grid = Grid::periodic(dim, n)?;
        let fields: Vec<Field> = family.iter().map(|(_, f)| resample(f, grid)).collect::<Result<_>>()?;
        let jobs: Vec<(usize, usize)> = (0..fields.len())
            .flat_map(|i| (0..configs.len()).map(move |c| (i, c)))
            .collect();
        let ratios: Vec<f64> = jobs
            .par_iter()
            .map(|&(i, c)| {
                let (sigma, p) = configs[c];
                let heat = heat_characterization_norm(&fields[i], s, sigma, p, r, time_grid)?;
                let besov = lp.besov_norm(&fields[i], &BesovSpec { s, p, r, alpha: sigma });
                Ok(relative(heat, besov))
            })
            .collect::<Result<_>>()?;
        for (e, v) in entries.iter_mut().zip(ratios) {
            e.ratios.push(v);
        }
    }
    let c_star: Vec<f64> = (0..points.len())
        .map(|j| {
            entries
                .iter()
                .map(|e| e.ratios[j].max(1.0 / e.ratios[j]))
                .fold(0.0, f64::max)
        })
        .collect();
    let drift = entries
        .iter()
        .flat_map(|e| e.ratios.windows(2).map(|w| (w[1] / w[0]).max(w[0] / w[1])))
        .chain(c_star.windows(2).map(|w| (w[1] / w[0]).max(w[0] / w[1])))
        .fold(1.0, f64::max);
    let mut checks: Vec<Check> = points
        .iter()
        .zip(&c_star)
        .map(|(n, c)| Check::at_most(format!("c_star_N{n}"), *c, 20.0))
        .collect();
    checks.push(Check::at_most("resolution_stability", drift, 1.2));
    let pass = checks.iter().all(|c| c.pass);
    Ok(HeatCharReport {
        suite: "heatchar".into(),
        dim,
        points: points.to_vec(),
        seed,
        s,
        r,
        time_grid: *time_grid,
        functions: family.len(),
        c_star,
        entries,
        checks,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpikeRow {
    pub k: usize,
    pub b01_partial: f64,
    pub b0log_inf: f64,
    /// `k · b01_partial`.
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CombReport {
    pub suite: String,
    pub truncations: Vec<usize>,
    pub b01_partial: Vec<f64>,
    pub b0log_inf: Vec<f64>,
    /// Least-squares slope of `b01_partial` against `ln J`.
    pub log_slope: f64,
    /// Slope the partial sums approach: each atom contributes its coefficient.
    pub asymptotic_coefficient: f64,
    pub spikes: Vec<SpikeRow>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Harmonic comb `a_j = 1/(j+3)` for `J ∈ 8..=20` and spikes
/// `a_j = δ_{kj}/(3+j)` for `k ∈ {2, 4, 8}`.
pub fn comb_suite() -> CombReport {
    let truncations: Vec<usize> = (8..=20).collect();
    let norms: Vec<_> = truncations
        .par_iter()
        .map(|&j| dirac_comb_norms(&DiracCombSpec::harmonic(j)))
        .collect();
    let b01: Vec<f64> = norms.iter().map(|n| n.b01_partial).collect();
    let log: Vec<f64> = norms.iter().map(|n| n.b0log_inf).collect();
    let ln_j: Vec<f64> = truncations.iter().map(|&j| (j as f64).ln()).collect();
    let log_slope = fit_slope(&ln_j, &b01);
    let asymptotic_coefficient = 1.0;
    let (lo, hi) = log.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    let spikes: Vec<SpikeRow> = [2usize, 4, 8]
        .iter()
        .map(|&k| {
            let n = dirac_comb_norms(&DiracCombSpec::spike(k, 20));
            SpikeRow {
                k,
                b01_partial: n.b01_partial,
                b0log_inf: n.b0log_inf,
                scaled: k as f64 * n.b01_partial,
            }
        })
        .collect();
    let (slo, shi) = spikes
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), s| (a.min(s.scaled), b.max(s.scaled)));
    let increasing = b01.windows(2).filter(|w| !(w[1] > w[0])).count();
    let checks = vec![
        Check::at_most("log_sup_variation", (hi - lo) / hi, 0.25),
        Check::at_most("partial_sum_decreases", increasing as f64, 0.0),
        Check::at_least("partial_sum_log_slope", log_slope, 0.5 * asymptotic_coefficient),
        // k·b01 = c(1 ± δ) for the best c: δ = (max - min)/(max + min)
        Check::at_most("spike_inverse_k_spread", (shi - slo) / (shi + slo), 0.30),
    ];
    let pass = checks.iter().all(|c| c.pass);
    CombReport {
        suite: "comb".into(),
        truncations,
        b01_partial: b01,
        b0log_inf: log,
        log_slope,
        asymptotic_coefficient,
        spikes,
        checks,
        pass,
    }
}
