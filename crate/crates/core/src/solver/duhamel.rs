use num_complex::Complex64;
use rayon::prelude::*;

use serde::Serialize;

use crate::besov::FieldTrajectory;
use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};
use crate::grid::Grid;
use crate::samples::single_mode;

/// `∫_0^τ e^{-λ(τ-σ)} dσ` and `∫_0^τ e^{-λ(τ-σ)} σ dσ`, plus `e^{-λτ}`.
fn panel_weights(lambda: f64, tau: f64) -> (f64, f64, f64) {
    let x = lambda * tau;
    let decay = (-x).exp();
    if x == 0.0 {
        return (1.0, tau, 0.5 * tau * tau);
    }
    let a = tau * (-(-x).exp_m1() / x);
    let b = if x < 0.1 {
        // (x + e^{-x} - 1)/x² = Σ_k (-x)^k/(k+2)!
        let mut term = 0.5;
        let mut sum = 0.0;
        for k in 0..12 {
            sum += term;
            term *= -x / (k as f64 + 3.0);
        }
        tau * tau * sum
    } else {
        tau * tau * (x + (-x).exp_m1()) / (x * x)
    };
    (decay, a, b)
}

/// Per-mode panel weights for one panel length, reused across panels.
struct PanelTable {
    tau: f64,
    decay: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PanelTable {
    fn new(lambdas: &[f64], tau: f64) -> Self {
        let mut t = PanelTable {
            tau,
            decay: Vec::with_capacity(lambdas.len()),
            a: Vec::with_capacity(lambdas.len()),
            b: Vec::with_capacity(lambdas.len()),
        };
        for &l in lambdas {
            let (d, a, b) = panel_weights(l, tau);
            t.decay.push(d);
            t.a.push(a);
            t.b.push(b);
        }
        t
    }
}

fn squared_frequencies(grid: &Grid) -> Vec<f64> {
    grid.frequency_norms().iter().map(|r| r * r).collect()
}

/// `I(s_i + τ) = e^{-λτ} I_i + g_i A(τ) + (g_{i+1} - g_i) B(τ)/h` for every mode.
fn advance(
    table: &PanelTable,
    h: f64,
    start: &Spectrum,
    g0: &Spectrum,
    g1: &Spectrum,
) -> Spectrum {
    let n = start.grid().len();
    let mut out = start.clone();
    let src0 = g0.coeffs();
    let src1 = g1.coeffs();
    out.coeffs_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(c, dst)| {
            let off = c * n;
            for (k, z) in dst.iter_mut().enumerate() {
                let a0 = src0[off + k];
                let slope: Complex64 = (src1[off + k] - a0) / h;
                *z = *z * table.decay[k] + a0 * table.a[k] + slope * table.b[k];
            }
        });
    out
}

/// Exponential quadrature of `∫_0^t e^{(t-s)Δ} g(s) ds` for a source sampled at
/// `times` (starting at 0) and linear in time between samples. Evaluated at
/// every point of `out_times`, which must lie in `[0, times.last()]`.
pub(crate) fn duhamel_spectra(times: &[f64], g: &[Spectrum], out_times: &[f64]) -> Result<Vec<Spectrum>> {
    if times.is_empty() || times.len() != g.len() {
        return Err(Error::EmptyTrajectory);
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "source must be sampled from t = 0, starts at {}",
            times[0]
        )));
    }
    let end = *times.last().expect("nonempty");
    if let Some(&bad) = out_times.iter().find(|&&t| !(t >= 0.0 && t <= end)) {
        return Err(Error::InvalidArgument(format!(
            "time {bad} lies outside the sampled range [0, {end}]"
        )));
    }
    if out_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("output times must be sorted".into()));
    }
    let grid = *g[0].grid();
    let comps = g[0].components();
    let lambdas = squared_frequencies(&grid);
    let mut out = Vec::with_capacity(out_times.len());
    let mut next = 0;
    let mut current = Spectrum::zeros(grid, comps);
    let mut full: Option<PanelTable> = None;
    while next < out_times.len() && out_times[next] == 0.0 {
        out.push(current.clone());
        next += 1;
    }
    for i in 0..times.len() - 1 {
        if next >= out_times.len() {
            break;
        }
        let (s0, s1) = (times[i], times[i + 1]);
        let h = s1 - s0;
        while next < out_times.len() && out_times[next] < s1 {
            let tau = out_times[next] - s0;
            if tau > 0.0 {
                let table = PanelTable::new(&lambdas, tau);
                out.push(advance(&table, h, &current, &g[i], &g[i + 1]));
            } else {
                out.push(current.clone());
            }
            next += 1;
        }
        if full.as_ref().map_or(true, |t| t.tau != h) {
            full = Some(PanelTable::new(&lambdas, h));
        }
        current = advance(full.as_ref().expect("set above"), h, &current, &g[i], &g[i + 1]);
        while next < out_times.len() && out_times[next] == s1 {
            out.push(current.clone());
            next += 1;
        }
    }
    Ok(out)
}

/// `∫_0^t e^{(t-s)Δ} g(s) ds` for each `t` in `t_grid`, with `g` piecewise
/// linear between its samples and the heat multiplier integrated exactly.
pub fn duhamel_integral(g: &FieldTrajectory, t_grid: &[f64]) -> Result<FieldTrajectory> {
    let spectra: Vec<Spectrum> = g.fields().iter().map(|f| f.spectrum().clone()).collect();
    let out = duhamel_spectra(g.times(), &spectra, t_grid)?;
    let fields = out.par_iter().map(Spectrum::to_field).collect();
    FieldTrajectory::new(t_grid.to_vec(), fields, g.horizon())
}

/// Errors of the quadrature against a closed form as the step is halved.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureOrder {
    pub steps: Vec<usize>,
    /// Largest error over `[0, T]` relative to the largest exact value.
    pub errors: Vec<f64>,
    /// `errors[i] / errors[i + 1]`.
    pub ratios: Vec<f64>,
}

/// Source `sin(ωs)·Σ_k cos(k·x)` over a few stiffnesses, where
/// `∫_0^t e^{-λ(t-s)} sin(ωs) ds = (λ sin ωt - ω cos ωt + ω e^{-λt})/(λ² + ω²)`.
pub fn duhamel_order_study(grid: Grid, horizon: f64, steps: &[usize]) -> Result<QuadratureOrder> {
    let dim = grid.dim();
    let omega = 3.0;
    let modes: Vec<Vec<i64>> = [[1, 0, 0], [2, 1, 0], [4, 3, 1]]
        .iter()
        .map(|k| k[..dim].to_vec())
        .collect();
    let shapes: Vec<(f64, Field)> = modes
        .iter()
        .map(|k| {
            let f = single_mode(grid, k, 1.0)?;
            let l = k.iter().map(|v| (*v as f64 * grid.frequency_unit()).powi(2)).sum::<f64>();
            Ok((l, f))
        })
        .collect::<Result<_>>()?;
    let exact_at = |t: f64| -> Field {
        let mut acc = Field::zeros(grid, 1);
        for (l, f) in &shapes {
            let w = (l * (omega * t).sin() - omega * (omega * t).cos() + omega * (-l * t).exp()) / (l * l + omega * omega);
            acc = acc.combine(1.0, f, w).expect("same grid");
        }
        acc
    };
    let base: Field = shapes
        .iter()
        .fold(Field::zeros(grid, 1), |acc, (_, f)| acc.add(f).expect("same grid"));
    let coarse = *steps.iter().min().ok_or(Error::EmptyTrajectory)?;
    let check: Vec<f64> = (0..=coarse).map(|i| horizon * i as f64 / coarse as f64).collect();
    let exact: Vec<Field> = check.iter().map(|&t| exact_at(t)).collect();
    let scale = exact.iter().map(Field::max_abs).fold(0.0, f64::max);
    let mut errors = Vec::with_capacity(steps.len());
    for &m in steps {
        let times: Vec<f64> = (0..=m).map(|i| horizon * i as f64 / m as f64).collect();
        let g = FieldTrajectory::from_fn(times, horizon, |t| base.scaled((omega * t).sin()))?;
        let out = duhamel_integral(&g, &check)?;
        let mut worst: f64 = 0.0;
        for (a, b) in out.fields().iter().zip(&exact) {
            worst = worst.max(a.max_abs_diff(b)?);
        }
        errors.push(worst / scale);
    }
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(QuadratureOrder {
        steps: steps.to_vec(),
        errors,
        ratios,
    })
}
