//! Spectral operators on the torus: transforms, projection, heat flow,
//! differentiation and the dealiased product.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{Field, Spectrum};
use crate::grid::{Grid, MAX_DIM};

pub fn to_spectral(f: &Field) -> Spectrum {
    f.spectrum().clone()
}

pub fn to_physical(coeffs: &Spectrum) -> Field {
    coeffs.to_field()
}

/// Leray projection `δ_ij - ξ_iξ_j/|ξ|²`, identity on the mean mode.
pub fn helmholtz_project(u: &Field) -> Result<Field> {
    Ok(project_spectrum(u.spectrum())?.to_field())
}

pub fn project_spectrum(u: &Spectrum) -> Result<Spectrum> {
    let grid = *u.grid();
    let dim = grid.dim();
    if u.components() != dim {
        return Err(Error::ComponentMismatch(format!(
            "projection needs {dim} components, got {}",
            u.components()
        )));
    }
    let n = grid.len();
    let freqs = grid.frequencies();
    let src = u.coeffs();
    let mut out = u.clone();
    let dst = out.coeffs_mut();
    for (flat, xi) in freqs.iter().enumerate() {
        let norm2: f64 = xi[..dim].iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            continue;
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for d in 0..dim {
            dot += src[d * n + flat] * xi[d];
        }
        for i in 0..dim {
            dst[i * n + flat] = src[i * n + flat] - dot * (xi[i] / norm2);
        }
    }
    Ok(out)
}

/// Heat semigroup `e^{tΔ}` as the exact multiplier `e^{-|ξ|²t}`.
pub fn heat_propagate(f: &Field, t: f64) -> Result<Field> {
    Ok(heat_spectrum(f.spectrum(), t)?.to_field())
}

pub fn heat_spectrum(f: &Spectrum, t: f64) -> Result<Spectrum> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.apply_radial(|r| (-r * r * t).exp()))
}

/// Symbol of `∂^α`, with the Nyquist line zeroed for odd orders so the
/// result stays real.
fn derivative_symbol(grid: &Grid, flat: usize, xi: &[f64; MAX_DIM], order: &[usize]) -> Complex64 {
    let idx = grid.unflatten(flat);
    let mut sym = Complex64::new(1.0, 0.0);
    for (axis, &k) in order.iter().enumerate().take(grid.dim()) {
        if k == 0 {
            continue;
        }
        if k % 2 == 1 && grid.is_nyquist(idx[axis]) {
            return Complex64::new(0.0, 0.0);
        }
        sym *= Complex64::new(0.0, xi[axis]).powu(k as u32);
    }
    sym
}

/// Mixed partial derivative `∂^α f` applied componentwise.
pub fn derivative(f: &Field, order: &[usize]) -> Result<Field> {
    let grid = *f.grid();
    if order.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            actual: order.len(),
        });
    }
    let freqs = grid.frequencies();
    let symbols: Vec<Complex64> = freqs
        .iter()
        .enumerate()
        .map(|(flat, xi)| derivative_symbol(&grid, flat, xi, order))
        .collect();
    let mut spec = f.spectrum().clone();
    for c in 0..spec.components() {
        for (z, s) in spec.component_mut(c).iter_mut().zip(&symbols) {
            *z *= s;
        }
    }
    Ok(spec.to_field())
}

/// Gradient of a scalar field.
pub fn gradient(f: &Field) -> Result<Field> {
    if f.components() != 1 {
        return Err(Error::ComponentMismatch(format!(
            "gradient takes a scalar field, got {} components",
            f.components()
        )));
    }
    Ok(gradient_spectrum(f.spectrum()).to_field())
}

pub fn gradient_spectrum(f: &Spectrum) -> Spectrum {
    let grid = *f.grid();
    let dim = grid.dim();
    let n = grid.len();
    let freqs = grid.frequencies();
    let src = f.component(0);
    let mut out = Spectrum::zeros(grid, dim);
    let dst = out.coeffs_mut();
    for d in 0..dim {
        let mut order = [0usize; MAX_DIM];
        order[d] = 1;
        for (flat, xi) in freqs.iter().enumerate() {
            dst[d * n + flat] = src[flat] * derivative_symbol(&grid, flat, xi, &order[..dim]);
        }
    }
    out
}

/// Divergence of a vector field with `n` components.
pub fn divergence(u: &Field) -> Result<Field> {
    Ok(divergence_spectrum(u.spectrum())?.to_field())
}

pub fn divergence_spectrum(u: &Spectrum) -> Result<Spectrum> {
    let grid = *u.grid();
    let dim = grid.dim();
    if u.components() != dim {
        return Err(Error::ComponentMismatch(format!(
            "divergence needs {dim} components, got {}",
            u.components()
        )));
    }
    let n = grid.len();
    let freqs = grid.frequencies();
    let src = u.coeffs();
    let mut out = Spectrum::zeros(grid, 1);
    let dst = out.coeffs_mut();
    for d in 0..dim {
        let mut order = [0usize; MAX_DIM];
        order[d] = 1;
        for (flat, xi) in freqs.iter().enumerate() {
            dst[flat] += src[d * n + flat] * derivative_symbol(&grid, flat, xi, &order[..dim]);
        }
    }
    Ok(out)
}

/// Zero-padding to a `2N` grid for quadratic products.
///
/// Interpolation is exact: a Nyquist coefficient is split evenly between
/// `±N/2` on the fine grid.
pub(crate) struct Padding {
    coarse: Grid,
    fine: Grid,
    /// For each coarse flat index, the fine targets and their weights.
    scatter: Vec<Vec<(usize, f64)>>,
    /// For each coarse flat index away from Nyquist, its fine source.
    gather: Vec<Option<usize>>,
}

impl Padding {
    pub(crate) fn new(coarse: Grid) -> Self {
        let fine = coarse
            .with_points(coarse.points() * 2)
            .expect("doubling a power of two stays valid");
        let dim = coarse.dim();
        let half = (coarse.points() / 2) as i64;
        let mut scatter = Vec::with_capacity(coarse.len());
        let mut gather = Vec::with_capacity(coarse.len());
        for flat in 0..coarse.len() {
            let idx = coarse.unflatten(flat);
            let mut targets: Vec<([usize; MAX_DIM], f64)> = vec![([0; MAX_DIM], 1.0)];
            let mut on_nyquist = false;
            for axis in 0..dim {
                let k = coarse.wavenumber(idx[axis]);
                let choices: Vec<(i64, f64)> = if coarse.is_nyquist(idx[axis]) {
                    on_nyquist = true;
                    vec![(half, 0.5), (-half, 0.5)]
                } else {
                    vec![(k, 1.0)]
                };
                targets = targets
                    .into_iter()
                    .flat_map(|(t, w)| {
                        choices.iter().map(move |&(kk, ww)| {
                            let mut t2 = t;
                            t2[axis] = fine.index_of(kk);
                            (t2, w * ww)
                        })
                    })
                    .collect();
            }
            let list: Vec<(usize, f64)> =
                targets.iter().map(|(t, w)| (fine.flatten(t), *w)).collect();
            gather.push(if on_nyquist { None } else { Some(list[0].0) });
            scatter.push(list);
        }
        Self {
            coarse,
            fine,
            scatter,
            gather,
        }
    }

    /// Samples of one spectral component on the fine grid.
    pub(crate) fn to_fine_physical(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fine.len()];
        for (c, targets) in coeffs.iter().zip(&self.scatter) {
            for &(t, w) in targets {
                buf[t] += c * w;
            }
        }
        fft::inverse(&mut buf, self.fine.dim(), self.fine.points());
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Coarse coefficients of fine-grid samples, truncated to `|k_i| < N/2`.
    pub(crate) fn from_fine_physical(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft::forward(&mut buf, self.fine.dim(), self.fine.points());
        self.gather
            .iter()
            .map(|g| g.map_or(Complex64::new(0.0, 0.0), |i| buf[i]))
            .collect()
    }

    pub(crate) fn coarse(&self) -> &Grid {
        &self.coarse
    }

    /// Per-thread shared tables for `grid`.
    pub(crate) fn cached(grid: Grid) -> Rc<Padding> {
        thread_local! {
            static CACHE: RefCell<HashMap<(usize, usize, u64), Rc<Padding>>> =
                RefCell::new(HashMap::new());
        }
        let key = (grid.dim(), grid.points(), grid.period().to_bits());
        CACHE.with(|c| {
            c.borrow_mut()
                .entry(key)
                .or_insert_with(|| Rc::new(Padding::new(grid)))
                .clone()
        })
    }
}

/// Product of spectra on a doubled grid, truncated back to the open
/// Nyquist box. Equal component counts multiply componentwise; a scalar
/// operand broadcasts.
pub fn product_spectrum(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let (ma, mb) = (a.components(), b.components());
    let m = if ma == mb {
        ma
    } else if ma == 1 {
        mb
    } else if mb == 1 {
        ma
    } else {
        return Err(Error::ComponentMismatch(format!(
            "cannot multiply {ma}- and {mb}-component fields"
        )));
    };
    let pad = Padding::cached(*a.grid());
    let fa: Vec<Vec<f64>> = (0..ma).map(|c| pad.to_fine_physical(a.component(c))).collect();
    let fb: Vec<Vec<f64>> = (0..mb).map(|c| pad.to_fine_physical(b.component(c))).collect();
    let mut coeffs = Vec::with_capacity(m * a.grid().len());
    for c in 0..m {
        let x = &fa[if ma == 1 { 0 } else { c }];
        let y = &fb[if mb == 1 { 0 } else { c }];
        let prod: Vec<f64> = x.iter().zip(y).map(|(p, q)| p * q).collect();
        coeffs.extend(pad.from_fine_physical(&prod));
    }
    Spectrum::new(*pad.coarse(), m, coeffs)
}

/// Dealiased pointwise product `f·g`.
pub fn dealiased_product(f: &Field, g: &Field) -> Result<Field> {
    Ok(product_spectrum(f.spectrum(), g.spectrum())?.to_field())
}

/// Divergence-form flux `∇·(v ⊗ w)` for vector `v` and `w` with `m` components
/// (or scalar `w`), dealiased. Returns one component per component of `w`.
pub(crate) fn flux_divergence(v: &Spectrum, w: &Spectrum) -> Result<Spectrum> {
    let grid = *v.grid();
    let dim = grid.dim();
    if v.components() != dim {
        return Err(Error::ComponentMismatch("advecting field must be a vector".into()));
    }
    let pad = Padding::cached(grid);
    let n = grid.len();
    let fv: Vec<Vec<f64>> = (0..dim).map(|c| pad.to_fine_physical(v.component(c))).collect();
    let fw: Vec<Vec<f64>> = (0..w.components())
        .map(|c| pad.to_fine_physical(w.component(c)))
        .collect();
    let freqs = grid.frequencies();
    let mut out = Spectrum::zeros(grid, w.components());
    for (i, wi) in fw.iter().enumerate() {
        for (j, vj) in fv.iter().enumerate() {
            let prod: Vec<f64> = vj.iter().zip(wi).map(|(a, b)| a * b).collect();
            let coeffs = pad.from_fine_physical(&prod);
            let mut order = [0usize; MAX_DIM];
            order[j] = 1;
            let dst = &mut out.coeffs_mut()[i * n..(i + 1) * n];
            for (flat, xi) in freqs.iter().enumerate() {
                dst[flat] += coeffs[flat] * derivative_symbol(&grid, flat, xi, &order[..dim]);
            }
        }
    }
    Ok(out)
}
