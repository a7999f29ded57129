use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};
use crate::lp::LittlewoodPaley;
use crate::ops::{self, Padding};

/// `uv = T(u,v) + T(v,u) + R(u,v)`.
#[derive(Debug, Clone)]
pub struct BonyParts {
    pub tuv: Field,
    pub tvu: Field,
    pub ruv: Field,
}

fn product_components(a: &Spectrum, b: &Spectrum) -> Result<usize> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    match (a.components(), b.components()) {
        (x, y) if x == y => Ok(x),
        (1, y) => Ok(y),
        (x, 1) => Ok(x),
        (x, y) => Err(Error::ComponentMismatch(format!(
            "cannot multiply {x}- and {y}-component fields"
        ))),
    }
}

/// `Σ_i a_i b_i`, dealiased, with a single transform back.
fn sum_of_products(pairs: &[(Spectrum, Spectrum)], template: (&Spectrum, &Spectrum)) -> Result<Spectrum> {
    let m = product_components(template.0, template.1)?;
    let grid = *template.0.grid();
    let pad = Padding::cached(grid);
    let fine_len = grid.len() << grid.dim();
    let mut acc = vec![vec![0.0; fine_len]; m];
    for (a, b) in pairs {
        let fa: Vec<Vec<f64>> = (0..a.components()).map(|c| pad.to_fine_physical(a.component(c))).collect();
        let fb: Vec<Vec<f64>> = (0..b.components()).map(|c| pad.to_fine_physical(b.component(c))).collect();
        for (c, out) in acc.iter_mut().enumerate() {
            let x = &fa[if fa.len() == 1 { 0 } else { c }];
            let y = &fb[if fb.len() == 1 { 0 } else { c }];
            for ((o, p), q) in out.iter_mut().zip(x).zip(y) {
                *o += p * q;
            }
        }
    }
    let mut coeffs = Vec::with_capacity(m * grid.len());
    for out in &acc {
        coeffs.extend(pad.from_fine_physical(out));
    }
    Spectrum::new(grid, m, coeffs)
}

impl LittlewoodPaley {
    /// Summands `S_{q-1}u Δ_q v` of `T(u,v)` as factor pairs, `q = 1..=q_top`
    /// (`S_{q-1} = 0` for `q ≤ 0`).
    fn paraproduct_pairs(&self, u: &Spectrum, v: &Spectrum) -> Vec<(Spectrum, Spectrum)> {
        (1..=self.q_top(u.grid()))
            .map(|q| (self.partial_sum_spectrum(u, q - 1), self.block_spectrum(v, q)))
            .collect()
    }

    fn remainder_pairs(&self, u: &Spectrum, v: &Spectrum) -> Vec<(Spectrum, Spectrum)> {
        let top = self.q_top(u.grid());
        let ub: Vec<Spectrum> = (-1..=top).map(|q| self.block_spectrum(u, q)).collect();
        let vb: Vec<Spectrum> = (-1..=top).map(|q| self.block_spectrum(v, q)).collect();
        let mut pairs = Vec::new();
        for q in -1..=top {
            for l in -1..=1 {
                let ql = q + l;
                if (-1..=top).contains(&ql) {
                    pairs.push((ub[(q + 1) as usize].clone(), vb[(ql + 1) as usize].clone()));
                }
            }
        }
        pairs
    }

    pub fn paraproduct_spectrum(&self, u: &Spectrum, v: &Spectrum) -> Result<Spectrum> {
        sum_of_products(&self.paraproduct_pairs(u, v), (u, v))
    }

    pub fn remainder_spectrum(&self, u: &Spectrum, v: &Spectrum) -> Result<Spectrum> {
        sum_of_products(&self.remainder_pairs(u, v), (u, v))
    }

    pub fn bony(&self, u: &Field, v: &Field) -> Result<BonyParts> {
        let (us, vs) = (u.spectrum(), v.spectrum());
        Ok(BonyParts {
            tuv: self.paraproduct_spectrum(us, vs)?.to_field(),
            tvu: self.paraproduct_spectrum(vs, us)?.to_field(),
            ruv: self.remainder_spectrum(us, vs)?.to_field(),
        })
    }
}

/// `T(u,v) = Σ_q S_{q-1}u Δ_q v`.
pub fn paraproduct_t(u: &Field, v: &Field) -> Result<Field> {
    Ok(LittlewoodPaley::default()
        .paraproduct_spectrum(u.spectrum(), v.spectrum())?
        .to_field())
}

/// `R(u,v) = Σ_q Σ_{|l| ≤ 1} Δ_q u Δ_{q+l} v`.
pub fn remainder_r(u: &Field, v: &Field) -> Result<Field> {
    Ok(LittlewoodPaley::default()
        .remainder_spectrum(u.spectrum(), v.spectrum())?
        .to_field())
}

pub fn bony_decomposition(u: &Field, v: &Field) -> Result<BonyParts> {
    LittlewoodPaley::default().bony(u, v)
}

/// Relative defect of the decomposition identity.
#[derive(Debug, Clone, Serialize)]
pub struct BonyIdentity {
    /// `‖uv - T(u,v) - T(v,u) - R(u,v)‖_∞`.
    pub defect: f64,
    /// `‖uv‖_∞`.
    pub product_sup: f64,
    pub relative: f64,
}

pub fn bony_identity(u: &Field, v: &Field) -> Result<BonyIdentity> {
    let parts = bony_decomposition(u, v)?;
    let uv = ops::dealiased_product(u, v)?;
    let sum = parts.tuv.add(&parts.tvu)?.add(&parts.ruv)?;
    let defect = uv.max_abs_diff(&sum)?;
    let product_sup = uv.max_abs();
    let relative = if product_sup == 0.0 { defect } else { defect / product_sup };
    Ok(BonyIdentity {
        defect,
        product_sup,
        relative,
    })
}
