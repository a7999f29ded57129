use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::{Grid, MAX_DIM};

/// Real scalar or vector field sampled on a [`Grid`].
///
/// Components are stored contiguously, one after another, each in row-major
/// order. The spectral representation is computed lazily and cached.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    components: usize,
    values: Vec<f64>,
    spectrum: OnceLock<Spectrum>,
}

/// Fourier coefficients of a real field, normalized so a constant `c` has
/// coefficient `c` at `k = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    components: usize,
    coeffs: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, components: usize, values: Vec<f64>) -> Result<Self> {
        if components == 0 {
            return Err(Error::ComponentMismatch("a field needs at least one component".into()));
        }
        let expected = grid.len() * components;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self {
            grid,
            components,
            values,
            spectrum: OnceLock::new(),
        })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        Self::new(grid, components, vec![0.0; grid.len() * components.max(1)])
            .expect("sizes are consistent")
    }

    /// Samples `f(x, component)` at every grid point.
    pub fn from_fn(grid: Grid, components: usize, f: impl Fn(&[f64], usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len() * components);
        for c in 0..components {
            for flat in 0..grid.len() {
                let x = grid.coordinates(flat);
                values.push(f(&x[..grid.dim()], c));
            }
        }
        Self::new(grid, components, values).expect("sizes are consistent")
    }

    /// Stacks scalar fields into one vector field.
    pub fn stack(parts: &[Field]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::ComponentMismatch("nothing to stack".into()))?;
        let mut values = Vec::with_capacity(first.values.len() * parts.len());
        let mut components = 0;
        for p in parts {
            if p.grid != first.grid {
                return Err(Error::GridMismatch);
            }
            values.extend_from_slice(&p.values);
            components += p.components;
        }
        Self::new(first.grid, components, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[c * n..(c + 1) * n]
    }

    /// One component as a scalar field.
    pub fn component_field(&self, c: usize) -> Field {
        Field::new(self.grid, 1, self.component(c).to_vec()).expect("sizes are consistent")
    }

    /// Cached spectral coefficients.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| Spectrum::from_field(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise Euclidean magnitude `|f(x)|` over components.
    pub fn magnitude(&self) -> Vec<f64> {
        let n = self.grid.len();
        let mut out = vec![0.0; n];
        for c in 0..self.components {
            for (o, v) in out.iter_mut().zip(self.component(c)) {
                *o += v * v;
            }
        }
        out.iter_mut().for_each(|v| *v = v.sqrt());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.components != other.components {
            return Err(Error::ComponentMismatch(format!(
                "{} vs {} components",
                self.components, other.components
            )));
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Field::new(self.grid, self.components, values)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, a: f64) -> Field {
        let values = self.values.iter().map(|v| a * v).collect();
        Field::new(self.grid, self.components, values).expect("sizes are consistent")
    }

    /// Largest absolute difference between samples.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

impl Spectrum {
    pub fn new(grid: Grid, components: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = grid.len() * components;
        if components == 0 || coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            grid,
            components,
            coeffs,
        })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        Self {
            grid,
            components,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len() * components],
        }
    }

    fn from_field(field: &Field) -> Self {
        let grid = field.grid;
        let mut coeffs: Vec<Complex64> =
            field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for chunk in coeffs.chunks_exact_mut(grid.len()) {
            fft::forward(chunk, grid.dim(), grid.points());
        }
        Self {
            grid,
            components: field.components,
            coeffs,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.coeffs[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    /// Real field with these coefficients. Any anti-Hermitian part is dropped.
    pub fn to_field(&self) -> Field {
        let grid = self.grid;
        let mut values = Vec::with_capacity(self.coeffs.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
        for c in 0..self.components {
            buf.copy_from_slice(self.component(c));
            fft::inverse(&mut buf, grid.dim(), grid.points());
            values.extend(buf.iter().map(|z| z.re));
        }
        let field = Field::new(grid, self.components, values).expect("sizes are consistent");
        // The cache keeps the exact coefficients rather than a re-transform.
        let _ = field.spectrum.set(self.clone());
        field
    }

    /// Applies a real multiplier `m(ξ)` to every component.
    pub fn apply(&self, multiplier: impl Fn(&[f64; MAX_DIM]) -> f64) -> Spectrum {
        let weights: Vec<f64> = self.grid.frequencies().iter().map(multiplier).collect();
        self.apply_weights(&weights)
    }

    /// Applies a radial multiplier `m(|ξ|)`.
    pub fn apply_radial(&self, multiplier: impl Fn(f64) -> f64) -> Spectrum {
        let weights: Vec<f64> = self
            .grid
            .frequency_norms()
            .into_iter()
            .map(multiplier)
            .collect();
        self.apply_weights(&weights)
    }

    /// Multiplies each component pointwise by precomputed weights.
    pub fn apply_weights(&self, weights: &[f64]) -> Spectrum {
        debug_assert_eq!(weights.len(), self.grid.len());
        let mut out = self.clone();
        for c in 0..self.components {
            for (z, w) in out.component_mut(c).iter_mut().zip(weights) {
                *z *= *w;
            }
        }
        out
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Spectrum, b: f64) -> Result<Spectrum> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.components != other.components {
            return Err(Error::ComponentMismatch(format!(
                "{} vs {} components",
                self.components, other.components
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Spectrum::new(self.grid, self.components, coeffs)
    }

    pub fn scaled(&self, a: f64) -> Spectrum {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|z| *z *= a);
        out
    }

    /// Spectral L² norm `(L^n Σ|c_k|²)^{1/2}`, equal to the grid L² norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest `|c_k - conj(c_{-k})|` over all components.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.components {
            let comp = self.component(c);
            for (flat, z) in comp.iter().enumerate() {
                let partner = comp[self.grid.conjugate_index(flat)];
                worst = worst.max((z - partner.conj()).norm());
            }
        }
        worst
    }

    /// Replaces the coefficients with their Hermitian part `(c_k + conj(c_{-k}))/2`.
    pub fn symmetrize(&mut self) {
        let n = self.grid.len();
        for c in 0..self.components {
            let comp = self.component(c).to_vec();
            let grid = self.grid;
            let out = self.component_mut(c);
            for flat in 0..n {
                let partner = comp[grid.conjugate_index(flat)];
                out[flat] = (comp[flat] + partner.conj()) * 0.5;
            }
        }
    }

    /// Largest `|ξ|` carrying a coefficient above `threshold`.
    pub fn support_radius(&self, threshold: f64) -> f64 {
        let norms = self.grid.frequency_norms();
        let mut radius: f64 = 0.0;
        for c in 0..self.components {
            for (z, r) in self.component(c).iter().zip(&norms) {
                if z.norm() > threshold {
                    radius = radius.max(*r);
                }
            }
        }
        radius
    }
}

/// Constant direction `a` of the buoyancy force `θa`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BuoyancyVector(Vec<f64>);

impl BuoyancyVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if a.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("buoyancy vector must have |a| > 0".into()));
        }
        Ok(Self(a))
    }

    /// Unit vector along the last axis (gravity pointing "up" the last coordinate).
    pub fn vertical(dim: usize) -> Self {
        let mut a = vec![0.0; dim];
        a[dim - 1] = 1.0;
        Self(a)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length() {
        let g = Grid::periodic(2, 8).unwrap();
        assert!(matches!(
            Field::new(g, 1, vec![0.0; 10]),
            Err(Error::DimensionMismatch { expected: 64, actual: 10 })
        ));
    }

    #[test]
    fn stack_and_split() {
        let g = Grid::periodic(1, 8).unwrap();
        let a = Field::from_fn(g, 1, |x, _| x[0].sin());
        let b = Field::from_fn(g, 1, |x, _| x[0].cos());
        let s = Field::stack(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.components(), 2);
        assert_eq!(s.component(1), b.values());
        assert_eq!(s.component_field(0).values(), a.values());
    }

    #[test]
    fn buoyancy_needs_nonzero_norm() {
        assert!(BuoyancyVector::new(vec![0.0, 0.0]).is_err());
        assert_eq!(BuoyancyVector::vertical(3).as_slice(), &[0.0, 0.0, 1.0]);
    }
}
