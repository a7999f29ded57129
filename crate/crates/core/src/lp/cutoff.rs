use serde::Serialize;

/// Ratio `γ` fixing the supports: `supp χ ⊂ {|ξ| ≤ γ}`, `supp φ ⊂ {γ⁻¹ ≤ |ξ| ≤ 2γ}`.
pub const GAMMA: f64 = 4.0 / 3.0;

/// Radius below which `χ ≡ 1` for the standard pair.
pub const STANDARD_INNER: f64 = 3.0 / 4.0;

/// `b(t) = exp(-1/t)` for `t > 0`, else 0.
fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Radial cutoff pair `(χ, φ)` with `φ(ξ) = χ(ξ/2) - χ(ξ)`.
///
/// `χ` equals 1 up to `inner`, falls to 0 at `γ` along a C^∞ smoothstep
/// built from `exp(-1/t)`, and vanishes beyond. Any `inner` in `[3/4, γ)`
/// keeps `supp φ` inside `{3/4 ≤ |ξ| ≤ 8/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffPair {
    gamma: f64,
    inner: f64,
}

impl Default for CutoffPair {
    fn default() -> Self {
        Self::standard()
    }
}

impl CutoffPair {
    pub fn standard() -> Self {
        Self {
            gamma: GAMMA,
            inner: STANDARD_INNER,
        }
    }

    /// Variant with a different flat-top radius. Returns `None` outside `[3/4, γ)`.
    pub fn with_inner(inner: f64) -> Option<Self> {
        (STANDARD_INNER..GAMMA).contains(&inner).then_some(Self {
            gamma: GAMMA,
            inner,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Radius up to which `χ ≡ 1`.
    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn chi(&self, rho: f64) -> f64 {
        if rho <= self.inner {
            1.0
        } else if rho >= self.gamma {
            0.0
        } else {
            let tau = (rho - self.inner) / (self.gamma - self.inner);
            let (a, b) = (bump(tau), bump(1.0 - tau));
            1.0 - a / (a + b)
        }
    }

    pub fn phi(&self, rho: f64) -> f64 {
        self.chi(rho / 2.0) - self.chi(rho)
    }

    /// Multiplier of `Δ_q` at `|ξ| = rho`: `χ` for `q = -1`, `φ(2^{-q}·)` for
    /// `q ≥ 0`, zero below.
    pub fn block_symbol(&self, q: i32, rho: f64) -> f64 {
        match q {
            q if q < -1 => 0.0,
            -1 => self.chi(rho),
            q => self.phi(rho * 0.5f64.powi(q)),
        }
    }

    /// Multiplier of `S_q = Σ_{p ≤ q-1} Δ_p`.
    pub fn partial_sum_symbol(&self, q: i32, rho: f64) -> f64 {
        if q <= -1 {
            0.0
        } else {
            self.chi(rho * 0.5f64.powi(q))
        }
    }

    /// Spectral support of `Δ_q` as `(inner, outer)` radii.
    pub fn block_support(&self, q: i32) -> Option<(f64, f64)> {
        match q {
            q if q < -1 => None,
            -1 => Some((0.0, self.gamma)),
            q => {
                let s = 2f64.powi(q);
                Some((2.0 * self.inner * s / 2.0, 2.0 * self.gamma * s))
            }
        }
    }

    /// Checks the pair on `samples` radii in `[0, max_radius]`.
    pub fn verify(&self, samples: usize, max_radius: f64) -> CutoffReport {
        let mut report = CutoffReport::default();
        let levels = (max_radius / self.inner).log2().ceil().max(0.0) as i32 + 2;
        for i in 0..=samples {
            let rho = max_radius * i as f64 / samples as f64;
            let chi = self.chi(rho);
            let phi = self.phi(rho);
            if !(0.0..=1.0).contains(&chi) || !(0.0..=1.0).contains(&phi) {
                report.range_violations += 1;
            }
            if rho > self.gamma && chi != 0.0 {
                report.chi_support_violations += 1;
            }
            if rho <= STANDARD_INNER && chi != 1.0 {
                report.chi_support_violations += 1;
            }
            if phi != 0.0 && !(1.0 / self.gamma..=2.0 * self.gamma).contains(&rho) {
                report.phi_support_violations += 1;
            }
            let mut sum = chi;
            for q in 0..=levels {
                sum += self.phi(rho * 0.5f64.powi(q));
            }
            report.partition_error = report.partition_error.max((1.0 - sum).abs());
        }
        report.samples = samples + 1;
        report
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CutoffReport {
    pub samples: usize,
    pub range_violations: usize,
    pub chi_support_violations: usize,
    pub phi_support_violations: usize,
    /// `max |1 - χ(ρ) - Σ_q φ(2^{-q}ρ)|`.
    pub partition_error: f64,
}

impl CutoffReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.range_violations == 0
            && self.chi_support_violations == 0
            && self.phi_support_violations == 0
            && self.partition_error < tol
    }
}

/// The standard cutoff pair.
pub fn build_cutoffs() -> CutoffPair {
    CutoffPair::standard()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_values_at_landmarks() {
        let c = build_cutoffs();
        assert_eq!(c.chi(0.5), 1.0);
        assert_eq!(c.chi(0.75), 1.0);
        assert_eq!(c.chi(1.4), 0.0);
        assert_eq!(c.chi(4.0 / 3.0), 0.0);
        let mid = c.chi(0.5 * (0.75 + 4.0 / 3.0));
        assert!((mid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn telescoping_sum_at_one() {
        // φ(1) + χ(1) + Σ_{q≥1} φ(2^{-q}) = 1: every term beyond φ(1) is
        // evaluated inside the flat region of χ, so the sum telescopes.
        let c = build_cutoffs();
        let mut sum = c.phi(1.0) + c.chi(1.0);
        for q in 1..60 {
            sum += c.phi(0.5f64.powi(q));
        }
        assert!((sum - 1.0).abs() < 1e-12);
        // Independent oracle: direct evaluation of the two nonzero terms.
        let chi_half = 1.0;
        let expect = (chi_half - c.chi(1.0)) + c.chi(1.0);
        assert!((sum - expect).abs() < 1e-15);
    }

    #[test]
    fn invariants_hold_on_fine_lattice() {
        for c in [build_cutoffs(), CutoffPair::with_inner(0.9).unwrap()] {
            let rep = c.verify(20_000, 200.0);
            assert!(rep.passes(1e-12), "{rep:?}");
        }
    }

    #[test]
    fn inner_variant_range() {
        assert!(CutoffPair::with_inner(0.5).is_none());
        assert!(CutoffPair::with_inner(4.0 / 3.0).is_none());
    }

    #[test]
    fn phi_support_matches_shell() {
        let c = build_cutoffs();
        assert_eq!(c.phi(0.74), 0.0);
        assert_eq!(c.phi(8.0 / 3.0 + 1e-9), 0.0);
        assert!(c.phi(1.0) > 0.0 && c.phi(2.0) > 0.0);
        assert_eq!(c.block_support(2), Some((3.0, 32.0 / 3.0)));
    }
}
