//! Bony decomposition and sampled product estimates.

mod bony;
mod estimates;

pub use bony::{bony_decomposition, bony_identity, paraproduct_t, remainder_r, BonyIdentity, BonyParts};
pub use estimates::{
    bilinear_constant_estimate, bilinear_stability, BilinearEstimateSpec, EstimateStatistics, Lemma,
    StabilityReport,
};
