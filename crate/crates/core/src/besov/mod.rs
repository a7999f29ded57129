//! Lebesgue, Besov, Chemin-Lerner and weighted Kato norms, with the
//! checks built on them.

mod bernstein;
mod comb;
mod embedding;
mod exponent;
mod heatchar;
mod norms;
mod trajectory;

pub use bernstein::{bernstein_ratio, bernstein_sweep, fit_slope, BernsteinReport, SpectralSupport};
pub use comb::{dirac_comb_norms, CombKernels, CombNorms, DiracCombSpec};
pub use embedding::{embedding_check, EmbeddingParams, EmbeddingReport};
pub use exponent::Exponent;
pub use heatchar::{heat_characterization_norm, LogTimeGrid};
pub use norms::{besov_norm, lp_norm, BesovSpec};
pub use trajectory::{
    chemin_lerner_norm, kato_weight, kato_weighted_norm, lebesgue_besov_norm, time_norm,
    FieldTrajectory,
};
