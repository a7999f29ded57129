//! Nonhomogeneous dyadic decomposition on the torus.

mod blocks;
mod cutoff;
mod identities;

pub use blocks::{decompose, dyadic_block, partial_sum, DyadicDecomposition, LittlewoodPaley};
pub use cutoff::{build_cutoffs, CutoffPair, CutoffReport, GAMMA, STANDARD_INNER};
pub use identities::{support_identities_check, SupportReport};
