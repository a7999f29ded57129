//! Littlewood-Paley analysis and Besov norms on the periodic torus, with a
//! mild-solution Picard solver for the viscous Boussinesq system.

pub mod besov;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod lp;
pub mod ops;
pub mod paraproduct;
pub mod samples;
pub mod solver;
pub mod suites;

pub use besov::{BesovSpec, Exponent, FieldTrajectory};
pub use error::{Error, Result};
pub use field::{BuoyancyVector, Field, Spectrum};
pub use grid::Grid;
pub use lp::{CutoffPair, DyadicDecomposition, LittlewoodPaley};
