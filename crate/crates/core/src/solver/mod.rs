//! Mild solutions of the viscous Boussinesq system by Picard iteration on
//! the Duhamel formulation.

mod certificate;
mod config;
mod duhamel;
mod norms;
mod oracle;
mod picard;
mod residual;
mod rhs;
mod sweep;

pub use certificate::{smallness_certificate, OperatorConstants, SmallnessCertificate};
pub use config::{Regime, SolverConfig};
pub use duhamel::{duhamel_integral, duhamel_order_study, QuadratureOrder};
pub use norms::{DataNorms, RegimeNorms};
pub use oracle::{oracle_compare, oracle_compare_with, OracleReport, ORACLE_REFINEMENT};
pub use picard::{picard_solve, BoundChecks, IterationRecord, IterationReport, MildSolution, SolveStatus};
pub use residual::{quadrature_error_estimate, residual_check, ResidualReport};
pub use rhs::{boussinesq_rhs, divergence_defect, DIVERGENCE_TOLERANCE};
pub use sweep::{sweep, SweepRow, SweepSpec};
