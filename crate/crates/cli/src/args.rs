use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lp_core::paraproduct::Lemma;
use lp_core::solver::Regime;
use lp_core::Exponent;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lp", version, about = "Littlewood-Paley analysis, Besov norms and a mild Boussinesq solver")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// Where to write the run manifest. Defaults to a file next to the
    /// primary output, or stderr when the output goes to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Split a field into dyadic blocks.
    Decompose(DecomposeArgs),
    /// Print the Besov norm of a field.
    Norm(NormArgs),
    /// Run a verification suite and emit a JSON report.
    #[command(subcommand)]
    Verify(Suite),
    /// Picard iteration for the viscous Boussinesq system.
    Solve(SolveArgs),
    /// Certificate and solver outcome over an amplitude grid, as CSV.
    Sweep(SweepArgs),
    /// Write a sample field file.
    Generate(GenerateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    pub field: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Lebesgue exponents reported per block.
    #[arg(long, value_delimiter = ',', default_values = ["1", "2", "inf"])]
    pub p: Vec<Exponent>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct NormArgs {
    pub field: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long, default_value = "2")]
    pub p: Exponent,
    #[arg(long, default_value = "2")]
    pub r: Exponent,
    /// Logarithmic weight `(3+q)^α`.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SuiteArgs {
    /// Space dimension.
    #[arg(long = "n", default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Partition, reconstruction, support identities and the Bony identity.
    Lp {
        #[command(flatten)]
        #[serde(flatten)]
        common: SuiteArgs,
        #[arg(long = "N", default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
    },
    /// Norm axioms, monotonicity, Minkowski relations and embeddings.
    Besov {
        #[command(flatten)]
        #[serde(flatten)]
        common: SuiteArgs,
        #[arg(long = "N", default_value_t = 32)]
        points: usize,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Sampled product constants and their resolution stability.
    Bilinear {
        #[command(flatten)]
        #[serde(flatten)]
        common: SuiteArgs,
        /// Lemma ids; all four when absent.
        #[arg(long, value_delimiter = ',')]
        lemma: Vec<Lemma>,
        #[arg(long = "N", value_delimiter = ',', default_values = ["32", "64"])]
        points: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Allowed growth of the largest ratio per refinement.
        #[arg(long, default_value_t = 1.2)]
        growth: f64,
    },
    /// Heat-flow characterization of negative-regularity norms.
    Heatchar {
        #[command(flatten)]
        #[serde(flatten)]
        common: SuiteArgs,
        #[arg(long = "N", value_delimiter = ',', default_values = ["32", "64"])]
        points: Vec<usize>,
        #[arg(long, default_value_t = 1e-8)]
        t_min: f64,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 64)]
        per_decade: usize,
    },
    /// One-dimensional Dirac comb norms.
    Comb {
        /// JSON report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Bernstein ratios on balls and shells.
    Bernstein {
        #[command(flatten)]
        #[serde(flatten)]
        common: SuiteArgs,
        #[arg(long = "N", default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 8)]
        samples: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SolverArgs {
    #[arg(long = "T", default_value_t = 0.5)]
    pub horizon: f64,
    #[arg(long = "M", default_value_t = 64)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub substeps: usize,
    /// thm1.2, thm1.3:p,r or thm1.4:p,eps.
    #[arg(long, default_value = "thm1.2")]
    pub regime: Regime,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    /// Bilinear constant; measured when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Linear constant; measured when absent.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Samples used to measure the constants.
    #[arg(long, default_value_t = 8)]
    pub constant_trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Buoyancy direction `a`; the last axis when absent.
    #[arg(long, value_delimiter = ',')]
    pub buoyancy: Option<Vec<f64>>,
    /// Drop the advection terms.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub u0: PathBuf,
    #[arg(long)]
    pub theta0: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Compare against an independent time stepper.
    #[arg(long)]
    pub oracle: bool,
    /// Estimate the quadrature error by solving again with twice the steps.
    #[arg(long)]
    pub quadrature: bool,
    /// Directory for the fields at `T`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long = "n", default_value_t = 2)]
    pub dim: usize,
    #[arg(long = "N", default_value_t = 32)]
    pub points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Taylor-Green amplitudes for `u₀`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub amp_u: Vec<f64>,
    /// Single-mode amplitudes for `θ₀`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub amp_theta: Vec<f64>,
    /// Wave vector of the `θ₀` mode.
    #[arg(long, value_delimiter = ',')]
    pub theta_mode: Option<Vec<i64>>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    TaylorGreen,
    Mode,
    Random,
    Solenoidal,
    Zero,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GenerateArgs {
    pub kind: SampleKind,
    #[arg(long = "n", default_value_t = 2)]
    pub dim: usize,
    #[arg(long = "N", default_value_t = 32)]
    pub points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Wave vector for `mode`.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<i64>>,
    /// Components for `random` and `zero`.
    #[arg(long, default_value_t = 1)]
    pub components: usize,
    /// Spectral band for `random` and `solenoidal`; the resolved band of the grid when absent.
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    #[arg(long)]
    pub out: PathBuf,
}
