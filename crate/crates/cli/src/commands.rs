use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};

use lp_core::besov::{lp_norm, LogTimeGrid};
use lp_core::paraproduct::Lemma;
use lp_core::samples::{single_mode, taylor_green, RandomEnsemble};
use lp_core::solver::{
    oracle_compare_with, picard_solve, quadrature_error_estimate, residual_check, sweep, IterationRecord,
    OracleReport, ResidualReport, SmallnessCertificate, SolveStatus, SolverConfig, SweepSpec,
};
use lp_core::suites::{self, Check};
use lp_core::{io, BesovSpec, BuoyancyVector, Exponent, Field, Grid, LittlewoodPaley};
use serde::Serialize;

use crate::args::{DecomposeArgs, GenerateArgs, NormArgs, SampleKind, SolveArgs, SolverArgs, Suite, SweepArgs};
use crate::manifest::beside;

pub type CmdResult<T> = Result<T, Box<dyn Error>>;

/// What a command produced, for the exit code and the manifest.
pub struct Outcome {
    pub pass: bool,
    pub outputs: Vec<PathBuf>,
    /// Manifest location when `--manifest` is not given.
    pub manifest: Option<PathBuf>,
    pub results: Option<serde_json::Value>,
}

impl Outcome {
    fn new(pass: bool, outputs: Vec<PathBuf>) -> Self {
        let manifest = outputs.first().map(|p| beside(p));
        Self {
            pass,
            outputs,
            manifest,
            results: None,
        }
    }
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> CmdResult<Vec<PathBuf>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(Vec::new())
        }
    }
}

#[derive(Serialize)]
struct BlockNorm {
    p: Exponent,
    value: f64,
}

#[derive(Serialize)]
struct SupportBounds {
    inner: f64,
    outer: f64,
}

#[derive(Serialize)]
struct BlockEntry {
    q: i32,
    file: String,
    support: Option<SupportBounds>,
    norms: Vec<BlockNorm>,
}

#[derive(Serialize)]
struct Decomposition {
    dim: usize,
    components: usize,
    points: usize,
    period: f64,
    q_max: i32,
    q_top: i32,
    /// Largest deviation of `Σ_q Δ_q f` from `f`.
    reconstruction_error: f64,
    blocks: Vec<BlockEntry>,
}

pub fn decompose(args: &DecomposeArgs) -> CmdResult<Outcome> {
    let f = io::load(&args.field)?;
    let lp = LittlewoodPaley::default();
    let dec = lp.decompose(&f);
    std::fs::create_dir_all(&args.out_dir)?;
    let mut outputs = Vec::new();
    let mut blocks = Vec::new();
    for q in dec.indices() {
        let block = dec.block(q).expect("index from the decomposition");
        let file = format!("block_{q}.lpfld");
        let path = args.out_dir.join(&file);
        io::save(&path, block)?;
        outputs.push(path);
        blocks.push(BlockEntry {
            q,
            file,
            support: dec
                .cutoffs
                .block_support(q)
                .map(|(inner, outer)| SupportBounds { inner, outer }),
            norms: args
                .p
                .iter()
                .map(|&p| BlockNorm {
                    p,
                    value: lp_norm(block, p),
                })
                .collect(),
        });
    }
    let grid = f.grid();
    let report = Decomposition {
        dim: grid.dim(),
        components: f.components(),
        points: grid.points(),
        period: grid.period(),
        q_max: dec.q_max,
        q_top: dec.q_top,
        reconstruction_error: dec.reconstruct().max_abs_diff(&f)?,
        blocks,
    };
    let json = args.out_dir.join("decomposition.json");
    emit_json(&report, Some(&json))?;
    outputs.insert(0, json.clone());
    let mut out = Outcome::new(true, outputs);
    out.manifest = Some(args.out_dir.join("manifest.json"));
    Ok(out)
}

pub fn norm(args: &NormArgs) -> CmdResult<Outcome> {
    let f = io::load(&args.field)?;
    let spec = BesovSpec::new(args.s, args.p, args.r, args.alpha)?;
    let value = LittlewoodPaley::default().besov_norm(&f, &spec);
    println!("{value}");
    Ok(Outcome::new(true, Vec::new()))
}

pub fn verify(suite: &Suite) -> CmdResult<Outcome> {
    let (pass, outputs) = match suite {
        Suite::Lp { common, points, trials } => {
            let r = suites::lp_suite(common.dim, *points, common.seed, *trials)?;
            (r.pass, emit_json(&r, common.report.as_deref())?)
        }
        Suite::Besov { common, points, trials } => {
            let r = suites::besov_suite(common.dim, *points, common.seed, *trials)?;
            (r.pass, emit_json(&r, common.report.as_deref())?)
        }
        Suite::Bilinear {
            common,
            lemma,
            points,
            trials,
            growth,
        } => {
            let lemmas = if lemma.is_empty() { Lemma::ALL.to_vec() } else { lemma.clone() };
            let r = suites::bilinear_suite(&lemmas, common.dim, points, *trials, common.seed, *growth)?;
            (r.pass, emit_json(&r, common.report.as_deref())?)
        }
        Suite::Heatchar {
            common,
            points,
            t_min,
            t_max,
            per_decade,
        } => {
            let grid = LogTimeGrid::new(*t_min, *t_max, *per_decade)?;
            let r = suites::heatchar_suite(common.dim, points, common.seed, &grid)?;
            (r.pass, emit_json(&r, common.report.as_deref())?)
        }
        Suite::Comb { report } => {
            let r = suites::comb_suite();
            (r.pass, emit_json(&r, report.as_deref())?)
        }
        Suite::Bernstein { common, points, samples } => {
            let r = suites::bernstein_suite(common.dim, *points, common.seed, *samples)?;
            (r.pass, emit_json(&r, common.report.as_deref())?)
        }
    };
    Ok(Outcome::new(pass, outputs))
}

impl SolverArgs {
    pub fn config(&self, dim: usize) -> CmdResult<SolverConfig> {
        let mut cfg = SolverConfig::new(dim, self.horizon, self.steps, self.regime);
        cfg.substeps = self.substeps;
        cfg.tol = self.tol;
        cfg.max_iterations = self.max_iter;
        cfg.lambda = self.lambda;
        cfg.eta = self.eta;
        cfg.constant_trials = self.constant_trials;
        cfg.seed = self.seed;
        cfg.nonlinear = !self.linear;
        if let Some(a) = &self.buoyancy {
            cfg.buoyancy = BuoyancyVector::new(a.clone())?;
        }
        cfg.validate(dim)?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    config: &'a SolverConfig,
    status: SolveStatus,
    converged: bool,
    certificate: &'a SmallnessCertificate,
    iterations: &'a [IterationRecord],
    bounds: &'a lp_core::solver::BoundChecks,
    max_contraction: Option<f64>,
    differences_decreasing: bool,
    residuals: &'a ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_error: Option<&'a OracleReport>,
    checks: Vec<Check>,
    pass: bool,
}

/// Relative L² distance to the oracle accepted by `--oracle`.
pub const ORACLE_TOLERANCE: f64 = 1e-4;

pub fn solve(args: &SolveArgs) -> CmdResult<Outcome> {
    let u0 = io::load(&args.u0)?;
    let theta0 = io::load(&args.theta0)?;
    let mut cfg = args.solver.config(u0.grid().dim())?;
    let sol = picard_solve(&u0, &theta0, &cfg)?;
    let report = &sol.report;
    // reuse the constants the solve settled on
    cfg.lambda = Some(report.certificate.lambda);
    cfg.eta = Some(report.certificate.eta);
    let mut residuals = residual_check(&sol.u, &sol.theta, &u0, &theta0, &cfg)?;
    if args.quadrature {
        residuals.quadrature_estimate = Some(quadrature_error_estimate(&u0, &theta0, &cfg)?);
    }
    let oracle = if args.oracle {
        Some(oracle_compare_with(&sol, &u0, &theta0, &cfg)?)
    } else {
        None
    };

    let cert = &report.certificate;
    let b = &report.bounds;
    let last = report.iterations.last().map_or(0.0, |r| r.relative_difference);
    let mut checks = vec![
        Check {
            check: "certificate".into(),
            constant: cert.lhs,
            bound: cert.rhs,
            pass: cert.pass,
        },
        Check {
            check: "converged".into(),
            constant: last,
            bound: cfg.tol,
            pass: report.converged,
        },
        Check::at_most("u_bound", b.u_norm, 2.0 * b.mu1),
        Check::at_most("theta_bound", b.theta_norm, 2.0 * b.mu2),
        Check::at_most("pair_bound", b.pair_norm, 4.0 * b.free_pair_norm),
        Check {
            check: "residual".into(),
            constant: residuals.relative,
            bound: residuals.tolerance,
            pass: residuals.pass,
        },
    ];
    if let Some(o) = &oracle {
        checks.push(Check::at_most("oracle", o.relative_error, ORACLE_TOLERANCE));
    }
    let pass = checks.iter().all(|c| c.pass);

    let mut outputs = emit_json(
        &SolveReport {
            config: &cfg,
            status: report.status,
            converged: report.converged,
            certificate: cert,
            iterations: &report.iterations,
            bounds: b,
            max_contraction: report.max_contraction,
            differences_decreasing: report.differences_decreasing,
            residuals: &residuals,
            oracle_error: oracle.as_ref(),
            checks,
            pass,
        },
        args.report.as_deref(),
    )?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        for (name, traj) in [("u_T.lpfld", &sol.u), ("theta_T.lpfld", &sol.theta)] {
            let path = dir.join(name);
            io::save(&path, traj.last())?;
            outputs.push(path);
        }
    }
    Ok(Outcome::new(pass, outputs))
}

pub fn run_sweep(args: &SweepArgs) -> CmdResult<Outcome> {
    let grid = Grid::periodic(args.dim, args.points)?;
    let cfg = args.solver.config(args.dim)?;
    let theta_mode = match &args.theta_mode {
        Some(k) => k.clone(),
        None => [1, 2, 1][..args.dim.min(3)].to_vec(),
    };
    let spec = SweepSpec {
        amplitudes_u: args.amp_u.clone(),
        amplitudes_theta: args.amp_theta.clone(),
        theta_mode,
    };
    let (constants, rows) = sweep(grid, &spec, &cfg)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    let outputs = match &args.out {
        Some(p) => {
            std::fs::write(p, &buf)?;
            vec![p.clone()]
        }
        None => {
            std::io::stdout().lock().write_all(&buf)?;
            Vec::new()
        }
    };
    let mut out = Outcome::new(true, outputs);
    out.results = Some(serde_json::to_value(constants)?);
    Ok(out)
}

pub fn generate(args: &GenerateArgs) -> CmdResult<Outcome> {
    let grid = Grid::periodic(args.dim, args.points)?;
    let band = args
        .band
        .unwrap_or_else(|| LittlewoodPaley::default().band_radius(&grid));
    let field: Field = match args.kind {
        SampleKind::TaylorGreen => taylor_green(grid, args.amplitude)?,
        SampleKind::Mode => {
            let k = args.k.as_ref().ok_or("`mode` needs --k")?;
            single_mode(grid, k, args.amplitude)?
        }
        SampleKind::Random => RandomEnsemble::new(args.dim, band)
            .field(grid, args.components, args.seed, args.trial)
            .scaled(args.amplitude),
        SampleKind::Solenoidal => RandomEnsemble::new(args.dim, band)
            .solenoidal(grid, args.seed, args.trial)
            .scaled(args.amplitude),
        SampleKind::Zero => Field::zeros(grid, args.components),
    };
    io::save(&args.out, &field)?;
    Ok(Outcome::new(true, vec![args.out.clone()]))
}
