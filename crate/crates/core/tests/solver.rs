use lp_core::samples::{single_mode, taylor_green, RandomEnsemble};
use lp_core::solver::{
    oracle_compare_with, picard_solve, quadrature_error_estimate, smallness_certificate, sweep, Regime, SolveStatus,
    SolverConfig, SweepSpec,
};
use lp_core::{ops, Exponent, Field, Grid};

fn grid() -> Grid {
    Grid::periodic(2, 32).unwrap()
}

/// Config with constants measured once on unit-size data.
fn config(regime: Regime, steps: usize) -> SolverConfig {
    let g = grid();
    let mut cfg = SolverConfig::new(2, 0.5, steps, regime);
    let cert = smallness_certificate(&taylor_green(g, 1.0).unwrap(), &Field::zeros(g, 1), &cfg).unwrap();
    cfg.lambda = Some(cert.lambda);
    cfg.eta = Some(cert.eta);
    cfg
}

fn unit_data() -> (Field, Field) {
    (taylor_green(grid(), 1.0).unwrap(), single_mode(grid(), &[1, 2], 0.05).unwrap())
}

#[test]
fn certificate_threshold_is_linear_in_amplitude() {
    let cfg = config(Regime::Intersection, 16);
    let (u, t) = unit_data();
    let unit = smallness_certificate(&u, &t, &cfg).unwrap();
    let threshold = unit.rhs / unit.lhs;
    let passes = |a: f64| smallness_certificate(&u.scaled(a), &t.scaled(a), &cfg).unwrap().pass;
    let (mut lo, mut hi) = (0.0, 4.0 * threshold);
    assert!(passes(lo) && !passes(hi));
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - threshold).abs() <= 1e-9 * threshold);
}

#[test]
fn scaled_up_data_fails_the_certificate_but_still_runs() {
    let cfg = config(Regime::Intersection, 16);
    let (u, t) = unit_data();
    let unit = smallness_certificate(&u, &t, &cfg).unwrap();
    let small = 0.5 * unit.rhs / unit.lhs;
    let sol = picard_solve(&u.scaled(100.0 * small), &t.scaled(100.0 * small), &cfg).unwrap();
    let cert = &sol.report.certificate;
    assert!(!cert.pass && cert.lhs >= cert.rhs);
    assert!(!sol.report.iterations.is_empty());
}

#[test]
fn iterates_stay_divergence_free() {
    let cfg = config(Regime::Intersection, 16);
    let ens = RandomEnsemble::new(2, 6.0);
    let u0 = ens.solenoidal(grid(), 3, 0).scaled(0.05);
    let t0 = ens.field(grid(), 1, 3, 1).scaled(0.01);
    let sol = picard_solve(&u0, &t0, &cfg).unwrap();
    assert_eq!(sol.report.status, SolveStatus::Converged);
    assert!(sol.report.iterations.iter().all(|r| r.divergence < 1e-12));
}

#[test]
fn reflection_symmetry_is_transported() {
    // θ even in x, u₁ odd, u₂ even: preserved by the flow with a = e_y
    let cfg = config(Regime::Intersection, 16);
    let g = grid();
    let u0 = taylor_green(g, 0.1).unwrap();
    let t0 = Field::from_fn(g, 1, |x, _| 0.02 * x[0].cos() * (2.0 * x[1]).cos());
    let sol = picard_solve(&u0, &t0, &cfg).unwrap();
    assert!(sol.report.converged);
    let n = g.points();
    let mirror = |flat: usize| {
        let idx = g.unflatten(flat);
        g.flatten(&[(n - idx[0]) % n, idx[1]])
    };
    for (u, theta) in sol.u.fields().iter().zip(sol.theta.fields()) {
        for flat in 0..g.len() {
            let m = mirror(flat);
            assert!((theta.values()[flat] - theta.values()[m]).abs() < 1e-10);
            assert!((u.component(0)[flat] + u.component(0)[m]).abs() < 1e-10);
            assert!((u.component(1)[flat] - u.component(1)[m]).abs() < 1e-10);
        }
    }
}

#[test]
fn linear_regime_matches_heat_flow() {
    let cfg = config(Regime::Intersection, 16);
    let u0 = RandomEnsemble::new(2, 6.0).solenoidal(grid(), 9, 0).scaled(1e-5);
    let t0 = Field::zeros(grid(), 1);
    let sol = picard_solve(&u0, &t0, &cfg).unwrap();
    let heat = ops::heat_propagate(&u0, cfg.horizon).unwrap();
    assert!(sol.u.last().max_abs_diff(&heat).unwrap() < 1e-8);
    let oracle = oracle_compare_with(&sol, &u0, &t0, &cfg).unwrap();
    assert!(oracle.u_error < 1e-8 && oracle.stable);
}

#[test]
fn heat_buoyancy_quadrature_is_second_order() {
    let g = grid();
    let mut cfg = config(Regime::Intersection, 8);
    cfg.nonlinear = false;
    let u0 = Field::zeros(g, 2);
    let t0 = single_mode(g, &[1, 2], 1.0).unwrap();
    let coarse = quadrature_error_estimate(&u0, &t0, &cfg).unwrap();
    cfg.steps = 16;
    let fine = quadrature_error_estimate(&u0, &t0, &cfg).unwrap();
    let ratio = coarse / fine;
    assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
}

#[test]
fn lebesgue_regime_converges_within_bounds() {
    let regime = Regime::Lebesgue {
        p: Exponent::Finite(4.0),
        r: Exponent::Finite(2.0),
    };
    let mut cfg = SolverConfig::new(2, 0.5, 16, regime);
    let (u, t) = unit_data();
    let unit = smallness_certificate(&u, &t, &cfg).unwrap();
    cfg.lambda = Some(unit.lambda);
    cfg.eta = Some(unit.eta);
    let a = 0.5 * unit.rhs / unit.lhs;
    let sol = picard_solve(&u.scaled(a), &t.scaled(a), &cfg).unwrap();
    assert!(sol.report.certificate.pass && sol.report.converged);
    assert!(sol.report.bounds.all());
    assert!(sol.report.differences_decreasing);
}

#[test]
fn iteration_cap_is_reported() {
    let mut cfg = config(Regime::Intersection, 8);
    cfg.max_iterations = 1;
    let (u, t) = unit_data();
    let sol = picard_solve(&u.scaled(0.01), &t.scaled(0.01), &cfg).unwrap();
    assert_eq!(sol.report.status, SolveStatus::MaxIterations);
    assert_eq!(sol.report.iteration_count(), 1);
}

#[test]
fn sweep_frontier_is_monotone() {
    let mut cfg = config(Regime::Intersection, 8);
    cfg.max_iterations = 20;
    let amps: Vec<f64> = (0..8).map(|i| 0.05 * 2f64.powi(i)).collect();
    let spec = SweepSpec {
        amplitudes_u: amps.clone(),
        amplitudes_theta: amps.iter().map(|a| 0.1 * a).collect(),
        theta_mode: vec![1, 2],
    };
    let (_, rows) = sweep(grid(), &spec, &cfg).unwrap();
    assert_eq!(rows.len(), 64);
    let pass = |i: usize, j: usize| {
        rows.iter()
            .find(|r| r.amp_u == spec.amplitudes_u[i] && r.amp_theta == spec.amplitudes_theta[j])
            .unwrap()
            .certificate_pass
    };
    for i in 0..8 {
        for j in 0..8 {
            if i + 1 < 8 {
                assert!(pass(i, j) || !pass(i + 1, j));
            }
            if j + 1 < 8 {
                assert!(pass(i, j) || !pass(i, j + 1));
            }
        }
    }
    assert!(pass(0, 0) && !pass(7, 7));
}
