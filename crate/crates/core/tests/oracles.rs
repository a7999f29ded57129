//! Values fixed by closed forms evaluated here, independently of the
//! library's multipliers.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use lp_core::besov::{chemin_lerner_norm, kato_weighted_norm, lp_norm, time_norm, FieldTrajectory};
use lp_core::samples::single_mode;
use lp_core::solver::duhamel_integral;
use lp_core::{ops, BesovSpec, Exponent, Field, Grid, LittlewoodPaley};

const INF: Exponent = Exponent::Infinity;

fn two() -> Exponent {
    Exponent::Finite(2.0)
}

/// `cos 3x + cos(6y)/2 + cos(12x)/4`: each mode sits where one block
/// symbol is identically 1 (shells 1, 2 and 3).
fn three_shell_field() -> Field {
    let g = Grid::periodic(2, 64).unwrap();
    single_mode(g, &[3, 0], 1.0)
        .unwrap()
        .add(&single_mode(g, &[0, 6], 0.5).unwrap())
        .unwrap()
        .add(&single_mode(g, &[12, 0], 0.25).unwrap())
        .unwrap()
}

#[test]
fn flat_shell_modes_fall_in_single_blocks() {
    let f = three_shell_field();
    let lp = LittlewoodPaley::default();
    let l2 = PI * 2f64.sqrt();
    let expected = [(1, 1.0), (2, 0.5), (3, 0.25)];
    for q in -1..=lp.q_top(f.grid()) {
        let block = lp.block(&f, q);
        let amp = expected.iter().find(|(k, _)| *k == q).map_or(0.0, |(_, a)| *a);
        assert_relative_eq!(lp_norm(&block, two()), amp * l2, epsilon = 1e-12, max_relative = 1e-12);
        assert_relative_eq!(lp_norm(&block, INF), amp, epsilon = 1e-12, max_relative = 1e-12);
    }
}

#[test]
fn besov_norms_of_three_shell_field() {
    let f = three_shell_field();
    let lp = LittlewoodPaley::default();
    let one = Exponent::Finite(1.0);
    // Σ_q (2^{qs}(3+q)^α a_q c_p)^r with c_2 = π√2, c_∞ = 1
    let frozen = [
        (BesovSpec { s: -1.0, p: two(), r: one, alpha: 0.0 }, 2.9156419281664276),
        (BesovSpec { s: 0.0, p: INF, r: INF, alpha: 1.0 }, 4.0),
        (BesovSpec { s: 0.5, p: two(), r: two(), alpha: 0.5 }, 17.771531752633464),
        (BesovSpec { s: -1.0, p: INF, r: one, alpha: 1.0 }, 2.8125),
        (BesovSpec { s: 1.0, p: two(), r: INF, alpha: 0.0 }, 8.885765876316732),
    ];
    for (spec, value) in frozen {
        assert_relative_eq!(lp.besov_norm(&f, &spec), value, max_relative = 1e-12);
    }
}

#[test]
fn sine_has_root_pi_l2_norm() {
    let g = Grid::periodic(1, 64).unwrap();
    let f = Field::from_fn(g, 1, |x, _| x[0].sin());
    assert_relative_eq!(lp_norm(&f, two()), PI.sqrt(), max_relative = 1e-10);
}

#[test]
fn single_mode_chemin_lerner_matches_time_integral() {
    // ‖e^{tΔ}cos(k·x)‖ in L²_t: ∫₀^T e^{-2|k|²t} dt = (1 - e^{-2|k|²T}) / (2|k|²)
    let g = Grid::periodic(2, 32).unwrap();
    let f = single_mode(g, &[3, 0], 1.0).unwrap();
    let horizon = 0.5;
    let times: Vec<f64> = (0..=4000).map(|i| horizon * i as f64 / 4000.0).collect();
    let traj = FieldTrajectory::from_fn(times, horizon, |t| ops::heat_propagate(&f, t).unwrap()).unwrap();
    let k2 = 9.0;
    let time_l2 = ((1.0 - (-2.0 * k2 * horizon).exp()) / (2.0 * k2)).sqrt();
    let spec = BesovSpec::plain(0.0, two(), Exponent::Finite(1.0));
    let expected = PI * 2f64.sqrt() * time_l2;
    assert_relative_eq!(chemin_lerner_norm(&traj, two(), &spec), expected, max_relative = 1e-6);
}

#[test]
fn trapezoid_time_norm_of_linear_profile() {
    let times: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let values: Vec<f64> = times.iter().map(|t| 2.0 * t).collect();
    // held constant on (0, 0.1): 0.1·0.2 + ∫_{0.1}^{1} 2t dt
    assert_relative_eq!(time_norm(&times, &values, 1.0, Exponent::Finite(1.0)), 0.02 + 0.99, max_relative = 1e-14);
    assert_eq!(time_norm(&times, &values, 1.0, INF), 2.0);
}

#[test]
fn heat_kernel_weighted_sup_sits_at_smallest_time() {
    // unit mass at the origin; t^{1/2}|ln(t/e²)|·(4πt)^{-1/2} decreases on (0, 1)
    let g = Grid::periodic(1, 512).unwrap();
    let mut values = vec![0.0; 512];
    values[0] = 1.0 / g.spacing();
    let delta = Field::new(g, 1, values).unwrap();
    let times: Vec<f64> = (0..=32).map(|i| 10f64.powf(-2.0 + 2.0 * i as f64 / 32.0)).collect();
    let traj = FieldTrajectory::from_fn(times.clone(), 1.0, |t| ops::heat_propagate(&delta, t).unwrap()).unwrap();
    let sup = kato_weighted_norm(&traj, 1.0, INF).unwrap();
    let t0 = times[0];
    let first = t0.sqrt() * (t0.ln() - 2.0).abs() * lp_norm(&traj.fields()[0], INF);
    assert_eq!(sup, first);
    let gauss = t0.sqrt() * (t0.ln() - 2.0).abs() / (4.0 * PI * t0).sqrt();
    assert_relative_eq!(sup, gauss, max_relative = 1e-3);
}

#[test]
fn duhamel_of_constant_mode_source() {
    // ∫₀^t e^{-(t-s)|k|²} ds = (1 - e^{-|k|²t}) / |k|²
    let g = Grid::periodic(2, 16).unwrap();
    let f = single_mode(g, &[2, 1], 1.0).unwrap();
    let times: Vec<f64> = (0..=8).map(|i| i as f64 / 16.0).collect();
    let source = FieldTrajectory::new(times.clone(), vec![f.clone(); times.len()], 0.5).unwrap();
    let out = duhamel_integral(&source, &times).unwrap();
    for (t, field) in times.iter().zip(out.fields()) {
        let factor = (1.0 - (-5.0 * t).exp()) / 5.0;
        assert!(field.max_abs_diff(&f.scaled(factor)).unwrap() < 1e-10, "t = {t}");
    }
}

#[test]
fn product_of_modes_has_sum_and_difference_frequencies() {
    // cos a·cos b = (cos(a+b) + cos(a-b)) / 2
    let g = Grid::periodic(2, 32).unwrap();
    let a = single_mode(g, &[3, 1], 1.0).unwrap();
    let b = single_mode(g, &[1, 2], 1.0).unwrap();
    let expected = single_mode(g, &[4, 3], 0.5)
        .unwrap()
        .add(&single_mode(g, &[2, -1], 0.5).unwrap())
        .unwrap();
    assert!(ops::dealiased_product(&a, &b).unwrap().max_abs_diff(&expected).unwrap() < 1e-13);
}
