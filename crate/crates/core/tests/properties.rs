use lp_core::besov::{chemin_lerner_norm, lebesgue_besov_norm, FieldTrajectory};
use lp_core::paraproduct::bony_identity;
use lp_core::samples::RandomEnsemble;
use lp_core::solver::Regime;
use lp_core::{io, ops, BesovSpec, Exponent, Field, Grid, LittlewoodPaley};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::Finite(1.0)),
        Just(Exponent::Finite(2.0)),
        (1.0f64..8.0).prop_map(Exponent::Finite),
        Just(Exponent::Infinity),
    ]
}

fn spec() -> impl Strategy<Value = BesovSpec> {
    (-2.0f64..2.0, exponent(), exponent(), 0.0f64..2.0).prop_map(|(s, p, r, alpha)| BesovSpec { s, p, r, alpha })
}

fn sample(dim: usize, points: usize, seed: u64, trial: u64) -> Field {
    let g = Grid::periodic(dim, points).unwrap();
    RandomEnsemble::new(dim, LittlewoodPaley::default().band_radius(&g)).field(g, 1, seed, trial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blocks_reconstruct(dim in 1usize..=3, seed in any::<u64>()) {
        let f = sample(dim, 16, seed, 0);
        let rec = LittlewoodPaley::default().decompose(&f).reconstruct();
        prop_assert!(rec.max_abs_diff(&f).unwrap() <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn blocks_are_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, q in -1i32..4) {
        let lp = LittlewoodPaley::default();
        let (f, g) = (sample(2, 16, seed, 0), sample(2, 16, seed, 1));
        let lhs = lp.block(&f.combine(a, &g, b).unwrap(), q);
        let rhs = lp.block(&f, q).combine(a, &lp.block(&g, q), b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn besov_norm_is_a_norm(seed in any::<u64>(), spec in spec(), c in -5.0f64..5.0) {
        let lp = LittlewoodPaley::default();
        let (f, g) = (sample(2, 16, seed, 0), sample(2, 16, seed, 1));
        let (nf, ng) = (lp.besov_norm(&f, &spec), lp.besov_norm(&g, &spec));
        prop_assert!(lp.besov_norm(&f.add(&g).unwrap(), &spec) <= (nf + ng) * (1.0 + 1e-12));
        let scaled = lp.besov_norm(&f.scaled(c), &spec);
        prop_assert!((scaled - c.abs() * nf).abs() <= 1e-12 * nf.max(1e-300));
    }

    #[test]
    fn summability_norms_decrease_in_r(seed in any::<u64>(), s in -2.0f64..2.0, p in exponent()) {
        let lp = LittlewoodPaley::default();
        let f = sample(2, 32, seed, 0);
        let blocks = lp.block_norms(&f, p);
        let at = |r: Exponent| BesovSpec::plain(s, p, r).combine(&blocks);
        let rs = [1.0, 1.5, 2.0, 4.0].map(Exponent::Finite);
        for w in rs.windows(2) {
            prop_assert!(at(w[1]) <= at(w[0]) * (1.0 + 1e-12));
        }
        prop_assert!(at(Exponent::Infinity) <= at(rs[3]) * (1.0 + 1e-12));
    }

    #[test]
    fn heat_flow_is_a_semigroup(seed in any::<u64>(), s in 0.0f64..0.5, t in 0.0f64..0.5) {
        let f = sample(2, 16, seed, 0);
        let two_steps = ops::heat_propagate(&ops::heat_propagate(&f, s).unwrap(), t).unwrap();
        let one_step = ops::heat_propagate(&f, s + t).unwrap();
        prop_assert!(two_steps.max_abs_diff(&one_step).unwrap() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent_and_solenoidal(seed in any::<u64>(), dim in 2usize..=3) {
        let g = Grid::periodic(dim, 16).unwrap();
        let u = RandomEnsemble::new(dim, 6.0).field(g, dim, seed, 0);
        let p = ops::helmholtz_project(&u).unwrap();
        prop_assert!(ops::divergence(&p).unwrap().max_abs() < 1e-12);
        prop_assert!(ops::helmholtz_project(&p).unwrap().max_abs_diff(&p).unwrap() < 1e-13);
    }

    #[test]
    fn bony_pieces_sum_to_the_product(seed in any::<u64>(), dim in 1usize..=3) {
        let points = if dim == 3 { 16 } else { 32 };
        let (u, v) = (sample(dim, points, seed, 0), sample(dim, points, seed, 1));
        prop_assert!(bony_identity(&u, &v).unwrap().relative < 1e-12);
    }

    #[test]
    fn matching_time_and_summation_exponents_commute(seed in any::<u64>(), rho in 1.0f64..4.0) {
        let (f, g) = (sample(2, 16, seed, 0), sample(2, 16, seed, 1));
        let times: Vec<f64> = (0..=8).map(|i| i as f64 / 16.0).collect();
        let traj = FieldTrajectory::from_fn(times, 0.5, |t| {
            ops::heat_propagate(&f, t).unwrap().combine(1.0, &g, t).unwrap()
        })
        .unwrap();
        let r = Exponent::Finite(rho);
        let spec = BesovSpec::plain(-1.0, Exponent::Finite(2.0), r);
        let a = chemin_lerner_norm(&traj, r, &spec);
        let b = lebesgue_besov_norm(&traj, r, &spec);
        prop_assert!((a - b).abs() <= 1e-10 * b);
    }

    #[test]
    fn field_files_round_trip(seed in any::<u64>(), dim in 1usize..=3, components in 1usize..=3) {
        let g = Grid::periodic(dim, 8).unwrap();
        let f = RandomEnsemble::new(dim, 3.0).field(g, components, seed, 0);
        let mut bytes = Vec::new();
        io::write_field(&mut bytes, &f).unwrap();
        let back = io::read_field(bytes.as_slice()).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        prop_assert_eq!(back.values(), f.values());
    }

    #[test]
    fn regime_strings_round_trip(p in 1.01f64..9.0, r in exponent(), eps in 0.01f64..2.0) {
        for regime in [
            Regime::Intersection,
            Regime::Lebesgue { p: Exponent::Finite(p), r },
            Regime::Weighted { p: Exponent::Finite(p), eps },
        ] {
            prop_assert_eq!(regime.to_string().parse::<Regime>().unwrap(), regime);
        }
    }

    #[test]
    fn exponents_round_trip(e in exponent()) {
        prop_assert_eq!(e.to_string().parse::<Exponent>().unwrap(), e);
    }
}
