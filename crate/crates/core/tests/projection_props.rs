use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use suslov_core::dynamics::integrate;
use suslov_core::levelset::{g_value, GkData};
use suslov_core::projection::{
    dpm_multiplicity, flow_slope, sample_state, wrap_theta1, wrap_theta2,
};
use suslov_core::{classify_region, from_torus, to_torus, LevelValues, Params, Sheet, TorusPoint};

fn smooth_level() -> impl Strategy<Value = (Params, LevelValues)> {
    (0.3f64..5.0, 0.3f64..5.0, 0.05f64..2.5, 0.05f64..2.5)
        .prop_filter("non-singular", |&(b1, b2, x1, x2)| {
            (x1 - 1.0).abs() > 1e-3 && (x2 - 1.0).abs() > 1e-3 && (x1 + x2 - 1.0).abs() > 1e-3 && b1 > 0.0 && b2 > 0.0
        })
        .prop_map(|(b1, b2, x1, x2)| {
            (Params::new(b1, b2).unwrap(), LevelValues::new(x1 * b1, x2 * b2).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn torus_round_trip((b, k) in smooth_level(), seed in any::<u64>()) {
        prop_assume!(!classify_region(&b, &k).is_singular());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample_state(&b, &k, &mut rng).unwrap();
        let t = to_torus(&s, &b, &k).unwrap();
        let back = from_torus(&t, &b, &k).unwrap();
        prop_assert!(back.distance(&s) <= 1e-12);
        // g_k - eps_k is gamma3^2
        let eps = GkData::new(&b, &k).eps;
        prop_assert!((g_value(t.theta1, t.theta2, &b, &k) - eps - s.gamma3 * s.gamma3).abs() <= 1e-12);
    }

    #[test]
    fn sheets_are_related_by_reflection((b, k) in smooth_level(), seed in any::<u64>()) {
        prop_assume!(!classify_region(&b, &k).is_singular());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample_state(&b, &k, &mut rng).unwrap();
        let t = to_torus(&s, &b, &k).unwrap();
        let r = to_torus(&s.reflect(), &b, &k).unwrap();
        prop_assert_eq!((t.theta1, t.theta2), (r.theta1, r.theta2));
        prop_assert_ne!(t.gamma3_sign, r.gamma3_sign);
    }

    #[test]
    fn multiplicity_counts_preimages((b, k) in smooth_level(), u in -1.0f64..1.0, phi in 0.0f64..(2.0 * PI)) {
        let rho = (1.0 - u * u).sqrt();
        let gamma = [rho * phi.cos(), rho * phi.sin(), u];
        let m = dpm_multiplicity(gamma, &b, &k).unwrap();
        let r1 = k.k1 - b.b1 * gamma[0] * gamma[0];
        let r2 = k.k2 - b.b2 * gamma[1] * gamma[1];
        let expect = if r1 < 0.0 || r2 < 0.0 { 0 } else { 4 };
        prop_assert_eq!(m, expect);
    }

    #[test]
    fn trajectories_stay_in_the_closure_of_uk((b, k) in smooth_level(), seed in any::<u64>()) {
        prop_assume!(!classify_region(&b, &k).is_singular());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s0 = sample_state(&b, &k, &mut rng).unwrap();
        let eps = GkData::new(&b, &k).eps;
        let traj = integrate(&s0, &b, 1e-3, 2.0).unwrap();
        for s in &traj.states {
            let t = to_torus(s, &b, &k).unwrap();
            prop_assert!(g_value(t.theta1, t.theta2, &b, &k) >= eps - 1e-9);
        }
    }

    #[test]
    fn wraps_stay_in_range(x in -100.0f64..100.0) {
        let a = wrap_theta1(x);
        let c = wrap_theta2(x);
        prop_assert!((-FRAC_PI_2..3.0 * FRAC_PI_2).contains(&a));
        prop_assert!((0.0..2.0 * PI).contains(&c));
        prop_assert!(((x - a) / (2.0 * PI) - ((x - a) / (2.0 * PI)).round()).abs() < 1e-9);
        prop_assert!(((x - c) / (2.0 * PI) - ((x - c) / (2.0 * PI)).round()).abs() < 1e-9);
    }
}

#[test]
fn projected_flow_is_a_straight_line_of_fixed_slope() {
    let b = Params::new(4.0, 1.0).unwrap();
    let k = LevelValues::new(1.0, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s0 = sample_state(&b, &k, &mut rng).unwrap();
    let traj = integrate(&s0, &b, 1e-3, 5.0).unwrap();
    let t0 = to_torus(&s0, &b, &k).unwrap();
    let (mut u1, mut u2) = (t0.theta1, t0.theta2);
    let (mut last1, mut last2) = (t0.theta1, t0.theta2);
    for s in &traj.states[1..] {
        let t = to_torus(s, &b, &k).unwrap();
        let d = |a: f64, b: f64| (a - b + PI).rem_euclid(2.0 * PI) - PI;
        u1 += d(t.theta1, last1);
        u2 += d(t.theta2, last2);
        last1 = t.theta1;
        last2 = t.theta2;
    }
    assert!(((u2 - t0.theta2) / (u1 - t0.theta1) - flow_slope(&b)).abs() < 1e-6);
}

#[test]
fn zero_sheet_lifts_to_the_equator() {
    let b = Params::new(4.0, 1.0).unwrap();
    let k = LevelValues::new(2.0, 0.75).unwrap();
    let eps = GkData::new(&b, &k).eps;
    // on theta2 = 0 the boundary is (k1/b1) cos^2 theta1 = eps
    let t1 = (eps / 0.5f64).sqrt().acos();
    let s = from_torus(
        &TorusPoint { theta1: t1, theta2: 0.0, gamma3_sign: Sheet::Zero },
        &b,
        &k,
    )
    .unwrap();
    assert_eq!(s.gamma3, 0.0);
    assert_eq!(to_torus(&s, &b, &k).unwrap().gamma3_sign, Sheet::Zero);
}
