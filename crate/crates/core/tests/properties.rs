//! Invariants of the vector fields, spectra and integrator over random inputs.

use fracl_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn state(r: f64) -> impl Strategy<Value = State3> {
    (-r..r, -r..r, -r..r).prop_map(|(a, b, c)| State3::new(a, b, c))
}

fn order(q: f64) -> FractionalOrder {
    FractionalOrder::new(q).unwrap()
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::E0),
        Just(Family::E1),
        Just(Family::E2),
        Just(Family::E3)
    ]
}

#[test]
fn matrix_form_matches_componentwise_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let x = State3::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        );
        let a = rhs_matrix_form(x);
        let b = rhs_uncontrolled(x);
        assert!((a - b).max_abs() <= 1e-12, "{x}");
    }
}

#[test]
fn residual_vanishes_without_controls() {
    for family in Family::ALL {
        for m in -10..=10 {
            let spec = EquilibriumSpec::new(family, m as f64);
            assert_eq!(equilibrium_residual(&spec, &ControlParams::NONE), 0.0);
        }
    }
}

proptest! {
    #[test]
    fn jacobian_is_symmetric(x in state(10.0), c1 in -10.0..10.0f64, c2 in -10.0..10.0f64) {
        let j = jacobian(x, &ControlParams::literal(c1, c2));
        prop_assert_eq!(j, j.transpose());
    }

    #[test]
    fn jacobian_matches_central_differences(x in state(5.0), c1 in -5.0..5.0f64, c2 in -5.0..5.0f64, anchored in any::<bool>()) {
        let c = if anchored {
            ControlParams::anchored(c1, c2, State3::new(0.3, -1.0, 2.0))
        } else {
            ControlParams::literal(c1, c2)
        };
        let j = jacobian(x, &c);
        let h = 1e-5;
        for col in 0..3 {
            let mut e = [0.0; 3];
            e[col] = h;
            let dx = State3::from_array(e);
            let fd = (1.0 / (2.0 * h)) * (rhs_controlled(x + dx, &c) - rhs_controlled(x - dx, &c));
            for (row, v) in fd.to_array().iter().enumerate() {
                let entry = j.0[row][col];
                prop_assert!((v - entry).abs() <= 1e-6 * (1.0 + entry.abs()));
            }
        }
    }

    #[test]
    fn sign_flips_commute_with_the_flow(x in state(10.0), k in 0usize..3) {
        let flips = [[-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, -1.0]];
        let s = flips[k];
        let flip = |v: State3| State3::new(s[0] * v.x1, s[1] * v.x2, s[2] * v.x3);
        prop_assert_eq!(rhs_uncontrolled(flip(x)), flip(rhs_uncontrolled(x)));
    }

    #[test]
    fn lipschitz_bound_is_monotone(x in state(10.0), d in 1e-3..10.0f64, grow in 1e-3..5.0f64) {
        let base = lipschitz_bound(x, d).unwrap();
        prop_assert!(lipschitz_bound(x, d + grow).unwrap() > base);
        let bigger = (1.0 + grow) * x;
        if x.norm() > 0.0 {
            prop_assert!(lipschitz_bound(bigger, d).unwrap() > base);
        }
    }

    #[test]
    fn trace_and_determinant_identities(x in state(10.0), c1 in -10.0..10.0f64, c2 in -10.0..10.0f64) {
        let j = jacobian(x, &ControlParams::literal(c1, c2));
        let e = solve_cubic(&char_poly(&j)).unwrap();
        let scale = 1.0 + j.0.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!((e.sum().re - j.trace()).abs() <= 1e-10 * scale);
        prop_assert!((e.product().re - j.det()).abs() <= 1e-10 * scale.powi(3));
        prop_assert!(e.is_real(1e-10 * scale));
    }

    #[test]
    fn unstable_stays_unstable_for_larger_orders(
        fam in family(), m in -5.0..5.0f64, c1 in -5.0..5.0f64, c2 in -5.0..5.0f64, q in 0.05..1.0f64, dq in 0.0..1.0f64
    ) {
        let spec = EquilibriumSpec::new(fam, m);
        let q2 = (q + dq * (1.0 - q)).min(1.0);
        if classify(&spec, c1, c2, order(q)).status == StabilityStatus::Unstable {
            prop_assert_eq!(classify(&spec, c1, c2, order(q2)).status, StabilityStatus::Unstable);
        }
    }

    #[test]
    fn real_spectra_give_order_independent_verdicts(fam in family(), m in -5.0..5.0f64, c1 in -5.0..5.0f64, c2 in -5.0..5.0f64) {
        let spec = EquilibriumSpec::new(fam, m);
        let e = eigen_closed_form(&spec, c1, c2);
        prop_assume!(e.values.iter().all(|v| v.abs() > TOL_ZERO));
        let first = matignon_test(&e, order(0.1)).status;
        for q in [0.5, 0.9, 0.99] {
            prop_assert_eq!(matignon_test(&e, order(q)).status, first);
        }
    }

    #[test]
    fn interval_agrees_with_classifier(
        fam in prop_oneof![Just(Family::E1), Just(Family::E2), Just(Family::E3)],
        c1 in -10.0..-0.01f64, c2 in -10.0..-0.01f64
    ) {
        let i = stability_interval_m(fam, c1, c2).unwrap().unwrap();
        let q = order(0.7);
        let mid = classify(&EquilibriumSpec::new(fam, i.midpoint()), c1, c2, q);
        prop_assert_eq!(mid.status, StabilityStatus::AsymptoticallyStable);
        let outside = classify(&EquilibriumSpec::new(fam, 1.01 * i.hi), c1, c2, q);
        prop_assert_eq!(outside.status, StabilityStatus::Unstable);
    }

    #[test]
    fn fixed_points_are_preserved_bitwise(fam in family(), m in -5.0..5.0f64, c1 in -3.0..3.0f64, c2 in -3.0..3.0f64, q in 0.1..=1.0f64) {
        let spec = EquilibriumSpec::new(fam, m);
        let controls = ControlParams::anchored(c1, c2, spec.point());
        let cfg = IntegratorConfig::new(order(q), 0.01, 200, spec.point(), controls).unwrap();
        let t = integrate(&cfg).unwrap();
        prop_assert!(t.states().all(|x| x == spec.point()));
    }

    #[test]
    fn first_increment_scales_with_h_to_the_q(q in 0.05..1.0f64, h in 1e-2..0.5f64) {
        let x0 = State3::new(0.3, -0.7, 1.1);
        let c = ControlParams::literal(-0.5, 0.25);
        let inc = |h: f64| {
            let cfg = IntegratorConfig::new(order(q), h, 1, x0, c).unwrap();
            step(x0, &cfg).unwrap() - x0
        };
        let (a, b) = (inc(h), inc(2.0 * h));
        for (u, v) in a.to_array().iter().zip(b.to_array()) {
            prop_assert!((v / u / 2f64.powf(q) - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn closed_form_matches_cubic_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let fam = Family::ALL[rng.gen_range(0..4)];
        let spec = EquilibriumSpec::new(fam, rng.gen_range(-10.0..10.0));
        let (c1, c2) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let a = eigen_closed_form(&spec, c1, c2).sorted();
        let b = eigen_numeric(&spec, c1, c2).sorted();
        for (x, y) in a.iter().zip(&b) {
            assert!(
                (x.re - y.re).abs() <= 1e-9 && y.im.abs() <= 1e-9,
                "{spec} c=({c1},{c2}): {a:?} vs {b:?}"
            );
        }
    }
}

#[test]
fn identical_configs_give_identical_trajectories() {
    let cfg = IntegratorConfig::new(
        order(0.65),
        0.01,
        500,
        State3::new(0.01, 0.01, 1.76),
        ControlParams::literal(-1.75, -2.0),
    )
    .unwrap();
    let a = integrate(&cfg).unwrap();
    let b = integrate(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(output::trajectory_csv(&a), output::trajectory_csv(&b));
}

#[test]
fn one_step_matches_volterra_form() {
    // With the integrand frozen at F(x0), x1 = x0 + I^h_q[F(x0)].
    let x0 = State3::new(0.01, 0.01, 1.76);
    let c = ControlParams::literal(-1.75, -2.0);
    for q in [0.3, 0.65, 0.9, 1.0] {
        let h = 0.01;
        let cfg = IntegratorConfig::new(order(q), h, 1, x0, c).unwrap();
        let next = step(x0, &cfg).unwrap();
        let f = rhs_controlled(x0, &c).to_array();
        let x = x0.to_array();
        for i in 0..3 {
            let samples = [(0.0, f[i]), (h, f[i])];
            let vol = x[i] + rl_integral(&samples, order(q), h).unwrap();
            assert!((vol - next.to_array()[i]).abs() <= 1e-9);
        }
    }
}
