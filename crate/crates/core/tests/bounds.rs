use magbound_core::bounds::*;
use magbound_core::constants::semiclassical_constant;
use magbound_core::eig::Spectrum;
use magbound_core::lattice::*;
use proptest::prelude::*;

fn spectrum(shape: Shape, n: usize, bc: BoundaryCondition, b: f64) -> (LatticeDomain, Spectrum) {
    let d = build_domain(shape, n, bc).unwrap();
    let s = assemble_magnetic(&d, &GaugeField::symmetric(b)).spectrum(false).unwrap();
    (d, s)
}

#[test]
fn aizenman_lieb_monotonicity() {
    for b in [0.0, 15.0] {
        let (d, s) = spectrum(Shape::Square, 16, BoundaryCondition::Dirichlet, b);
        let grid = linear_grid(1.0, d.validity_limit(), 200);
        let sups: Vec<f64> = [0.0, 0.5, 1.0, 1.5]
            .iter()
            .map(|&g| fit_power_constant(&s.values, g, g + 1.0, &grid) / (semiclassical_constant(g, 2).unwrap() * d.area))
            .collect();
        assert!(sups.windows(2).all(|w| w[1] <= w[0] + 1e-6), "{sups:?}");
    }
}

#[test]
fn lifting_reproduces_the_gamma_one_bound() {
    let (d, s) = spectrum(Shape::Square, 24, BoundaryCondition::Dirichlet, 20.0);
    let grid = linear_grid(10.0, d.validity_limit(), 200);
    let reps = verify_lifting(&s, 1.0, 1.5, 1.0, &grid).unwrap();
    assert_eq!(tally(&reps).1, 0);
}

#[test]
fn lattice_bounds_small_scale() {
    let (d, s) = spectrum(Shape::Square, 24, BoundaryCondition::Dirichlet, 0.0);
    let grid = linear_grid(25.0, d.validity_limit(), 60);
    assert_eq!(tally(&verify_bly(&s, &d, 0.0, 1.0, &grid, 0.02).unwrap()).1, 0);
    assert_eq!(tally(&verify_magdomain(&s, 1.0, &grid).unwrap()).1, 0);
    let (dm, sm) = spectrum(Shape::Square, 24, BoundaryCondition::Dirichlet, 30.0);
    for (g, a) in [(1.0, 2.0), (0.0, 1.0)] {
        assert_eq!(tally(&verify_diamagdisc(&s, &sm, g, a, &grid).unwrap()).1, 0);
    }
    assert_eq!(tally(&verify_diamagdisc(&s, &s, 1.0, 2.0, &grid).unwrap()).1, 0);
    let slack = default_slack(30.0, dm.spacing);
    assert_eq!(tally(&verify_bly(&sm, &dm, 30.0, 1.0, &grid, slack).unwrap()).1, 0);
    let (dn, sn) = spectrum(Shape::Square, 24, BoundaryCondition::Neumann, 30.0);
    let r = verify_homneu(&sn, &dn, 30.0, 1.0, &linear_grid(1.0, 29.0, 10), 0.05).unwrap();
    assert!(r.iter().all(|x| x.rhs == 0.0 && x.verdict == Verdict::Holds));
}

#[test]
fn magdomain_trivial_below_ground_state() {
    let s = Spectrum::from_values(vec![3.0, 5.0], 0);
    let r = verify_magdomain(&s, 1.0, &[1.0, 3.0]).unwrap();
    assert!(r.iter().all(|x| x.rhs == 0.0 && x.verdict == Verdict::Holds));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riesz_mean_monotone(vals in prop::collection::vec(0.0f64..100.0, 1..40), a in 0.0f64..120.0, da in 0.0f64..10.0, gamma in 0.0f64..2.0) {
        let s = Spectrum::from_values(vals, 0);
        prop_assert!(riesz_mean(&s, a + da, gamma) >= riesz_mean(&s, a, gamma));
    }

    #[test]
    fn riesz_mean_step_at_zero_gamma(vals in prop::collection::vec(0.0f64..100.0, 1..40), k in 0usize..40) {
        let s = Spectrum::from_values(vals, 0);
        let v = s.values[k % s.len()];
        let at = riesz_mean(&s, v, 0.0);
        let above = riesz_mean(&s, v * (1.0 + 1e-12) + 1e-300, 0.0);
        prop_assert_eq!(at as usize, s.values.iter().filter(|&&x| x < v).count());
        prop_assert!(above > at);
    }

    #[test]
    fn riesz_mean_continuous(vals in prop::collection::vec(0.0f64..100.0, 1..40), a in 0.0f64..120.0, gamma in 0.5f64..2.0) {
        let s = Spectrum::from_values(vals, 0);
        let eps = 1e-9;
        prop_assert!((riesz_mean(&s, a + eps, gamma) - riesz_mean(&s, a, gamma)).abs() <= 40.0 * 1e-4 * 200f64.powf(gamma));
    }

    #[test]
    fn report_ratio_and_verdict(lhs in 0.0f64..10.0, rhs in 1e-3f64..10.0, slack in 0.0f64..0.2) {
        let r = BoundReport::new("x", 1.0, lhs, rhs, slack, Direction::Upper);
        prop_assert_eq!(r.ratio, lhs / rhs);
        prop_assert_eq!(r.verdict == Verdict::Holds, r.ratio <= 1.0 + slack);
    }
}
