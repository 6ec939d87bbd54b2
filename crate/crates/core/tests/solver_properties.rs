use assort_core::{
    generate_instance, logistic, solve_fixed_point, support_map, GenSpec, Matrix, ProblemInstance,
    RevenueTerms, Start, SupportIteration, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use proptest::prelude::*;

fn arb_instance() -> impl Strategy<Value = ProblemInstance> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-20.0f64..60.0, n * m),
            prop::collection::vec(0.0f64..60.0, n * m),
            prop::collection::vec(0.1f64..2.0, n * m),
            prop::collection::vec(0.0f64..60.0, n),
            prop::collection::vec(0.01f64..1.0, m),
        )
            .prop_map(move |(y, alpha, beta, gap, raw)| {
                let total: f64 = raw.iter().sum();
                let lambda = if m == 1 {
                    vec![1.0]
                } else {
                    raw.iter().map(|a| a / total).collect()
                };
                ProblemInstance::new(
                    Matrix::from_row_major(n, m, y).unwrap(),
                    Matrix::from_row_major(n, m, alpha).unwrap(),
                    Matrix::from_row_major(n, m, beta).unwrap(),
                    gap,
                    lambda,
                    RevenueTerms::default(),
                )
                .unwrap()
            })
    })
}

fn assert_monotone(instance: &ProblemInstance, start: Start, steps: usize) {
    let mut iter = SupportIteration::new(instance, start);
    let mut prev = iter.current().clone();
    for (t, next) in iter.by_ref().take(steps).enumerate() {
        for (a, b) in prev.as_slice().iter().zip(next.as_slice()) {
            match start {
                Start::ZeroStart => assert!(*b >= a - 1e-12, "step {t}: {b} < {a}"),
                Start::OneStart => assert!(*b <= a + 1e-12, "step {t}: {b} > {a}"),
            }
        }
        if next == prev {
            break;
        }
        prev = next;
    }
}

proptest! {
    #[test]
    fn iterates_are_monotone(instance in arb_instance()) {
        assert_monotone(&instance, Start::ZeroStart, 2_000);
        assert_monotone(&instance, Start::OneStart, 2_000);
    }

    #[test]
    fn limits_bracket_and_satisfy_residual(instance in arb_instance()) {
        let tol = DEFAULT_TOL;
        let low = solve_fixed_point(&instance, Start::ZeroStart, tol, DEFAULT_MAX_ITER).unwrap();
        let high = solve_fixed_point(&instance, Start::OneStart, tol, DEFAULT_MAX_ITER).unwrap();
        prop_assume!(low.converged && high.converged);
        for (l, h) in low.q.as_slice().iter().zip(high.q.as_slice()) {
            prop_assert!(*l <= h + 2.0 * tol);
        }
        for sol in [&low, &high] {
            prop_assert!(sol.residual <= tol);
            let r = support_map(&instance, &sol.q).sup_distance(&sol.q);
            prop_assert!(r <= tol);
            prop_assert!(sol.q.as_slice().iter().all(|q| (0.0..=1.0).contains(q)));
        }
    }

    #[test]
    fn closed_form_without_network_effects(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=2) {
        let spec = GenSpec { n, m, network_effects: false, ..GenSpec::default() };
        let instance = generate_instance(&spec, seed).unwrap();
        for start in [Start::ZeroStart, Start::OneStart] {
            let sol = solve_fixed_point(&instance, start, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            prop_assert!(sol.converged);
            for i in 0..n {
                for j in 0..m {
                    let v = instance.y().get(i, j) - instance.beta().get(i, j) * instance.funding_gap()[i];
                    prop_assert!((sol.q.get(i, j) - logistic(v)).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn probabilities_strictly_inside_for_moderate_utilities() {
    // |V| stays below 30 here, where σ is representable away from 0 and 1.
    let instance = ProblemInstance::with_unit_beta(
        Matrix::from_rows(vec![vec![3.0, -4.0], vec![10.0, 0.5]]).unwrap(),
        Matrix::from_rows(vec![vec![5.0, 2.0], vec![1.0, 8.0]]).unwrap(),
        vec![6.0, 9.0],
        vec![0.25, 0.75],
        RevenueTerms::default(),
    )
    .unwrap();
    for start in [Start::ZeroStart, Start::OneStart] {
        let sol = solve_fixed_point(&instance, start, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(sol.converged);
        assert!(sol.q.as_slice().iter().all(|&q| q > 0.0 && q < 1.0));
    }
}

#[test]
fn network_effects_raise_the_largest_fixed_point() {
    for seed in 0..50 {
        let on = GenSpec { n: 3, m: 2, ..GenSpec::default() };
        let off = GenSpec { network_effects: false, ..on.clone() };
        let a = generate_instance(&on, seed).unwrap();
        let b = generate_instance(&off, seed).unwrap();
        let qa = solve_fixed_point(&a, Start::OneStart, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let qb = solve_fixed_point(&b, Start::OneStart, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for (x, y) in qa.q.as_slice().iter().zip(qb.q.as_slice()) {
            assert!(*x >= y - 2e-10);
        }
    }
}
