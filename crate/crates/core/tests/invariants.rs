use fracprog::apps::{generate_mimo, generate_network, generate_pilot_instance, ncut, power, GraphInstance, NetworkInstance, Topology};
use fracprog::inner::project;
use fracprog::ldt::{ldt_gamma_update, ldt_value};
use fracprog::matrix::{extrapolation_eta, random_cvec, BlockSet};
use fracprog::rng::seeded;
use fracprog::scalar::{surrogate_value, update_auxiliaries};
use fracprog::{ConstraintSet, SolverConfig, Transform};
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = f64> {
    1e-3..1e3f64
}

fn parts() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|n| {
        (
            prop::collection::vec(positive(), n),
            prop::collection::vec(positive(), n),
            prop::collection::vec(positive(), n),
            prop::collection::vec(positive(), n),
        )
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn qt_surrogate_sandwich((a, b, ah, bh) in parts()) {
        let w = vec![1.0; a.len()];
        let f = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x / y).sum() };
        let y = update_auxiliaries(Transform::Quadratic, &ah, &bh).unwrap();
        prop_assert!(surrogate_value(Transform::Quadratic, &a, &b, &y, &w).unwrap() <= f(&a, &b) * (1.0 + 1e-12) + 1e-12);
        prop_assert!(close(surrogate_value(Transform::Quadratic, &ah, &bh, &y, &w).unwrap(), f(&ah, &bh)));
    }

    #[test]
    fn inverse_surrogates_bound_negated_sum((a, b, ah, bh) in parts()) {
        let w = vec![1.0; a.len()];
        let neg = |a: &[f64], b: &[f64]| -> f64 { -a.iter().zip(b).map(|(x, y)| x / y).sum::<f64>() };
        for kind in [Transform::InverseQuadratic, Transform::AmGm] {
            let y = update_auxiliaries(kind, &ah, &bh).unwrap();
            let g = surrogate_value(kind, &a, &b, &y, &w).unwrap();
            prop_assert!(g <= neg(&a, &b) + 1e-9 * neg(&a, &b).abs().max(1.0), "{kind:?}");
            prop_assert!(close(surrogate_value(kind, &ah, &bh, &y, &w).unwrap(), neg(&ah, &bh)));
        }
    }

    #[test]
    fn ldt_gamma_is_maximizer((a, b, g, _) in parts()) {
        let w = vec![1.0; a.len()];
        let best = ldt_gamma_update(&a, &b).unwrap();
        let f: f64 = a.iter().zip(&b).map(|(x, y)| (x / y).ln_1p()).sum();
        let at_best = ldt_value(&a, &b, &best, &w).unwrap();
        prop_assert!(close(at_best, f));
        prop_assert!(ldt_value(&a, &b, &g, &w).unwrap() <= at_best + 1e-9 * at_best.abs().max(1.0));
    }

    #[test]
    fn ball_projection_is_idempotent(seed in 0u64..10_000, radius in 0.1..5.0f64, n in 1usize..6) {
        let x = random_cvec(&mut seeded(seed), n).scale(3.0);
        let p = BlockSet::Ball(radius).project(&x);
        prop_assert!(p.norm() <= radius * (1.0 + 1e-12));
        prop_assert!((BlockSet::Ball(radius).project(&p) - &p).norm() <= 1e-12 * radius);
    }

    #[test]
    fn projections_land_in_set(x in prop::collection::vec(-10.0..10.0f64, 4)) {
        let sets = [
            ConstraintSet::uniform_box(4, -1.0, 2.0),
            ConstraintSet::Ball { dim: 4, radius: 1.5 },
            ConstraintSet::Simplex { dim: 4 },
            ConstraintSet::PerColumnBall { rows: 2, cols: 2, radius: 0.5 },
            ConstraintSet::Product(vec![ConstraintSet::Ball { dim: 3, radius: 1.0 }, ConstraintSet::uniform_box(1, -1.0, 1.0)]),
        ];
        for set in &sets {
            let p = project(set, &x).unwrap();
            prop_assert!(set.contains(&p, 1e-9), "{} {p:?}", set.name());
            let again = project(set, &p).unwrap();
            prop_assert!(again.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-9));
        }
    }

    #[test]
    fn extrapolation_weights_in_unit_interval(j in 0usize..100_000) {
        let eta = extrapolation_eta(j);
        prop_assert!((0.0..1.0).contains(&eta));
    }

    #[test]
    fn power_control_is_monotone_and_feasible(seed in 0u64..1000) {
        let net = generate_network(&Topology::default(), seed).unwrap();
        let s = power::solve_power_control(&net, &power::full_power(&net), &SolverConfig::default().with_max_iters(300)).unwrap();
        prop_assert!(s.trace.is_monotone(1e-10));
        prop_assert!(s.x.iter().all(|p| *p >= 0.0 && *p <= net.power_cap));
        prop_assert!(s.value >= net.weighted_sum_rate(&power::full_power(&net)) - 1e-12);
    }

    #[test]
    fn ncut_ignores_label_names(seed in 0u64..500) {
        let g: GraphInstance = ncut::planted_graph(8, seed).unwrap();
        let labels = ncut::random_labels(8, 2, &mut seeded(seed));
        let swapped: Vec<usize> = labels.iter().map(|l| 1 - l).collect();
        prop_assert_eq!(ncut::ncut_value(&g, &labels), ncut::ncut_value(&g, &swapped));
        prop_assert!(ncut::same_partition(&labels, &swapped));
    }

    #[test]
    fn instances_round_trip_exactly(seed in 0u64..500) {
        let net = generate_network(&Topology::default(), seed).unwrap();
        prop_assert_eq!(NetworkInstance::from_text(&net.to_text()).unwrap(), net);
        let topo = Topology { cells: 2, ..Topology::default() };
        let mimo = generate_mimo(&topo, 2, 2, 1, seed).unwrap();
        prop_assert_eq!(fracprog::apps::MimoInstance::from_text(&mimo.to_text()).unwrap(), mimo);
        let pilot = generate_pilot_instance(&Topology { users_per_cell: 2, ..Topology::default() }, 2, 2, 1.0, seed).unwrap();
        prop_assert_eq!(fracprog::apps::PilotInstance::from_text(&pilot.to_text()).unwrap(), pilot);
    }
}
