use fracprog::apps::{generate_uplink, schedule, secrecy, svm, Topology};
use fracprog::rng::seeded;
use fracprog::{evaluate_objective, FpError, SolverConfig};

#[test]
fn svm_matches_angle_oracle() {
    let mut rng = seeded(5);
    for _ in 0..5 {
        let (pts, labels) = svm::random_separable(8, 0.05, &mut rng);
        let s = svm::solve_svm_margin(&pts, &labels, &SolverConfig::default()).unwrap();
        let (_, _, best) = svm::svm_angle_oracle(&pts, &labels).unwrap();
        assert!((s.margin - best).abs() < 1e-6, "{} vs {best}", s.margin);
    }
}

#[test]
fn svm_margin_matches_reported_boundary() {
    let (pts, labels) = svm::random_separable(12, 0.1, &mut seeded(9));
    let s = svm::solve_svm_margin(&pts, &labels, &SolverConfig::default()).unwrap();
    assert!((s.w.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(s.margin, svm::margin(&pts, &labels, &s.w, s.b));
}

#[test]
fn secrecy_value_matches_objective() {
    let net = secrecy::two_link_reference();
    let s = secrecy::solve_secrecy(&net, &[10.0, 10.0], &SolverConfig::default()).unwrap();
    let problem = secrecy::secrecy_problem(&net, false).unwrap();
    assert!((evaluate_objective(&problem, &s.x).unwrap() - s.value).abs() < 1e-12);
    assert!((secrecy::sum_secrecy_rate(&net, &s.x).unwrap() - s.value).abs() < 1e-9);
}

#[test]
fn scheduling_reports_its_own_rate() {
    let topo = Topology { users_per_cell: 3, tx_power_dbm: 23.0, ..Topology::default() };
    for seed in 0..3 {
        let inst = generate_uplink(&topo, seed).unwrap();
        let init = schedule::strongest_candidates(&inst).unwrap();
        let s = schedule::schedule_uplink_fplinq(&inst, &init, &SolverConfig::default().with_max_iters(2000)).unwrap();
        assert!(s.trace.is_monotone(1e-10));
        let check = schedule::scheduled_rate(&inst, &s.schedule, &s.powers).unwrap();
        assert_eq!(check, s.value);
    }
}

#[test]
fn not_separable_is_reported() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
    let err = svm::solve_svm_margin(&pts, &[1.0, -1.0, 1.0], &SolverConfig::default()).unwrap_err();
    assert_eq!(err, FpError::NotSeparable);
}
