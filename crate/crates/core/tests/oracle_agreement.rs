use supersinglet::amplitudes::propagator;
use supersinglet::ode::{self, oracle_propagator, OdeConfig, DEFAULT_PHASE_STEP};
use supersinglet::{InteractionParams, SubspaceIndex};

#[test]
fn closed_form_matches_rk4_on_random_points() {
    let results = ode::check_random(200, 42, 100.0, 20.0).unwrap();
    assert_eq!(results.len(), 200);
    for r in &results {
        assert!(r.max_deviation < 1e-6, "{r:?}");
    }
}

#[test]
fn random_checks_are_seeded() {
    let a = ode::check_random(5, 7, 10.0, 5.0).unwrap();
    let b = ode::check_random(5, 7, 10.0, 5.0).unwrap();
    let key =
        |v: &[ode::OracleComparison]| v.iter().map(|r| (r.n, r.t, r.g1, r.delta, r.max_deviation)).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
}

#[test]
fn halving_the_step_converges() {
    let coarse = OdeConfig::default();
    let fine = OdeConfig::with_phase_step(DEFAULT_PHASE_STEP / 2.0).unwrap();
    let mut worst = 0.0f64;
    for (n, t, p) in ode::validation_grid() {
        let a = oracle_propagator(n, t, &p, &coarse).unwrap();
        let b = oracle_propagator(n, t, &p, &fine).unwrap();
        worst = worst.max(a.max_abs_diff(&b));
    }
    assert!(worst < 1e-9, "step halving moved entries by {worst:e}");
}

#[test]
fn unequal_couplings_match_oracle() {
    let p = InteractionParams::new(0.7, 2.3, -0.4).unwrap();
    for n in -2..=5 {
        let n = SubspaceIndex::new(n).unwrap();
        for t in [0.3, 7.0, 31.0] {
            let exact = propagator(n, t, &p).unwrap();
            let numeric = oracle_propagator(n, t, &p, &OdeConfig::default()).unwrap();
            assert!(exact.max_abs_diff(&numeric) < 1e-6, "n={} t={t}", n.get());
        }
    }
}
