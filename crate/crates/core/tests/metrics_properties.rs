use proptest::prelude::*;
use supersinglet::metrics::{fidelity, fidelity_formula, supersinglet, ProtocolCoefficients};
use supersinglet::protocol::{run_three_atom_protocol, ProtocolTimes};
use supersinglet::{InteractionParams, C64};

#[test]
fn supersinglets_are_antisymmetric() {
    for n in 2..=4 {
        let s = supersinglet(n).unwrap();
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-12);
        for i in 0..n {
            for j in i + 1..n {
                let swapped = s.swap_atoms(i, j).unwrap();
                let overlap = s.inner(&swapped).unwrap();
                assert!((overlap + 1.0).norm() < 1e-12, "n={n} swap ({i},{j}) gives {overlap}");
            }
        }
    }
}

#[test]
fn three_atom_sign_convention() {
    use supersinglet::Level::{E, F, G};
    let s = supersinglet(3).unwrap();
    let a = 1.0 / 6f64.sqrt();
    for (levels, sign) in
        [([G, F, E], 1.0), ([G, E, F], -1.0), ([F, G, E], -1.0), ([E, F, G], -1.0), ([E, G, F], 1.0), ([F, E, G], 1.0)]
    {
        assert!((s.amplitude_of(&levels) - C64::new(sign * a, 0.0)).norm() < 1e-15, "{levels:?}");
    }
}

#[test]
fn single_product_state_has_one_sixth_fidelity() {
    let p = InteractionParams::symmetric(1.0, 0.0).unwrap();
    let s = run_three_atom_protocol(ProtocolTimes::new(0.0, 0.0, 0.0).unwrap(), &p, 6).unwrap();
    let (atoms, prob) = s.project_cavity(0).unwrap();
    assert_eq!(prob, 1.0);
    assert!((fidelity(&atoms, &supersinglet(3).unwrap()).unwrap() - 1.0 / 6.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fidelity_ignores_global_phase(t in prop::array::uniform3(0.0f64..100.0), g in 0.1f64..20.0, phi in 0.0f64..std::f64::consts::TAU) {
        let p = InteractionParams::symmetric(g, 0.0).unwrap();
        let (atoms, _) = run_three_atom_protocol(ProtocolTimes::new(t[0], t[1], t[2]).unwrap(), &p, 6)
            .unwrap()
            .project_cavity(0)
            .unwrap();
        let target = supersinglet(3).unwrap();
        let rotated = atoms.scaled(C64::from_polar(1.0, phi));
        prop_assert!((fidelity(&atoms, &target).unwrap() - fidelity(&rotated, &target).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn formula_matches_inner_product(t in prop::array::uniform3(0.0f64..100.0), g in 0.1f64..20.0, r in -1.0f64..=1.0) {
        let p = InteractionParams::symmetric(g, r * g).unwrap();
        let c = ProtocolCoefficients::closed_form(t, &p).unwrap();
        let (atoms, _) = run_three_atom_protocol(ProtocolTimes::new(t[0], t[1], t[2]).unwrap(), &p, 6)
            .unwrap()
            .project_cavity(0)
            .unwrap();
        let direct = fidelity(&atoms, &supersinglet(3).unwrap()).unwrap();
        prop_assert!((fidelity_formula(&c).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn supersinglet_size_limits() {
    assert!(supersinglet(1).is_err());
    assert!(supersinglet(7).is_err());
    assert_eq!(supersinglet(5).unwrap().len(), 120);
}
