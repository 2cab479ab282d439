mod common;

use common::{field, one_form, poly_map, poly_map_deg, solved_rank2, two_form};
use eds_core::exterior::{interior, pullback, wedge};
use eds_core::pfaffian::{cauchy_char, derived};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const C3: &[&str] = &["u", "v", "w"];
const S2: &[&str] = &["s1", "s2"];

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn wedge_is_graded_commutative(a in one_form(C3), b in one_form(C3), c in two_form(C3)) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        prop_assert!(a.wedge(&a).is_zero());
        prop_assert_eq!(a.wedge(&c), c.wedge(&a));
        prop_assert_eq!(wedge(&a, &b).unwrap(), a.wedge(&b));
    }

    #[test]
    fn interior_is_an_antiderivation(x in field(C3), a in one_form(C3), b in one_form(C3)) {
        let lhs = interior(&x, &a.wedge(&b)).unwrap();
        let rhs = b.scale(&a.interior(&x).as_function()).sub(&a.scale(&b.interior(&x).as_function()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_derivative_of_one_form_on_fields(a in one_form(C3), x in field(C3), y in field(C3)) {
        let lhs = a.d().interior(&x).interior(&y).as_function();
        let ax = a.interior(&x).as_function();
        let ay = a.interior(&y).as_function();
        let xy = x.lie_bracket(&y);
        let rhs = &(&x.apply(&ay) - &y.apply(&ax)) - &a.interior(&xy).as_function();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_composes_contravariantly(phi in poly_map(S2, C3), psi in poly_map_deg(C3, C3, 1), a in one_form(C3)) {
        let composite = phi.then(&psi).unwrap();
        let lhs = pullback(&composite, &a).unwrap();
        let rhs = phi.pullback(&psi.pullback(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_respects_wedge(phi in poly_map(S2, C3), a in one_form(C3), b in one_form(C3)) {
        let lhs = phi.pullback(&a.wedge(&b)).unwrap();
        let rhs = phi.pullback(&a).unwrap().wedge(&phi.pullback(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_antisymmetric(x in field(C3), y in field(C3)) {
        prop_assert_eq!(x.lie_bracket(&y), y.lie_bracket(&x).scale(&(-1).into()));
        prop_assert!(x.lie_bracket(&x).is_zero());
    }
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn derived_system_lies_in_system(s in solved_rank2()) {
        let d = derived(&s).unwrap().value;
        for g in d.generators() {
            prop_assert!(s.ideal().contains(g));
            prop_assert!(s.reduce(&g.d()).is_zero());
        }
    }

    #[test]
    fn cauchy_fields_are_characteristic(s in solved_rank2()) {
        let c = cauchy_char(&s).unwrap();
        for x in &c.fields {
            prop_assert!(s.contains_field(x));
            for g in s.generators() {
                prop_assert!(s.reduce(&g.d().interior(x)).is_zero());
            }
        }
    }
}
