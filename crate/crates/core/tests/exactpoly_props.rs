//! Property tests for the exact polynomial ring and its integration.

mod common;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use common::exact_interpolatory_integral;
use twinsieve_core::exactpoly::{rat, MultiPoly, Rational};

const VARS: [&str; 2] = ["x", "y"];

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(((0u32..=3, 0u32..=3), arb_rational()), 0..6).prop_map(|terms| {
        MultiPoly::from_terms(
            &VARS,
            terms.into_iter().map(|((ex, ey), c)| (vec![ex, ey], c)),
        )
    })
}

fn assert_reduced(p: &MultiPoly) {
    for (_, c) in p.terms() {
        assert!(c.denom() > &0.into());
        assert!(c.numer().gcd(c.denom()).is_one(), "unreduced {}", c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_commutes_and_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        let left = a.add(&b).unwrap().add(&c).unwrap();
        let right = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        assert_reduced(&left);
    }

    #[test]
    fn multiplication_commutes_and_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        assert_reduced(&left);
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn definite_integrals_are_additive_over_adjacent_ranges(
        p in arb_poly(),
        la in arb_rational(),
        lb in arb_rational(),
        lc in arb_rational(),
        slope in -3i64..=3,
    ) {
        // limits may be polynomials in the surviving variable
        let mk = |c: &Rational| {
            MultiPoly::constant(&VARS, c.clone())
                .add(&MultiPoly::var(&VARS, "y").unwrap().scale(&rat(slope, 1)))
                .unwrap()
        };
        let (a, b, c) = (mk(&la), mk(&lb), mk(&lc));
        let ab = p.integrate_definite("x", &a, &b).unwrap();
        let bc = p.integrate_definite("x", &b, &c).unwrap();
        let ac = p.integrate_definite("x", &a, &c).unwrap();
        prop_assert_eq!(ab.add(&bc).unwrap(), ac);
    }

    #[test]
    fn integration_commutes_with_exact_quadrature(
        p in arb_poly(),
        a in arb_rational(),
        b in arb_rational(),
        y0 in arb_rational(),
    ) {
        // symbolic ∫_a^b p(x, y) dx evaluated at y = y0 equals the exact
        // interpolatory quadrature of x ↦ p(x, y0); both routes are exact,
        // so agreement is exact rational equality (well within 1e-20)
        let la = MultiPoly::constant(&VARS, a.clone());
        let lb = MultiPoly::constant(&VARS, b.clone());
        let symbolic = p.integrate_definite("x", &la, &lb).unwrap();
        let mut point = BTreeMap::new();
        point.insert("y".to_string(), y0.clone());
        let symbolic_at = symbolic.eval(&point).unwrap();

        let integrand = |x: &Rational| {
            let mut pt = BTreeMap::new();
            pt.insert("x".to_string(), x.clone());
            pt.insert("y".to_string(), y0.clone());
            p.eval(&pt).unwrap()
        };
        let quad = exact_interpolatory_integral(integrand, &a, &b, 3);
        prop_assert_eq!(symbolic_at, quad);
    }

    #[test]
    fn substitution_matches_pointwise_composition(
        p in arb_poly(),
        c0 in arb_rational(),
        c1 in arb_rational(),
        x0 in arb_rational(),
    ) {
        // substitute y := c0 + c1 x, then evaluate at x0, equals evaluating
        // p at (x0, c0 + c1 x0)
        let repl = MultiPoly::constant(&VARS, c0.clone())
            .add(&MultiPoly::var(&VARS, "x").unwrap().scale(&c1))
            .unwrap();
        let composed = p.substitute("y", &repl).unwrap();
        let mut pt = BTreeMap::new();
        pt.insert("x".to_string(), x0.clone());
        let lhs = composed.eval(&pt).unwrap();
        let y0 = &c0 + &c1 * &x0;
        pt.insert("y".to_string(), y0);
        let rhs = p.eval(&pt).unwrap();
        prop_assert_eq!(lhs, rhs);
        assert_reduced(&composed);
    }
}
