use gcv_core::certify::Compiled;
use gcv_core::poly::{parse_poly, Poly, Rational, VarTable};
use num_bigint::BigInt;
use proptest::prelude::*;

fn vars() -> VarTable {
    VarTable::new(["x", "y", "z"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

prop_compose! {
    fn poly()(terms in prop::collection::vec(((0u32..=3, 0u32..=3, 0u32..=2), rational()), 0..6)) -> Poly {
        Poly::from_terms(&vars(), terms.into_iter().map(|((a, b, c), q)| (vec![a, b, c], q)))
    }
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((p.clone() - p.clone()).is_zero());
        prop_assert_eq!(&p * &Poly::one(&vars()), p.clone());
    }

    #[test]
    fn leibniz_rule(p in poly(), q in poly(), j in 0usize..3) {
        let lhs = (&p * &q).partial_derivative(j);
        let rhs = &(&p.partial_derivative(j) * &q) + &(&p * &q.partial_derivative(j));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), a in point()) {
        let (pv, qv) = (p.eval_exact(&a).unwrap(), q.eval_exact(&a).unwrap());
        prop_assert_eq!((&p + &q).eval_exact(&a).unwrap(), &pv + &qv);
        prop_assert_eq!((&p * &q).eval_exact(&a).unwrap(), &pv * &qv);
    }

    #[test]
    fn display_parses_back(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string(), &vars()).unwrap(), p);
    }

    #[test]
    fn degree_is_additive(p in poly(), q in poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!((&p * &q).total_degree(), p.total_degree() + q.total_degree());
    }

    #[test]
    fn compiled_evaluation_matches_exact(p in poly(), a in point()) {
        let exact: f64 = num_traits::ToPrimitive::to_f64(&p.eval_exact(&a).unwrap()).unwrap();
        let x: Vec<f64> = a.iter().map(|q| num_traits::ToPrimitive::to_f64(q).unwrap()).collect();
        let approx = Compiled::new(&p).eval(&x);
        prop_assert!((approx - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{} vs {}", approx, exact);
    }
}
