mod common;

use berger_conformal::expr::{eval_jet3, eval_value, parse_expression};
use common::{finite_difference_mismatch, random_expression, COORDS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn expression() -> impl Strategy<Value = String> {
    (any::<u64>(), 1u32..5)
        .prop_map(|(seed, depth)| random_expression(&mut ChaCha8Rng::seed_from_u64(seed), depth))
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jets_match_central_differences(src in expression(), p in point()) {
        let e = parse_expression(&src, &COORDS).unwrap();
        let mismatch = finite_difference_mismatch(&e, &p, 1e-5);
        prop_assert!(mismatch <= 1e-6, "{src} at {p:?}: {mismatch:e}");
    }

    #[test]
    fn jet_derivatives_are_symmetric(src in expression(), p in point()) {
        let j = eval_jet3(&parse_expression(&src, &COORDS).unwrap(), &p).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                prop_assert_eq!(j.d2(i, k), j.d2(k, i));
                for l in 0..3 {
                    prop_assert_eq!(j.d3(i, k, l), j.d3(l, i, k));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_printing_round_trips(src in expression(), p in point()) {
        let e1 = parse_expression(&src, &COORDS).unwrap();
        let s1 = e1.to_string();
        let e2 = parse_expression(&s1, &COORDS).unwrap();
        prop_assert_eq!(&e1, &e2);
        prop_assert_eq!(&s1, &e2.to_string());
        prop_assert_eq!(eval_value(&e1, &p).unwrap(), eval_value(&e2, &p).unwrap());
    }
}
