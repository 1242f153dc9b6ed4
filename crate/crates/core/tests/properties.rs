use num_bigint::BigInt;
use proptest::prelude::*;

use weilrank::classify::{classify, classify_auto};
use weilrank::exact::IntPoly;
use weilrank::json::{classification, parse_poly_input, poly_input};
use weilrank::search::{enumerate_weil, SearchSpec};
use weilrank::weil::{base_change, WeilPolynomial};

fn surfaces(q: u64) -> Vec<WeilPolynomial> {
    enumerate_weil(&SearchSpec::new(2, q)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_and_neatness_survive_base_change(q in prop::sample::select(vec![2u64, 3, 4, 5]), i in 0usize..1000, n in 1u32..4) {
        let all = surfaces(q);
        let w = &all[i % all.len()];
        let r = classify_auto(w, None).unwrap();
        let wb = base_change(&base_change(w, r.extension_degree).unwrap(), n).unwrap();
        let rb = classify(&wb).unwrap();
        prop_assert_eq!((rb.rank, rb.neat, rb.conditions()), (r.rank, r.neat, r.conditions()));
        prop_assert_eq!(rb.newton_polygon, r.newton_polygon);
    }

    #[test]
    fn poly_json_round_trip(c in prop::collection::vec(-10_000i64..10_000, 1..8), q in 2i64..1000) {
        let p = IntPoly::from_i64s(&c);
        let text = poly_input(&p, &BigInt::from(q)).to_string();
        let (p2, q2, _) = parse_poly_input(&text).unwrap();
        prop_assert_eq!(p2, p);
        prop_assert_eq!(q2, BigInt::from(q));
    }

    #[test]
    fn report_json_is_deterministic(q in prop::sample::select(vec![2u64, 3, 5]), i in 0usize..1000) {
        let all = surfaces(q);
        let w = &all[i % all.len()];
        let a = classify_auto(w, None).unwrap();
        let b = classify_auto(w, None).unwrap();
        let input = (w.poly(), w.q());
        prop_assert_eq!(classification(input, &a).to_string(), classification(input, &b).to_string());
    }
}
