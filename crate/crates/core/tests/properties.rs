use std::collections::BTreeSet;

use proptest::prelude::*;

use dlcalc::commands::{Command, Query, Session};
use dlcalc::gf2poly::{binom2, Gens, Poly, TruncatedSeries};
use dlcalc::models::{ModelAlgebra, ModelKind};
use dlcalc::opcalc::{
    is_admissible_upper, normalize_lower_indices, normalize_upper_indices, suspend, to_lower,
    to_upper, OpPoly, OpWord, Strategy as Rewrite,
};
use dlcalc::parse::parse_op_poly;
use dlcalc::verify::binom_oracle;

fn gens() -> Gens {
    let mut g = Gens::new();
    for (i, d) in [1u32, 3, 7].into_iter().enumerate() {
        g.push(format!("xi{}", i + 1), d, 1);
    }
    g
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(prop::collection::vec(0u32..4, 3), 0..6).prop_map(|terms| {
        let g = gens();
        Poly::from_monomials(terms.into_iter().map(|e| {
            let pairs: Vec<(u32, u32)> = e
                .into_iter()
                .enumerate()
                .filter(|&(_, k)| k > 0)
                .map(|(i, k)| (i as u32, k))
                .collect();
            g.monomial_from(&pairs)
        }))
    })
}

fn upper_word(max_len: usize, max_idx: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=max_idx, 1..=max_len)
}

proptest! {
    #[test]
    fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.add(&a).is_zero());
        prop_assert_eq!(a.mul(&b, None), b.mul(&a, None));
        prop_assert_eq!(a.mul(&b, None).mul(&c, None), a.mul(&b.mul(&c, None), None));
        prop_assert_eq!(a.mul(&b.add(&c), None), a.mul(&b, None).add(&a.mul(&c, None)));
        prop_assert_eq!(a.mul(&Poly::one(), None), a.clone());
    }

    #[test]
    fn frobenius_is_squaring(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.frobenius(), a.mul(&a, None));
        prop_assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
    }

    #[test]
    fn truncation_commutes_with_product(a in poly_strategy(), b in poly_strategy(), cap in 0u32..20) {
        prop_assert_eq!(a.mul(&b, Some(cap)), a.mul(&b, None).truncate(cap));
    }

    #[test]
    fn series_inverse(a in poly_strategy(), cap in 1u32..16) {
        let body = Poly::one().add(&a.add(&a.graded_component(0)));
        let s = TruncatedSeries::new(body, cap);
        let inv = s.invert().unwrap();
        prop_assert_eq!(s.mul(&inv).into_body(), Poly::one());
        prop_assert_eq!(inv.invert().unwrap(), s);
    }

    #[test]
    fn binom_matches_exact_oracle(a in -64i64..=64, b in 0i64..=64) {
        prop_assert_eq!(binom2(a, b), binom_oracle(a, b));
    }

    #[test]
    fn normalization_is_idempotent_and_confluent(w in upper_word(4, 24)) {
        let left = normalize_upper_indices(&w, Rewrite::LeftmostFirst);
        let right = normalize_upper_indices(&w, Rewrite::RightmostFirst);
        prop_assert_eq!(&left, &right);
        for v in &left {
            prop_assert!(is_admissible_upper(v));
            prop_assert_eq!(normalize_upper_indices(v, Rewrite::LeftmostFirst), BTreeSet::from([v.clone()]));
            let total: i64 = v.iter().sum();
            prop_assert_eq!(total, w.iter().sum::<i64>());
        }
    }

    #[test]
    fn lower_normal_forms_are_nondecreasing(w in upper_word(4, 10)) {
        for v in normalize_lower_indices(&w) {
            prop_assert!(v.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn index_conversion_round_trips(w in upper_word(4, 12), m in 0i64..12) {
        let lw = OpWord::lower(&w);
        let (up, deg) = to_upper(&lw, m).unwrap();
        prop_assert_eq!(to_lower(&up, m).unwrap(), lw);
        prop_assert!(deg >= m);
    }

    #[test]
    fn suspension_is_a_homomorphism(ws in prop::collection::vec(upper_word(3, 8), 0..4), a in 0u32..4, b in 0u32..4) {
        let p: OpPoly = ws.iter().map(|w| OpWord::lower(w)).collect();
        let q: OpPoly = ws.iter().rev().take(2).map(|w| OpWord::lower(&w.iter().map(|i| i + 1).collect::<Vec<_>>())).collect();
        let s = |x: &OpPoly, k| suspend(x, k).unwrap();
        prop_assert_eq!(s(&s(&p, a), b), s(&p, a + b));
        prop_assert_eq!(s(&p.add(&q), a), s(&p, a).add(&s(&q, a)));
    }

    #[test]
    fn op_poly_print_parse(ws in prop::collection::vec(upper_word(3, 30), 1..4)) {
        let p: OpPoly = ws.iter().map(|w| OpWord::upper(w)).collect();
        let text = p.to_string();
        let back = if text == "0" { OpPoly::zero() } else { parse_op_poly(&text).unwrap() };
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn model_print_parse_round_trip(a in poly_strategy()) {
        let model = ModelAlgebra::new(ModelKind::A, 31).unwrap();
        let a = a.truncate(31);
        let text = model.format(&a);
        let mut q = Query::new(Command::Act, Some(&text));
        q.options.cap = Some(31);
        let r = Session::new().run(&q).unwrap();
        prop_assert_eq!(&r.result_text, &text);
        let terms = model.gens().term_list(&a);
        prop_assert_eq!(r.result_terms, terms);
    }

    #[test]
    fn cartan_and_frobenius_collapse(a in poly_strategy(), b in poly_strategy(), s in 0i64..9) {
        let model = ModelAlgebra::new(ModelKind::A, 31).unwrap();
        let (a, b) = (a.truncate(7), b.truncate(7));
        let sq = a.frobenius();
        prop_assert_eq!(model.apply_upper(2 * s, &sq).unwrap(), model.apply_upper(s, &a).unwrap().frobenius());
        prop_assert!(model.apply_upper(2 * s + 1, &sq).unwrap().is_zero());
        // Cartan: Q^s(ab) = Σ Q^i a Q^{s-i} b on homogeneous inputs.
        for (x, y) in [(a.graded_component(3), b.graded_component(4)), (a.graded_component(1), b.graded_component(7))] {
            let lhs = model.apply_upper(s + 7, &x.mul(&y, None)).unwrap();
            let mut rhs = Poly::zero();
            for i in 0..=(s + 7) {
                rhs.add_assign(&model.apply_upper(i, &x).unwrap().mul(&model.apply_upper(s + 7 - i, &y).unwrap(), Some(31)));
            }
            prop_assert_eq!(lhs, rhs.truncate(31));
        }
    }
}

#[test]
fn normalize_terminates_on_short_words() {
    // Exhaustive over length-4 words with indices <= 32.
    let mut count = 0u64;
    let idx: Vec<i64> = (0..=32).collect();
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                for &d in &idx {
                    let out = normalize_upper_indices(&[a, b, c, d], Rewrite::LeftmostFirst);
                    assert!(out.iter().all(|v| is_admissible_upper(v)));
                    count += 1;
                }
            }
        }
    }
    assert_eq!(count, 33u64.pow(4));
}
