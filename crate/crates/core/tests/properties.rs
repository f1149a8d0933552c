//! Randomized invariants of the public API against the naive oracles.

mod common;

use common::{flat, random_word, reduce, rep_product_ok};
use fgtop_core::filter::{ChainState, Preset, Schedule};
use fgtop_core::nbhd::{compose, enumerate_members, member, BaseSet, Budget, MembershipAnswer, Nsys};
use fgtop_core::poset::Mode;
use fgtop_core::word::text::parse_alphabet;
use fgtop_core::word::{Letter, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_budget() -> Budget {
    Budget {
        leaf_len: 4,
        exp: 2,
        nodes: 2000,
    }
}

fn words(seed: u64, count: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_word(&mut rng, 4, 6)).collect()
}

/// A depth-2 finite enrichment of the trivial system over `{a, b}`.
fn finite_system(ws: &[Word]) -> Nsys {
    let x = parse_alphabet("a b").unwrap();
    let mut b: Vec<Word> = ws
        .iter()
        .filter(|w| w.supported_in(&x) && w.len() <= 4)
        .flat_map(|w| [w.clone(), w.inverse()])
        .collect();
    b.push(Word::gen(0));
    b.push(Word::gen(0).inverse());
    let base = Nsys::trivial(x.clone(), 2).unwrap();
    base.enrich(BaseSet::finite(b), x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_match_stack_reduction(seed in any::<u64>()) {
        let ws = words(seed, 3);
        let (u, v, w) = (&ws[0], &ws[1], &ws[2]);
        prop_assert_eq!(flat(&u.mul(v)), reduce(&[u, v]));
        prop_assert_eq!(u.mul(v).mul(w), u.mul(&v.mul(w)));
        prop_assert!(u.mul(&u.inverse()).is_e());
        prop_assert_eq!(flat(&u.conjugate(v)), reduce(&[u, v, &u.inverse()]));
        prop_assert_eq!(u.pow(3), Word::product([u, u, u]));
        prop_assert_eq!(u.pow(-2), u.inverse().pow(2));
    }

    #[test]
    fn text_round_trips(seed in any::<u64>()) {
        for w in words(seed, 4) {
            prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }

    #[test]
    fn enumerated_members_carry_valid_certificates(seed in any::<u64>()) {
        let sys = finite_system(&words(seed, 3));
        for level in 0..=sys.depth() {
            let en = enumerate_members(&sys, level, small_budget()).unwrap();
            prop_assert!(en.items.iter().any(|(w, _)| w.is_e()));
            for (w, rep) in en.items.iter().take(40) {
                prop_assert_eq!(&rep.word, w);
                prop_assert_eq!(rep.level, level);
                prop_assert!(rep_product_ok(rep));
                prop_assert!(member(&sys, level, w, small_budget()).unwrap().is_yes());
            }
        }
    }

    #[test]
    fn composed_certificates_are_members(seed in any::<u64>()) {
        let sys = finite_system(&words(seed, 3));
        let upper = enumerate_members(&sys, 1, small_budget()).unwrap();
        let picks: Vec<_> = upper.items.iter().take(6).collect();
        for (u, ru) in &picks {
            for (v, rv) in &picks {
                for x in [None, Some(Letter::pos(1))] {
                    let rep = compose(&sys, 0, x, ru, rv).unwrap();
                    let mut expect = u.mul(v);
                    if let Some(l) = x {
                        expect = Word::letter(l).conjugate(&expect);
                    }
                    prop_assert_eq!(&rep.word, &expect);
                    prop_assert!(rep_product_ok(&rep));
                    let ans = member(&sys, 0, &expect, small_budget()).unwrap();
                    prop_assert!(!matches!(ans, MembershipAnswer::No(_)));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn chain_state_round_trips(seed in 0u64..1000, steps in 0usize..6, preset in 0usize..4) {
        let preset = [Preset::T2, Preset::Assgp, Preset::Simple, Preset::Full][preset];
        let mut st = ChainState::new(Schedule::new(preset, seed), Mode::Test(2), small_budget());
        for _ in 0..steps {
            st.step();
        }
        let text = st.serialize();
        let back = ChainState::deserialize(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back.chain.len(), steps + 1);
    }
}
