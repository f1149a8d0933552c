use super::*;
use num_bigint::BigUint;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn naive(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[test]
fn reduce_examples() {
    let raw = RawWord(vec![Letter::pos(0), Letter::neg(0), Letter::pos(1)]);
    assert_eq!(raw.reduce(), w("b"));
    assert!(RawWord(vec![]).reduce().is_e());
    let raw = RawWord(vec![Letter::pos(0), Letter::pos(1), Letter::neg(1), Letter::pos(0)]);
    assert_eq!(raw.reduce(), w("a a"));
}

#[test]
fn multiply_examples() {
    assert_eq!(w("a b").mul(&w("b^-1 a")), w("a a"));
    assert_eq!(w("a b c").mul(&Word::e()), w("a b c"));
    assert_eq!(w("y1 y2 a").mul(&w("a^-1 y2^-1")), w("y1"));
}

#[test]
fn inverse_power_conjugate_examples() {
    assert_eq!(w("a b").inverse(), w("b^-1 a^-1"));
    assert_eq!(w("a b a^-1").pow(2), w("a b b a^-1"));
    assert_eq!(w("a b a^-1").pow(-2), w("a b^-1 b^-1 a^-1"));
    assert!(w("a b").pow(0).is_e());
    assert_eq!(w("a").conjugate(&w("b")), w("a b a^-1"));
}

#[test]
fn concatenation_examples() {
    assert!(w("a b").is_concatenation(&w("a")));
    assert!(!w("a b").is_concatenation(&w("b^-1")));
    assert!(Word::e().is_concatenation(&w("a")));
}

#[test]
fn letters_examples() {
    assert_eq!(w("a b^-1 a").letters(), Alphabet::from_ids([0, 1]));
    assert!(Word::e().letters().is_empty());
    let run = w("y[1..100]").letters();
    assert_eq!(run.ranges(), &[(23, 122)]);
}

#[test]
fn cyclic_decompose_examples() {
    assert_eq!(w("a b a^-1").cyclic_decompose().unwrap(), (w("a"), w("b")));
    assert_eq!(w("a b").cyclic_decompose().unwrap(), (Word::e(), w("a b")));
    let x = w("a b a b^-1 a^-1");
    let (p, c) = x.cyclic_decompose().unwrap();
    assert_eq!(p, w("a b"));
    assert_eq!(c, w("a"));
    assert!(c.is_concatenation(&c));
    assert_eq!(Word::product([&p, &c, &p.inverse()]), x);
    assert_eq!(Word::e().cyclic_decompose(), Err(WordError::EmptyWord));
}

#[test]
fn cyclic_member_examples() {
    assert_eq!(w("a b b a^-1").cyclic_member(&w("a b a^-1")).unwrap(), Some(2));
    assert_eq!(Word::e().cyclic_member(&w("a")).unwrap(), Some(0));
    assert_eq!(w("a b").cyclic_member(&w("b a")).unwrap(), None);
    assert_eq!(w("a").cyclic_member(&Word::e()), Err(WordError::EmptyGenerator));
    let c = w("a y[1..50] b^-1");
    for k in -5..=5 {
        assert_eq!(c.pow(k).cyclic_member(&c).unwrap(), Some(k));
    }
}

#[test]
fn fresh_run_examples() {
    let r = Word::fresh_run(GeneratorId(5), &BigUint::from(3u32)).unwrap();
    assert_eq!(r, Word::from_letters([Letter::pos(5), Letter::pos(6), Letter::pos(7)]));
    let big = Word::fresh_run(GeneratorId(0), &(BigUint::from(1u32) << 32)).unwrap();
    assert_eq!(big.length(), BigUint::from(1u64 << 32));
    assert_eq!(big.segment_count(), 1);
    assert!(Word::fresh_run(GeneratorId(u64::MAX), &BigUint::from(2u32)).is_err());
    assert!(!w("a b").supported_in(&Alphabet::from_ids([0])));
}

#[test]
fn run_cancellation_is_bulk() {
    let f = w("y[1..1000000]");
    let g = w("a");
    let g0 = Word::product([&f, &g, &f.inverse()]);
    assert_eq!(g0.segment_count(), 3);
    assert_eq!(f.inverse().mul(&g0).mul(&f), g);
    // partial cancellation inside a run
    let tail = w("y[500001..1000000]^-1");
    assert_eq!(f.mul(&tail), w("y[1..500000]"));
    // opposite direction runs only cancel one letter
    let odd = w("y[7..5]^-1");
    assert_eq!(w("y[1..5]").mul(&odd), w("y[1..4] y6^-1 y7^-1"));
}

#[test]
fn descending_run_to_id_zero_cancels() {
    let r = Word::run(6, 7, Dir::Desc, Sign::Pos).unwrap();
    assert!(r.mul(&r.inverse()).is_e());
    assert!(r.inverse().mul(&r).is_e());
    let tail = w("a");
    assert_eq!(r.mul(&tail).mul(&tail.inverse()).mul(&r.inverse()), Word::e());
}

#[test]
fn canonical_form_is_unique() {
    let a = Word::from_letters((23..40).map(Letter::pos));
    let b = w("y1 y2").mul(&w("y[3..17]"));
    assert_eq!(a, b);
    assert_eq!(a.segment_count(), 1);
    let pieces = w("y[1..3]").mul(&w("y4"));
    assert_eq!(pieces, w("y[1..4]"));
    assert_eq!(pieces.segment_count(), 1);
}

#[test]
fn slicing() {
    let x = w("a y[1..10] b");
    assert_eq!(x.prefix(3), w("a y1 y2"));
    assert_eq!(x.suffix(2), w("y10 b"));
    assert_eq!(x.drop_prefix(11), w("b"));
    assert_eq!(x.drop_suffix(12), Word::e());
    let (p, s) = x.split_at(5);
    assert_eq!(p.mul(&s), x);
}

#[test]
fn shortlex_order() {
    let mut ws = vec![w("b"), w("a a"), w("a^-1"), w("a"), Word::e(), w("y[1..9]"), w("y[1..8] y10")];
    ws.sort();
    assert_eq!(
        ws,
        vec![Word::e(), w("a"), w("a^-1"), w("b"), w("a a"), w("y[1..9]"), w("y[1..8] y10")]
    );
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn letter() -> impl Strategy<Value = Letter> {
        (0u64..4, any::<bool>()).prop_map(|(id, s)| {
            Letter::new(GeneratorId(id), if s { Sign::Pos } else { Sign::Neg })
        })
    }

    fn runny_letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            prop_oneof![
                letter().prop_map(|l| vec![l]),
                (0u64..30, 1u64..8, any::<bool>(), any::<bool>()).prop_map(|(s, n, asc, pos)| {
                    let sign = if pos { Sign::Pos } else { Sign::Neg };
                    (0..n)
                        .map(|t| {
                            let id = if asc { s + t } else { s + n - 1 - t };
                            Letter::new(GeneratorId(id), sign)
                        })
                        .collect()
                }),
            ],
            0..8,
        )
        .prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn matches_naive_reduction(ls in runny_letters(), ms in runny_letters()) {
            let a = Word::from_letters(ls.iter().copied());
            let b = Word::from_letters(ms.iter().copied());
            prop_assert_eq!(a.flatten(1 << 20).unwrap(), naive(&ls));
            let joined: Vec<Letter> = ls.iter().chain(ms.iter()).copied().collect();
            prop_assert_eq!(a.mul(&b).flatten(1 << 20).unwrap(), naive(&joined));
            prop_assert_eq!(a.mul(&b), Word::from_letters(joined.iter().copied()));
            prop_assert_eq!(a.mul(&a.inverse()), Word::e());
            prop_assert_eq!(a.junction_cancel(&b) as usize,
                (naive(&ls).len() + naive(&ms).len() - naive(&joined).len()) / 2);
        }

        #[test]
        fn order_matches_flat_order(ls in runny_letters(), ms in runny_letters()) {
            let a = Word::from_letters(ls);
            let b = Word::from_letters(ms);
            let fa = a.flatten(1 << 20).unwrap();
            let fb = b.flatten(1 << 20).unwrap();
            let flat = fa.len().cmp(&fb.len()).then(fa.cmp(&fb));
            prop_assert_eq!(a.cmp(&b), flat);
            prop_assert_eq!(a == b, fa == fb);
        }

        #[test]
        fn decomposition_and_powers(ls in runny_letters(), k in -6i64..6) {
            let c = Word::from_letters(ls);
            prop_assume!(!c.is_e());
            let (p, core) = c.cyclic_decompose().unwrap();
            prop_assert!(core.is_concatenation(&core));
            prop_assert_eq!(Word::product([&p, &core, &p.inverse()]), c.clone());
            let mut naive_pow = Word::e();
            for _ in 0..k.unsigned_abs() {
                naive_pow = naive_pow.mul(&if k < 0 { c.inverse() } else { c.clone() });
            }
            prop_assert_eq!(c.pow(k), naive_pow.clone());
            prop_assert_eq!(naive_pow.cyclic_member(&c).unwrap(), Some(k));
        }

        #[test]
        fn text_round_trip(ls in runny_letters()) {
            let a = Word::from_letters(ls);
            prop_assert_eq!(text::parse_word(&a.to_string()).unwrap(), a);
        }
    }
}
