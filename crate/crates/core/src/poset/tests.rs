use super::*;
use crate::nbhd::identity_rep;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn set(s: &str) -> Alphabet {
    crate::word::text::parse_alphabet(s).unwrap()
}

fn budget() -> Budget {
    Budget {
        leaf_len: 4,
        exp: 2,
        nodes: 3000,
    }
}

fn trivial(s: &str, n: usize) -> Condition {
    Condition::new(Nsys::trivial(set(s), n).unwrap())
}

#[test]
fn extension_examples() {
    let p = trivial("{a}", 1);
    let q = Condition::new(p.u.cyclic_alphabet_extension(&set("{y1}")).unwrap());
    let r = is_extension(&q, &p, budget());
    assert!(r.passed(), "{}", r.summary());
    assert!(r.checked > 0);

    let q = pad_levels(&p, 2);
    assert!(is_extension(&q, &p, budget()).passed());

    let p = trivial("{a, b}", 1);
    let q = Condition::new(p.u.enrich(BaseSet::finite([w("b"), w("b^-1")]), p.x.clone()).unwrap());
    let r = is_extension(&q, &p, budget());
    assert!(!r.passed());
    assert!(r.violations.iter().any(|v| v.word == w("b")));

    // reversed direction fails on the alphabet
    let r = is_extension(&p, &trivial("{a, b, c}", 1), budget());
    assert!(!r.alphabet_ok);
    assert_eq!(r.alphabet_witness, Some(w("c")));
}

#[test]
fn pad_examples() {
    let p = trivial("{a}", 1);
    let q = pad_levels(&p, 3);
    assert_eq!(q.n, 3);
    for i in 0..=3 {
        assert!(member(&q.u, i, &Word::e(), budget()).unwrap().is_yes());
        assert!(member(&q.u, i, &w("a"), budget()).unwrap().is_no());
    }
    assert!(pad_levels(&q, 2).u.ptr_eq(&q.u));
    assert!(is_extension(&q, &p, budget()).passed());
}

#[test]
fn add_letters_examples() {
    let p = trivial("{a}", 1);
    let q = add_letters(&p, &set("{a, b}")).unwrap();
    assert_eq!(q.x, set("{a, b}"));
    let ans = member(&q.u, 1, &w("b b b"), budget()).unwrap();
    ans.rep().unwrap().verify_full(&q.u).unwrap();
    assert!(add_letters(&p, &set("{a}")).unwrap().u.ptr_eq(&p.u));
    assert!(is_extension(&q, &p, budget()).passed());
}

#[test]
fn separate_examples() {
    let p = trivial("{a}", 1);
    let q = separate(&p, &w("a")).unwrap();
    assert_eq!(q.n, 2);
    assert!(member(&q.u, 2, &w("a"), budget()).unwrap().is_no());
    let q = separate(&p, &w("b")).unwrap();
    assert!(q.x.contains(1));
    let q2 = separate(&pad_levels(&p, 4), &w("a")).unwrap();
    assert_eq!(q2.n, 5);
    assert_eq!(separate(&p, &Word::e()), Err(PosetError::TrivialG));
}

#[test]
fn threshold_examples() {
    assert_eq!(threshold(1, 1).unwrap(), BigUint::from(16u8));
    assert_eq!(threshold(2, 1).unwrap(), BigUint::from(256u16));
    assert_eq!(threshold(2, 2).unwrap(), BigUint::from(4_294_967_296u64));
    assert_eq!(threshold(3, 2).unwrap(), BigUint::one() << 48);
    assert!(threshold(1, 40).is_err());
}

#[test]
fn conj_extension_examples() {
    let p = trivial("{a, b}", 1);
    let ext = conj_extension(&p, &w("a"), &w("b"), Mode::Test(2), budget()).unwrap();
    assert_eq!(ext.cert.word, w("y1 y2 a y2^-1 y1^-1 b"));
    assert_eq!(ext.cert.level, 1);
    ext.cert.verify(&ext.condition.u).unwrap();
    assert!(ext.report.passed(), "{}", ext.report.summary());

    let ext = conj_extension(&p, &w("a"), &Word::e(), Mode::Test(2), budget()).unwrap();
    assert_eq!(ext.cert.word, w("y1 y2 a y2^-1 y1^-1"));

    let p = trivial("{a}", 1);
    let ext = conj_extension(&p, &w("a"), &Word::e(), Mode::Paper, budget()).unwrap();
    assert_eq!(ext.setting.k, 16);
    assert_eq!(ext.setting.f.segment_count(), 1);
    assert!(matches!(
        conj_extension(&p, &Word::e(), &Word::e(), Mode::Test(2), budget()),
        Err(PosetError::TrivialG)
    ));
}

#[test]
fn cyc_witness_examples() {
    let p = trivial("{a}", 1);
    let (q, cert, report) = cyc_witness(&p, &w("a"), Mode::Test(2), budget()).unwrap();
    let words: Vec<Word> = cert.factors.iter().map(|f| f.word.clone()).collect();
    assert_eq!(words, vec![w("y2^-1 y1^-1"), w("y1 y2 a y2^-1 y1^-1"), w("y1 y2")]);
    cert.verify(&q.u).unwrap();
    assert!(report.passed());
    assert_eq!(report.violations.len(), 0);
    assert!(matches!(
        cyc_witness(&p, &Word::e(), Mode::Test(2), budget()),
        Err(PosetError::TrivialG)
    ));
    // tampered certificates are rejected
    let mut bad = cert.clone();
    bad.factors.pop();
    assert!(bad.verify(&q.u).is_err());
}

#[test]
fn cyc_witness_at_depth_two_fails_explicitly() {
    let p = trivial("{a}", 2);
    match cyc_witness(&p, &w("a"), Mode::Test(2), Budget::default()) {
        Err(PosetError::WitnessFailed { report: Some(r), .. }) => {
            assert!(r.violations.iter().any(|v| v.word == w("a")));
        }
        other => panic!("expected an explicit failure, got {other:?}"),
    }
}

#[test]
fn witness_examples() {
    let p = Condition::initial();
    let a = witness(&p, &DenseDescriptor::A(3), Mode::Test(2), budget()).unwrap();
    assert_eq!(a.condition.n, 3);
    assert!(satisfies(&a.condition, &DenseDescriptor::A(3), &[], budget()).is_ok());

    let d: DenseDescriptor = "E(1, {a, b}, a, b)".parse().unwrap();
    let e = witness(&p, &d, Mode::Test(2), budget()).unwrap();
    let Cert::Conj(c) = &e.certs[0] else { panic!() };
    assert_eq!(c.word, w("y1 y2 a y2^-1 y1^-1 b"));
    assert_eq!(c.conjugator.conjugate(&w("a")).mul(&w("b")), c.word);
    c.verify(&e.condition.u).unwrap();
    let (tn, tr) = e.thresholds.clone().unwrap();
    assert_eq!((tn.as_str(), tr.as_str()), ("8", "8"));

    let d: DenseDescriptor = "C(a b^-1)".parse().unwrap();
    let c = witness(&p, &d, Mode::Test(2), budget()).unwrap();
    assert!(satisfies(&c.condition, &d, &c.certs, budget()).is_ok());
    assert!(matches!(c.certs[0], Cert::Separation { .. }));

    // already inside: unchanged
    let again = witness(&a.condition, &DenseDescriptor::A(2), Mode::Test(2), budget()).unwrap();
    assert!(again.unchanged && again.condition.u.ptr_eq(&a.condition.u));

    let d = witness(&p, &DenseDescriptor::D(w("a")), Mode::Test(2), budget()).unwrap();
    assert!(satisfies(&d.condition, &DenseDescriptor::D(w("a")), &d.certs, budget()).is_ok());
}

#[test]
fn descriptor_text() {
    for s in ["A(3)", "B({a, b})", "C(a b^-1)", "D(a)", "E(1, {a, b}, a, b)", "E(2, {a}, a b, e)"] {
        let d: DenseDescriptor = s.parse().unwrap();
        assert_eq!(d.to_string(), s);
    }
    assert!("C(e)".parse::<DenseDescriptor>().is_err());
    assert!("F(1)".parse::<DenseDescriptor>().is_err());
    assert!("E(1, {a}, a)".parse::<DenseDescriptor>().is_err());
    assert_eq!("test:3".parse::<Mode>().unwrap(), Mode::Test(3));
    assert!("test:1".parse::<Mode>().is_err());
}

#[test]
fn extension_is_transitive_on_a_chain() {
    let p0 = Condition::initial();
    let p1 = add_letters(&p0, &set("{a, b}")).unwrap();
    let p2 = conj_extension(&p1, &w("a"), &w("b"), Mode::Test(3), budget()).unwrap().condition;
    let p3 = pad_levels(&p2, 2);
    let chain = [p0, p1, p2, p3];
    for i in 0..chain.len() {
        for j in i..chain.len() {
            let r = is_extension(&chain[j], &chain[i], budget());
            assert!(r.passed(), "{j} over {i}: {}", r.summary());
        }
    }
    assert!(identity_rep(&chain[3].u, 2).is_some());
}
