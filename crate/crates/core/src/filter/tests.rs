use super::*;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn budget() -> Budget {
    Budget {
        leaf_len: 4,
        exp: 2,
        nodes: 3000,
    }
}

fn chain(preset: Preset) -> ChainState {
    ChainState::new(Schedule::new(preset, 0), Mode::Test(2), budget())
}

#[test]
fn unpair_inverts_cantor_pairing() {
    for x in 0..40u64 {
        for y in 0..40u64 {
            let z = (x + y) * (x + y + 1) / 2 + y;
            assert_eq!(unpair(z), (x, y));
        }
    }
    assert!(unpair(u64::MAX).0 + unpair(u64::MAX).1 > 0);
}

#[test]
fn schedule_enumerations() {
    assert_eq!(word_at(0), w("a"));
    assert_eq!(word_at(1), w("a"));
    assert_eq!(word_at(2), w("a^-1"));
    assert_eq!(set_at(0).to_string(), "a");
    assert_eq!(set_at(2).to_string(), "a b");
    let s = Schedule::new(Preset::T2, 0);
    let kinds: Vec<char> = (0..6).map(|i| s.item(i)[0].kind()).collect();
    assert_eq!(kinds, vec!['A', 'B', 'C', 'A', 'B', 'C']);
    let s = Schedule::new(Preset::Assgp, 0);
    let kinds: Vec<char> = s.item(1).iter().map(|d| d.kind()).collect();
    assert_eq!(kinds, vec!['A', 'D']);
    // seeds rotate the families
    assert_eq!(Schedule::new(Preset::T2, 1).item(0)[0].kind(), 'B');
    assert_eq!("Full".parse::<Preset>().unwrap(), Preset::Full);
    assert!("t3".parse::<Preset>().is_err());
}

#[test]
fn schedule_is_fair_on_small_descriptors() {
    let s = Schedule::new(Preset::Full, 0);
    let seen: Vec<DenseDescriptor> = (0..4000).flat_map(|i| s.item(i)).collect();
    for d in ["A(3)", "B({a, b})", "C(a b^-1)", "D(b)", "E(1, {a}, a, e)", "E(1, {a, b}, a, e)"] {
        let d: DenseDescriptor = d.parse().unwrap();
        assert!(seen.contains(&d), "{d} not reached");
    }
}

#[test]
fn t2_ten_steps() {
    let mut st = chain(Preset::T2);
    for _ in 0..10 {
        st.step();
    }
    assert_eq!(st.chain.len(), 11);
    assert_eq!(st.records.len(), 10);
    for r in &st.records {
        assert!(r.report.passed(), "{}: {}", r.descriptor, r.report.summary());
        assert!(!matches!(r.outcome, Outcome::Failed { .. }), "{}", r.descriptor);
    }
}

#[test]
fn a_step_deepens() {
    let mut st = chain(Preset::T2);
    st.step_with(DenseDescriptor::A(2), "test");
    assert!(st.last().n >= 2);
}

#[test]
fn e_step_stores_certificate() {
    let mut st = chain(Preset::Full);
    let d: DenseDescriptor = "E(1, {a, b}, a, b)".parse().unwrap();
    let rec = st.step_with(d, "test").clone();
    assert_eq!(rec.outcome, Outcome::Met);
    let Cert::Conj(c) = &st.certs[0].cert else { panic!() };
    assert_eq!(c.word, c.conjugator.conjugate(&w("a")).mul(&w("b")));
    c.verify(&st.last().u).unwrap();
    let ans = st.basis_member(1, &c.word);
    assert!(ans.answer.is_yes());
    ans.answer.rep().unwrap().verify_full(&st.last().u).unwrap();
}

#[test]
fn basis_member_examples() {
    let st = chain(Preset::T2);
    for n in 0..4 {
        assert!(st.basis_member(n, &Word::e()).answer.is_yes());
    }
    assert!(st.basis_member(1, &w("a")).answer.is_no());
}

#[test]
fn separation_examples() {
    let mut st = chain(Preset::T2);
    assert_eq!(st.separation_index(&Word::e()), Err(FilterError::TrivialG));
    assert!(matches!(st.separation_index(&w("b a")), Err(FilterError::NotYetSeparated(_))));
    st.step_with(DenseDescriptor::C(w("a")), "test");
    let s = st.separation_index(&w("a")).unwrap();
    assert_eq!(s.n, 1);
    assert!(s.reports_pass);
    let mut st = chain(Preset::T2);
    st.step_with(DenseDescriptor::A(1), "test");
    st.step_with(DenseDescriptor::C(w("b")), "test");
    let s = st.separation_index(&w("b")).unwrap();
    assert_eq!((s.stage, s.n), (2, 2));
}

#[test]
fn conj_density_examples() {
    let mut st = chain(Preset::Full);
    let ans = st.conj_density_witness(&w("a"), &w("b"), 1).unwrap();
    assert_eq!(ans.f, w("y1 y2"));
    let target = ans.f.conjugate(&w("a")).mul(&w("b").inverse());
    assert_eq!(ans.rep.word, target);
    assert_eq!(ans.rep.level, 1);
    ans.rep.verify_full(&st.last().u).unwrap();
    let stages = st.chain.len();
    let again = st.conj_density_witness(&w("a"), &w("b"), 1).unwrap();
    assert_eq!(again, ans);
    assert_eq!(st.chain.len(), stages);

    let id = st.conj_density_witness(&w("a"), &Word::e(), 1).unwrap();
    assert_eq!(id.rep.word, id.f.conjugate(&w("a")));
    assert_eq!(st.conj_density_witness(&Word::e(), &w("a"), 1), Err(FilterError::TrivialG));
}

#[test]
fn conj_query_retries_with_more_letters() {
    let mut st = ChainState::new(Schedule::new(Preset::T2, 0), Mode::Test(2), Budget::default());
    for _ in 0..4 {
        st.step();
    }
    assert_eq!(st.last().n, 2);
    let ans = st.conj_density_witness(&w("a"), &Word::e(), 1).unwrap();
    assert_eq!(ans.rep.word, ans.f.conjugate(&w("a")));
    let last = st.records.last().unwrap();
    assert!(last.attempt > 0);
    assert_eq!(last.mode, Mode::Test(2 << last.attempt));
    assert!(matches!(st.records[st.records.len() - 2].outcome, Outcome::Failed { retry: false, .. }));
}

#[test]
fn assgp_examples() {
    let mut st = chain(Preset::Assgp);
    let e = st.assgp_certificate(1, &Word::e()).unwrap();
    assert!(e.cert.factors.is_empty());

    let ans = st.assgp_certificate(1, &w("a")).unwrap();
    let words: Vec<Word> = ans.cert.factors.iter().map(|f| f.word.clone()).collect();
    assert_eq!(words.len(), 3);
    assert_eq!(words[0], words[2].inverse());
    assert_eq!(words[1], words[2].conjugate(&w("a")));
    assert_eq!(Word::product(&words), w("a"));

    let ans = st.assgp_certificate(1, &w("a b")).unwrap();
    assert_eq!(ans.cert.factors.len(), 3);
    let words: Vec<Word> = ans.cert.factors.iter().map(|f| f.word.clone()).collect();
    assert_eq!(Word::product(&words), w("a b"));
}

#[test]
fn group_axioms_trivial_chain() {
    let st = chain(Preset::T2);
    let r = st.check_group_axioms(budget());
    assert!(r.passed());
}

#[test]
fn group_axioms_after_e_step() {
    let mut st = chain(Preset::Full);
    st.step_with(DenseDescriptor::B(crate::word::text::parse_alphabet("{a}").unwrap()), "test");
    let d: DenseDescriptor = "E(1, {a}, a, e)".parse().unwrap();
    st.step_with(d, "test");
    let Cert::Conj(c) = &st.certs[0].cert else { panic!() };
    let g0 = c.word.clone();
    let r = st.check_group_axioms(budget());
    assert!(r.passed(), "{:?}", r.checks.iter().find(|c| !c.passed));
    let g0sq = g0.mul(&g0);
    assert!(r.checks.iter().any(|c| c.claim == "product" && c.level == 0 && c.word == g0sq && c.passed));
    let conj = w("a").conjugate(&g0);
    assert!(r.checks.iter().any(|c| c.claim == "conjugation" && c.level == 0 && c.word == conj && c.passed));
}

#[test]
fn serialize_round_trip() {
    let mut st = chain(Preset::Full);
    for _ in 0..10 {
        st.step();
    }
    let text = st.serialize();
    let back = ChainState::deserialize(&text).unwrap();
    assert_eq!(back.serialize(), text);
    assert_eq!(back.chain.len(), st.chain.len());
    for (a, b) in back.chain.iter().zip(&st.chain) {
        assert_eq!(a.n, b.n);
        assert_eq!(a.x, b.x);
        assert_eq!(a.u.height(), b.u.height());
    }
    assert_eq!(back.certs, st.certs);
    back.verify_certs().unwrap();
}

#[test]
fn deserialize_rejects_corrupt_input() {
    let mut st = chain(Preset::Full);
    for _ in 0..5 {
        st.step();
    }
    let text = st.serialize();
    assert!(matches!(ChainState::deserialize("{"), Err(FilterError::Format(_))));
    assert!(matches!(
        ChainState::deserialize(&text.replace("\"version\": 1", "\"version\": 9")),
        Err(FilterError::Format(_))
    ));
    assert!(matches!(
        ChainState::deserialize(&text.replace("fgtop-chain", "other")),
        Err(FilterError::Format(_))
    ));
}

#[test]
fn deserialize_rejects_tampered_certificate() {
    let mut st = chain(Preset::Full);
    st.step_with("E(1, {a, b}, a, b)".parse().unwrap(), "test");
    let mut bad = st.clone();
    if let Cert::Conj(c) = &mut bad.certs[0].cert {
        c.h = w("a");
    }
    assert!(matches!(ChainState::deserialize(&bad.serialize()), Err(FilterError::Format(_))));
}

#[test]
fn runs_are_deterministic() {
    let run = || {
        let mut st = ChainState::new(Schedule::new(Preset::Full, 3), Mode::Test(2), budget());
        for _ in 0..8 {
            st.step();
        }
        st.serialize()
    };
    assert_eq!(run(), run());
}

#[test]
fn membership_is_monotone_along_the_chain() {
    let mut st = chain(Preset::Full);
    let probes = [w("a"), w("b"), w("a b a^-1"), w("b^2")];
    let mut yes: Vec<(usize, Word)> = Vec::new();
    for _ in 0..8 {
        st.step();
        for &(n, ref p) in &yes {
            assert!(st.basis_member(n, p).answer.is_yes(), "{p} lost at level {n}");
        }
        for p in &probes {
            for n in 0..=1 {
                if st.basis_member(n, p).answer.is_yes() && !yes.contains(&(n, p.clone())) {
                    yes.push((n, p.clone()));
                }
            }
        }
    }
}
