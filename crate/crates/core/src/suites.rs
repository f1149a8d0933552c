//! Randomized and exhaustive verification suites over the cancellation
//! lemmas, the letter bound and the extension step, each cross-checked
//! against a flatten-and-reduce oracle where words are involved.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cancellation::{
    build_hstar, collapse_check, eta_invariance_check, eta_invariance_check_skipping, gen_instances,
    gen_same_sign_instances, make_setting, same_sign_not_in_fx, CancelError, ConjSetting, GenParams, HypInstance,
};
use crate::nbhd::{enumerate_members, letter_bound, letter_bound_check, BaseSet, Budget, Nsys};
use crate::poset::{conj_extension, Condition, ExtensionReport, Mode};
use crate::word::{Alphabet, GeneratorId, Letter, ShortlexWords, Word, MATERIALIZE_CAP};

/// Counterexamples kept per suite.
const KEEP: usize = 10;
/// Large-`k` collapse instances.
pub const LARGE_K: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// leave one `g0`-power unreduced in the η suite
    pub inject_bug: bool,
    pub budget: Budget,
    /// fixed `k` for the small-`k` cancellation suites instead of `2..=6`
    pub k: Option<u64>,
    /// largest number of `g0`-factors in generated instances
    pub n_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 1000,
            inject_bug: false,
            budget: Budget::default(),
            k: None,
            n_max: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// cases outside the suite's preconditions
    pub skipped: usize,
    /// no case was checked
    pub vacuous: bool,
    /// enumerations or searches that hit the budget
    pub truncated: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn collect(name: &str, outcomes: Vec<Outcome>) -> SuiteResult {
        let mut r = SuiteResult {
            name: name.into(),
            cases: outcomes.len(),
            passed: 0,
            failed: 0,
            skipped: 0,
            vacuous: false,
            truncated: 0,
            counterexamples: Vec::new(),
        };
        for (trial, o) in outcomes.into_iter().enumerate() {
            match o {
                Outcome::Pass { truncated } => {
                    r.passed += 1;
                    r.truncated += usize::from(truncated);
                }
                Outcome::Skip => r.skipped += 1,
                Outcome::Fail(detail) => {
                    r.failed += 1;
                    if r.counterexamples.len() < KEEP {
                        r.counterexamples.push(Counterexample { trial, detail });
                    }
                }
            }
        }
        r.vacuous = r.passed + r.failed == 0;
        r
    }

    pub fn line(&self) -> String {
        let verdict = if !self.ok() {
            "FAIL"
        } else if self.vacuous {
            "PASS (vacuous)"
        } else {
            "PASS"
        };
        format!(
            "{verdict} {}: {} passed, {} failed, {} skipped, {} truncated",
            self.name, self.passed, self.failed, self.skipped, self.truncated
        )
    }
}

enum Outcome {
    Pass { truncated: bool },
    Skip,
    Fail(String),
}

fn pass() -> Outcome {
    Outcome::Pass { truncated: false }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: SuiteConfig,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn vacuous(&self) -> bool {
        self.suites.iter().all(|s| s.vacuous)
    }
}

/// Letter-by-letter free reduction of the concatenation.
pub fn oracle_product(parts: &[&Word]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for p in parts {
        for l in p.flatten(MATERIALIZE_CAP).expect("oracle words fit in memory") {
            if out.last().is_some_and(|q| q.inverse() == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

fn oracle_eq(w: &Word, parts: &[&Word]) -> bool {
    w.flatten(MATERIALIZE_CAP).is_some_and(|f| f == oracle_product(parts))
}

fn hstar_parts(i: &HypInstance) -> (Word, Word) {
    (i.setting.g0.clone(), i.setting.g0.inverse())
}

fn describe(i: &HypInstance) -> String {
    let ws: Vec<String> = i.w.iter().map(|w| format!("[{w}]")).collect();
    format!(
        "g = {}, h = {}, k = {}, j0 = {}, signs = {:?}, w = {}",
        i.setting.g,
        i.setting.h,
        i.setting.k,
        i.j0,
        i.signs,
        ws.join(" ")
    )
}

/// `h* = w_1·v_1 ⋯ w_n·v_n·w_{n+1}` with `v_t = g0^{±1}`.
fn interleave(i: &HypInstance) -> Vec<Word> {
    let (g0, g0i) = hstar_parts(i);
    let mut seq = Vec::with_capacity(2 * i.n() + 1);
    for t in 0..i.n() {
        seq.push(i.w[t].clone());
        seq.push(if i.signs[t] > 0 { g0.clone() } else { g0i.clone() });
    }
    seq.push(i.w[i.n()].clone());
    seq
}

fn collapse_case(i: &HypInstance) -> Outcome {
    let seq = interleave(i);
    let parts: Vec<&Word> = seq.iter().collect();
    if !oracle_eq(&build_hstar(i), &parts) {
        return Outcome::Fail(format!("h* disagrees with the oracle: {}", describe(i)));
    }
    match collapse_check(i) {
        Ok(r) if r.equal => {
            let ws: Vec<&Word> = i.w.iter().collect();
            if oracle_eq(&r.collapsed, &ws) {
                pass()
            } else {
                Outcome::Fail(format!("collapsed product disagrees with the oracle: {}", describe(i)))
            }
        }
        Ok(r) => Outcome::Fail(format!("h* = {} but w* = {}: {}", r.hstar, r.collapsed, describe(i))),
        Err(e) => Outcome::Fail(format!("{e}: {}", describe(i))),
    }
}

fn same_sign_case(i: &HypInstance) -> Outcome {
    match same_sign_not_in_fx(i, i.n()) {
        Ok(r) => {
            let seq = interleave(i);
            let parts: Vec<&Word> = seq.iter().collect();
            if !oracle_eq(&r.product, &parts) {
                Outcome::Fail(format!("product disagrees with the oracle: {}", describe(i)))
            } else if !r.contains_y_j0 || r.product.supported_in(&i.setting.x) {
                Outcome::Fail(format!("product {} lies in F(X): {}", r.product, describe(i)))
            } else {
                pass()
            }
        }
        Err(CancelError::ConditionI { .. }) | Err(CancelError::SignMismatch) => Outcome::Skip,
        Err(e) => Outcome::Fail(format!("{e}: {}", describe(i))),
    }
}

fn eta_case(seq: &[Word], s: &ConjSetting, skip: Option<usize>) -> Outcome {
    let res = match skip {
        Some(k) => eta_invariance_check_skipping(seq, s, k),
        None => eta_invariance_check(seq, s),
    };
    let text = || {
        let ws: Vec<String> = seq.iter().map(|w| format!("[{w}]")).collect();
        format!("g0 = {}, a = {}", s.g0, ws.join(" "))
    };
    match res {
        Ok(r) => {
            let parts: Vec<&Word> = seq.iter().collect();
            if !oracle_eq(&r.product, &parts) {
                Outcome::Fail(format!("product disagrees with the oracle: {}", text()))
            } else if !r.equal {
                Outcome::Fail(format!("∏a = {} but ∏η(a) = {}: {}", r.product, r.eta_product, text()))
            } else {
                pass()
            }
        }
        Err(CancelError::PreconditionViolated { .. }) => Outcome::Skip,
        Err(e) => Outcome::Fail(format!("{e}: {}", text())),
    }
}

fn params(k: u64, n_max: usize) -> GenParams {
    GenParams {
        k,
        n_max,
        ..GenParams::default()
    }
}

/// `count` hypothesis instances cycling `k` over `2..=6`, or at the fixed `k`.
fn small_k_instances(cfg: &SuiteConfig, seed: u64, count: usize, same_sign: bool) -> Vec<HypInstance> {
    let ks: Vec<u64> = cfg.k.map_or_else(|| (2..=6).collect(), |k| vec![k]);
    let parts = ks.len();
    let mut out = Vec::with_capacity(count);
    for (j, &k) in ks.iter().enumerate() {
        let share = count / parts + usize::from(j < count % parts);
        let s = seed.wrapping_mul(31).wrapping_add(k);
        if same_sign {
            out.extend(gen_same_sign_instances(s, params(k, cfg.n_max.max(1))).take(share));
        } else {
            out.extend(gen_instances(s, params(k, cfg.n_max)).take(share));
        }
    }
    out
}

/// Instances at `k = 2^12`: one per hundred trials, at least a hundred.
pub fn large_k_count(trials: usize) -> usize {
    if trials == 0 {
        0
    } else {
        (trials / 100).max(trials.min(100))
    }
}

pub fn collapse_suite(cfg: &SuiteConfig) -> SuiteResult {
    let inst = small_k_instances(cfg, cfg.seed, cfg.trials, false);
    SuiteResult::collect("collapse", inst.par_iter().map(collapse_case).collect())
}

pub fn collapse_large_k_suite(cfg: &SuiteConfig) -> SuiteResult {
    let inst: Vec<HypInstance> = gen_instances(cfg.seed ^ 0x5eed, params(LARGE_K, cfg.n_max))
        .take(large_k_count(cfg.trials))
        .collect();
    SuiteResult::collect("collapse (k = 2^12)", inst.par_iter().map(collapse_case).collect())
}

pub fn same_sign_suite(cfg: &SuiteConfig) -> SuiteResult {
    let inst = small_k_instances(cfg, cfg.seed, cfg.trials, true);
    SuiteResult::collect("same-sign", inst.par_iter().map(same_sign_case).collect())
}

/// Sequences `a_1, …, a_m` with product in `F(X)`: half are the factors of
/// a hypothesis instance with consecutive powers merged, half interleave
/// `X`-words with telescoping powers of `g0`.
pub fn eta_sequences(cfg: &SuiteConfig, count: usize) -> Vec<(Vec<Word>, ConjSetting)> {
    let seed = cfg.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe7a);
    let from_inst = count / 2;
    let mut out = Vec::with_capacity(count);
    for i in small_k_instances(cfg, seed ^ 0xe7a, from_inst, false) {
        let mut seq = interleave(&i);
        // occasionally merge g0^ε·w·g0^ε' into one element when w = e
        let mut t = 1;
        while t + 2 < seq.len() {
            if seq[t + 1].is_e() && rng.gen_bool(0.5) {
                let merged = seq[t].mul(&seq[t + 2]);
                seq.splice(t..t + 3, [merged]);
            }
            t += 2;
        }
        out.push((seq, i.setting));
    }
    let x = Alphabet::block(0, 3);
    while out.len() < count {
        let k = cfg.k.unwrap_or_else(|| rng.gen_range(2..=6u64));
        let g = random_x_word(&mut rng, &x, 1, 3);
        let h = random_x_word(&mut rng, &x, 0, 3);
        let s = make_setting(&x, &g, &h, &BigUint::from(k), GeneratorId(x.fresh_start(23))).expect("valid setting");
        let mut seq = vec![random_x_word(&mut rng, &x, 0, 3)];
        let mut acc = 0i64;
        for _ in 0..rng.gen_range(1..5) {
            let q: i64 = rng.gen_range(-3..=3);
            seq.push(s.g0.pow(q));
            acc += q;
            if rng.gen_bool(0.3) {
                seq.push(random_x_word(&mut rng, &x, 0, 2));
                let back = seq[seq.len() - 1].inverse();
                seq.push(back);
            }
        }
        seq.push(s.g0.pow(-acc));
        seq.push(random_x_word(&mut rng, &x, 0, 3));
        out.push((seq, s));
    }
    out
}

fn random_x_word(rng: &mut ChaCha8Rng, x: &Alphabet, min: usize, max: usize) -> Word {
    let ids: Vec<u64> = x.ids().collect();
    loop {
        let len = rng.gen_range(min..=max);
        let w = Word::from_letters((0..len).map(|_| {
            let id = ids[rng.gen_range(0..ids.len())];
            if rng.gen_bool(0.5) {
                Letter::pos(id)
            } else {
                Letter::neg(id)
            }
        }));
        if w.len() >= min as u128 {
            return w;
        }
    }
}

pub fn eta_suite(cfg: &SuiteConfig) -> SuiteResult {
    let seqs = eta_sequences(cfg, cfg.trials);
    let outcomes = seqs
        .par_iter()
        .map(|(seq, s)| {
            // the injected bug leaves the first non-trivial power unreduced
            let skip = cfg.inject_bug.then(|| {
                seq.iter()
                    .position(|a| a.cyclic_member(&s.g0).ok().flatten().is_some_and(|q| q != 0))
                    .unwrap_or(0)
            });
            eta_case(seq, s, skip)
        })
        .collect();
    let name = if cfg.inject_bug { "η-invariance (injected bug)" } else { "η-invariance" };
    SuiteResult::collect(name, outcomes)
}

/// One system per case: the cyclic `F`-enrichment and the `{e}`-enrichment
/// of `trivial(X, n)` for `|X| ≤ 2`, `n ≤ 3`, `|F| ≤ 2`.
pub fn letter_bound_systems() -> Vec<(String, Alphabet, usize, Nsys)> {
    let mut out = Vec::new();
    for size in 1..=2u64 {
        let x = Alphabet::block(0, size);
        for n in 1..=3usize {
            let base = Nsys::trivial(x.clone(), n).expect("valid system");
            for fresh in 1..=2u64 {
                let f = Alphabet::block(x.fresh_start(23), fresh);
                let sys = base.cyclic_alphabet_extension(&f).expect("fresh letters");
                out.push((format!("X = {{{x}}}, n = {n}, cyclic {{{f}}}"), x.clone(), n, sys));
            }
            let sys = base.enrich(BaseSet::identity(), x.clone()).expect("valid enrichment");
            out.push((format!("X = {{{x}}}, n = {n}, {{e}}"), x.clone(), n, sys));
        }
    }
    out
}

/// Every certificate listed for every level satisfies the letter bound.
pub fn letter_bound_suite(cfg: &SuiteConfig) -> SuiteResult {
    if cfg.trials == 0 {
        return SuiteResult::collect("letter bound", Vec::new());
    }
    let cases: Vec<(String, Alphabet, usize, Nsys, usize)> = letter_bound_systems()
        .into_iter()
        .flat_map(|(name, x, n, sys)| (0..=n).map(move |i| (name.clone(), x.clone(), n, sys.clone(), i)))
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|(name, x, n, sys, i)| match enumerate_members(sys, *i, cfg.budget) {
            Ok(en) => {
                let bound = letter_bound(x.len(), *n, *i);
                match en.items.iter().find(|(_, r)| !letter_bound_check(r, x, *n, *i)) {
                    Some((w, r)) => {
                        let total: u128 = r.leaves().iter().map(|l| l.letters().len()).sum();
                        Outcome::Fail(format!("{name}, level {i}: {w} uses {total} letters > {bound}"))
                    }
                    None => Outcome::Pass { truncated: en.capped },
                }
            }
            Err(e) => Outcome::Fail(format!("{name}, level {i}: {e}")),
        })
        .collect();
    SuiteResult::collect("letter bound", outcomes)
}

/// Nontrivial words over `x` of length at most `max_len`, shortlex.
pub fn words_upto(x: &Alphabet, max_len: usize) -> Vec<Word> {
    ShortlexWords::new(x, max_len).skip(1).collect()
}

/// The extension report for `conj_extension(trivial(X, n), g, h)`.
pub fn extension_case(x: &Alphabet, n: usize, g: &Word, h: &Word, k: u64, budget: Budget) -> Result<ExtensionReport, String> {
    let p = Condition::new(Nsys::trivial(x.clone(), n).map_err(|e| e.to_string())?);
    conj_extension(&p, g, h, Mode::Test(k), budget)
        .map(|e| e.report)
        .map_err(|e| e.to_string())
}

/// Random `(X, n, g, h)` with `|X| ≤ 3`, `n ≤ 2`, `|g|, |h| ≤ 3` and `k`
/// one more than the letter bound `|X|·4^n`.
pub fn extension_suite(cfg: &SuiteConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe47);
    let cases: Vec<(Alphabet, usize, Word, Word)> = (0..cfg.trials.div_ceil(10))
        .map(|_| {
            let x = Alphabet::block(0, rng.gen_range(1..=3));
            let n = rng.gen_range(1..=2);
            let g = random_x_word(&mut rng, &x, 1, 3);
            let h = random_x_word(&mut rng, &x, 0, 3);
            (x, n, g, h)
        })
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|(x, n, g, h)| {
            let k = letter_bound(x.len(), *n, 0) as u64 + 1;
            let name = format!("X = {{{x}}}, n = {n}, g = {g}, h = {h}, k = {k}");
            match extension_case(x, *n, g, h, k, cfg.budget) {
                Ok(r) if r.passed() => Outcome::Pass { truncated: r.truncated },
                Ok(r) => Outcome::Fail(format!("{name}: {}", r.summary())),
                Err(e) => Outcome::Fail(format!("{name}: {e}")),
            }
        })
        .collect();
    SuiteResult::collect("extension", outcomes)
}

/// The collapse, same-sign and η suites.
pub fn run_cancellation(cfg: &SuiteConfig) -> VerifyReport {
    VerifyReport {
        config: *cfg,
        suites: vec![
            collapse_suite(cfg),
            collapse_large_k_suite(cfg),
            same_sign_suite(cfg),
            eta_suite(cfg),
        ],
    }
}

/// All suites in a fixed order.
pub fn run_all(cfg: &SuiteConfig) -> VerifyReport {
    VerifyReport {
        config: *cfg,
        suites: vec![
            collapse_suite(cfg),
            collapse_large_k_suite(cfg),
            same_sign_suite(cfg),
            eta_suite(cfg),
            letter_bound_suite(cfg),
            extension_suite(cfg),
        ],
    }
}
