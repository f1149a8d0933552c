//! Products of words with a foreign conjugate.
//!
//! Fix `g ≠ e` and `h` in `F(X)`, fresh letters `y_1, …, y_k` outside `X`,
//! `f = y_1 ⋯ y_k` and `g0 = f * g * f⁻¹ * h`. This module builds products
//! `h* = w_1·v_1·w_2 ⋯ w_n·v_n·w_{n+1}` with `v_i = g0^{±1}`, checks that
//! when `h*` lies in `F(X)` the `v_i` can be deleted without changing it,
//! decomposes same-sign prefixes, and checks the invariance of products
//! under the map sending non-trivial powers of `g0` to `e`.

mod gen;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Alphabet, Dir, GeneratorId, Sign, Word};

pub use gen::{gen_instances, gen_same_sign_instances, GenParams, InstanceStream};

/// Largest `l`, `k` used when sampling `g^l · a · g^k`.
pub const POWER_SAMPLE: i64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CancelError {
    #[error("g must not be the identity")]
    TrivialG,
    #[error("{0} is not a word over X")]
    NotInAlphabet(Word),
    #[error("fresh letters overlap X")]
    FreshOverlap,
    #[error("k must fit the generator id space: {0}")]
    IdOverflow(String),
    #[error("malformed instance: {0}")]
    BadInstance(String),
    #[error("signs of the prefix are not all equal to the required sign")]
    SignMismatch,
    #[error("y_j0 occurs in w_{index}")]
    ConditionI { index: usize },
    #[error("h* = {0} is not a word over X")]
    HypothesisViolated(Word),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("precondition violated at index {index}: {reason}")]
    PreconditionViolated { index: usize, reason: String },
}

/// `X`, the fresh letters `y_1 … y_k`, `f = y_1 ⋯ y_k` and
/// `g0 = f * g * f⁻¹ * h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjSetting {
    pub x: Alphabet,
    pub y: Alphabet,
    pub g: Word,
    pub h: Word,
    pub k: u64,
    /// id of `y_1`
    pub fresh_start: u64,
    pub f: Word,
    pub g0: Word,
}

pub fn make_setting(x: &Alphabet, g: &Word, h: &Word, k: &BigUint, fresh_start: GeneratorId) -> Result<ConjSetting, CancelError> {
    if g.is_e() {
        return Err(CancelError::TrivialG);
    }
    for w in [g, h] {
        if !w.supported_in(x) {
            return Err(CancelError::NotInAlphabet(w.clone()));
        }
    }
    let k64 = k
        .to_u64()
        .filter(|&k| k >= 1)
        .ok_or_else(|| CancelError::IdOverflow(format!("k = {k}")))?;
    let f = Word::fresh_run(fresh_start, k).map_err(|e| CancelError::IdOverflow(e.to_string()))?;
    let fresh = Alphabet::block(fresh_start.0, k64);
    if !fresh.is_disjoint(x) {
        return Err(CancelError::FreshOverlap);
    }
    let finv = f.inverse();
    let g0 = Word::product([&f, g, &finv, h]);
    debug_assert!(f.is_concatenation(g) && g.is_concatenation(&finv) && finv.is_concatenation(h));
    Ok(ConjSetting {
        x: x.clone(),
        y: x.union(&fresh),
        g: g.clone(),
        h: h.clone(),
        k: k64,
        fresh_start: fresh_start.0,
        f,
        g0,
    })
}

impl ConjSetting {
    /// Id of `y_i` (1-based).
    pub fn y_id(&self, i: u64) -> u64 {
        self.fresh_start + (i - 1)
    }

    /// `y_a ⋯ y_b`, or `e` when `a > b`.
    pub fn f_range(&self, a: u64, b: u64) -> Word {
        if a > b || a == 0 {
            return Word::e();
        }
        Word::run(self.y_id(a), b - a + 1, Dir::Asc, Sign::Pos).expect("inside the fresh block")
    }

    /// `f_{j0} = y_{j0} ⋯ y_k`.
    pub fn f_from(&self, j0: u64) -> Word {
        self.f_range(j0, self.k)
    }

    /// The same setting with `g` replaced by `g⁻¹` and `h` by `e`.
    pub fn hat(&self) -> ConjSetting {
        let g = self.g.inverse();
        let finv = self.f.inverse();
        ConjSetting {
            g0: Word::product([&self.f, &g, &finv]),
            g,
            h: Word::e(),
            ..self.clone()
        }
    }
}

/// Words `w_1 … w_{n+1}`, signs of `v_1 … v_n`, and the index `j0` of a
/// fresh letter none of the `w_i` uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypInstance {
    pub setting: ConjSetting,
    pub w: Vec<Word>,
    pub signs: Vec<i8>,
    pub j0: u64,
}

impl HypInstance {
    pub fn n(&self) -> usize {
        self.signs.len()
    }

    /// Checks the shape and condition (i).
    pub fn check_structure(&self) -> Result<(), CancelError> {
        if self.w.len() != self.signs.len() + 1 {
            return Err(CancelError::BadInstance(format!(
                "{} words for {} signs",
                self.w.len(),
                self.signs.len()
            )));
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(CancelError::BadInstance("signs must be ±1".into()));
        }
        if self.j0 < 1 || self.j0 > self.setting.k {
            return Err(CancelError::BadInstance(format!("j0 = {} outside 1..={}", self.j0, self.setting.k)));
        }
        let yj0 = self.setting.y_id(self.j0);
        if let Some(i) = self.w.iter().position(|w| w.contains_gen(yj0)) {
            return Err(CancelError::ConditionI { index: i + 1 });
        }
        Ok(())
    }

    fn v(&self, i: usize) -> Word {
        if self.signs[i] > 0 {
            self.setting.g0.clone()
        } else {
            self.setting.g0.inverse()
        }
    }

    /// `w_1·v_1 ⋯ w_m·v_m`.
    pub fn prefix_product(&self, m: usize) -> Word {
        let vs: Vec<Word> = (0..m).map(|i| self.v(i)).collect();
        let mut pieces: Vec<&Word> = Vec::with_capacity(2 * m);
        for (w, v) in self.w.iter().zip(&vs) {
            pieces.push(w);
            pieces.push(v);
        }
        Word::product(pieces)
    }
}

pub fn build_hstar(inst: &HypInstance) -> Word {
    inst.prefix_product(inst.n()).mul(&inst.w[inst.n()])
}

/// Condition (iii): `h*` is a word over `X`.
pub fn check_hypothesis(inst: &HypInstance) -> bool {
    build_hstar(inst).supported_in(&inst.setting.x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub hstar: Word,
    pub collapsed: Word,
    pub equal: bool,
}

/// Compares `h*` with `w_1 · w_2 ⋯ w_{n+1}`.
pub fn collapse_check(inst: &HypInstance) -> Result<CollapseReport, CancelError> {
    inst.check_structure()?;
    let hstar = build_hstar(inst);
    if !hstar.supported_in(&inst.setting.x) {
        return Err(CancelError::HypothesisViolated(hstar));
    }
    let collapsed = Word::product(inst.w.iter());
    Ok(CollapseReport {
        equal: hstar == collapsed,
        hstar,
        collapsed,
    })
}

/// Which branch of the inductive step produced `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Base,
    /// a non-empty prefix of `h` survives in `h · w′`
    Retained,
    /// `h` is consumed and nothing is left
    ConsumedEmpty,
    /// `h` is consumed, the rest cancels entirely into `f⁻¹`
    ConsumedAbsorbed,
    /// `h` is consumed and a non-empty word survives `f⁻¹`
    ConsumedSurviving,
}

/// `w_1·v_1 ⋯ w_N·v_N = w1p * fp * f_{j0} * a * f⁻¹ * h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub w1p: Word,
    pub fp: Word,
    pub a: Word,
    pub cases: Vec<CaseTag>,
    /// `g^l · a · g^k ≠ e` for all sampled `l, k ≥ 0`
    pub nontrivial_from_zero: bool,
    /// same for `l, k ≥ 2`
    pub nontrivial_from_two: bool,
}

/// Multiplies pieces that must meet without cancellation.
fn concat(pieces: &[&Word], what: &str) -> Result<Word, CancelError> {
    let mut acc = Word::e();
    for (i, p) in pieces.iter().enumerate() {
        if p.is_e() {
            continue;
        }
        if !acc.is_concatenation(p) {
            return Err(CancelError::DecompositionFailed(format!(
                "{what}: cancellation before piece {i} ({p})"
            )));
        }
        acc = acc.mul(p);
    }
    Ok(acc)
}

/// Follows the case analysis of the same-sign lemma for the first `n`
/// factors (all signs +1) and re-verifies the result.
pub fn same_sign_decompose(inst: &HypInstance, n: usize) -> Result<Decomposition, CancelError> {
    inst.check_structure()?;
    if n == 0 || n > inst.n() || inst.signs[..n].iter().any(|&s| s != 1) {
        return Err(CancelError::SignMismatch);
    }
    let s = &inst.setting;
    let (g, h, k, j0) = (&s.g, &s.h, s.k, inst.j0);
    let finv = s.f.inverse();
    let fj0 = s.f_from(j0);

    let c = inst.w[0].junction_cancel(&s.f) as u64;
    if c >= j0 {
        return Err(CancelError::DecompositionFailed(format!("w_1 cancels {c} letters of f")));
    }
    let w1p = inst.w[0].drop_suffix(c as u128);
    let fp = s.f_range(c + 1, j0 - 1);
    let mut a = g.clone();
    let mut cases = vec![CaseTag::Base];

    for w in &inst.w[1..n] {
        let c2 = w.junction_cancel(&s.f) as u64;
        if c2 >= j0 {
            return Err(CancelError::DecompositionFailed(format!("{w} cancels {c2} letters of f")));
        }
        let wp = w.drop_suffix(c2 as u128);
        let fpp = s.f_range(c2 + 1, j0 - 1);
        let jp = c2 + 1;
        let consumed = h.junction_cancel(&wp);
        let (next, tag) = if consumed < h.len() {
            let hw = h.mul(&wp);
            (concat(&[&a, &finv, &hw, &fpp, &fj0, g], "retained")?, CaseTag::Retained)
        } else {
            let wpp = wp.drop_prefix(h.len());
            if wpp.is_e() {
                if jp > 1 {
                    (concat(&[&a, &finv, &fpp, &fj0, g], "consumed, empty")?, CaseTag::ConsumedEmpty)
                } else {
                    (a.mul(g), CaseTag::ConsumedEmpty)
                }
            } else {
                let c3 = finv.junction_cancel(&wpp) as u64;
                let w3 = wpp.drop_prefix(c3 as u128);
                let head = s.f_range(c3 + 1, k).inverse();
                if w3.is_e() {
                    if c3 + 1 != jp {
                        let f3 = Word::product([&head, &fpp, &fj0]);
                        (concat(&[&a, &f3, g], "consumed, absorbed")?, CaseTag::ConsumedAbsorbed)
                    } else {
                        (a.mul(g), CaseTag::ConsumedAbsorbed)
                    }
                } else {
                    (
                        concat(&[&a, &head, &w3, &fpp, &fj0, g], "consumed, surviving")?,
                        CaseTag::ConsumedSurviving,
                    )
                }
            }
        };
        a = next;
        cases.push(tag);
    }

    let lhs = inst.prefix_product(n);
    let rhs = concat(&[&w1p, &fp, &fj0, &a, &finv, h], "final decomposition")?;
    if lhs != rhs {
        return Err(CancelError::DecompositionFailed(format!(
            "decomposition multiplies to {rhs}, expected {lhs}"
        )));
    }
    if a.is_e() {
        return Err(CancelError::DecompositionFailed("a = e".into()));
    }
    let (gf, gl) = (g.first_letter(), g.last_letter());
    let mut from_zero = true;
    let mut from_two = true;
    for l in 0..=POWER_SAMPLE {
        for r in 0..=POWER_SAMPLE {
            let x = Word::product([&g.pow(l), &a, &g.pow(r)]);
            if x.first_letter() != gf || x.last_letter() != gl {
                return Err(CancelError::DecompositionFailed(format!(
                    "g^{l}·a·g^{r} = {x} does not start and end like g"
                )));
            }
            if x.is_e() {
                from_zero = false;
                if l >= 2 && r >= 2 {
                    from_two = false;
                }
            }
        }
    }
    Ok(Decomposition {
        w1p,
        fp,
        a,
        cases,
        nontrivial_from_zero: from_zero,
        nontrivial_from_two: from_two,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameSignReport {
    /// `w_1·v_1 ⋯ w_N·v_N·w_{N+1}`
    pub product: Word,
    pub contains_y_j0: bool,
    /// the negative case is handled through the re-indexed instance
    pub reindexed: bool,
    pub decomposition: Decomposition,
}

/// For a prefix of `n` equal signs, checks that `y_{j0}` survives in
/// `w_1·v_1 ⋯ w_n·v_n·w_{n+1}`.
pub fn same_sign_not_in_fx(inst: &HypInstance, n: usize) -> Result<SameSignReport, CancelError> {
    inst.check_structure()?;
    if n == 0 || n > inst.n() {
        return Err(CancelError::SignMismatch);
    }
    let sign = inst.signs[0];
    if inst.signs[..n].iter().any(|&s| s != sign) {
        return Err(CancelError::SignMismatch);
    }
    let tail = &inst.w[n];
    let (work, reindexed) = if sign > 0 {
        (inst.clone(), false)
    } else {
        // w_i · g0⁻¹ = (w_i · h⁻¹) · ĝ0 with ĝ0 = f * g⁻¹ * f⁻¹
        let hinv = inst.setting.h.inverse();
        let mut w: Vec<Word> = inst.w[..n].iter().map(|x| x.mul(&hinv)).collect();
        w.push(tail.clone());
        (
            HypInstance {
                setting: inst.setting.hat(),
                w,
                signs: vec![1; n],
                j0: inst.j0,
            },
            true,
        )
    };
    let decomposition = same_sign_decompose(&work, n)?;
    let product = inst.prefix_product(n).mul(tail);
    debug_assert_eq!(product, work.prefix_product(n).mul(tail));
    Ok(SameSignReport {
        contains_y_j0: product.contains_gen(inst.setting.y_id(inst.j0)),
        product,
        reindexed,
        decomposition,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaReport {
    pub product: Word,
    pub eta_product: Word,
    pub equal: bool,
    pub j0: u64,
    /// indices `l` with `a_l ∈ ⟨g0⟩ ∖ {e}`
    pub l_set: Vec<usize>,
    /// `|q_l|` with `a_l = g0^{q_l}`, for `l` in `l_set`
    pub exponents: Vec<u64>,
    /// sign of `q_l`
    pub signs: Vec<i8>,
}

/// Checks `a_1 ⋯ a_m = η(a_1) ⋯ η(a_m)` where `η` sends non-trivial powers
/// of `g0` to `e`. Requires the product to be a word over `X` and some `j0`
/// with `y_{j0} ∈ lett(a_l) ⟺ a_l ∈ ⟨g0⟩ ∖ {e}`; the smallest such `j0` is
/// used.
pub fn eta_invariance_check(seq: &[Word], setting: &ConjSetting) -> Result<EtaReport, CancelError> {
    eta_check_impl(seq, setting, None)
}

/// Same as [`eta_invariance_check`] but leaves `a_skip` unreduced; used to
/// confirm the checker notices a broken reduction map.
pub fn eta_invariance_check_skipping(seq: &[Word], setting: &ConjSetting, skip: usize) -> Result<EtaReport, CancelError> {
    eta_check_impl(seq, setting, Some(skip))
}

fn eta_check_impl(seq: &[Word], s: &ConjSetting, skip: Option<usize>) -> Result<EtaReport, CancelError> {
    let product = Word::product(seq.iter());
    if !product.supported_in(&s.x) {
        return Err(CancelError::PreconditionViolated {
            index: 0,
            reason: format!("product {product} is not a word over X"),
        });
    }
    let powers: Vec<Option<i64>> = seq
        .iter()
        .map(|a| a.cyclic_member(&s.g0).expect("g0 ≠ e").filter(|&q| q != 0))
        .collect();
    // candidates: fresh indices not used by any non-power element
    let fresh = Alphabet::block(s.fresh_start, s.k);
    let mut blocked = Alphabet::new();
    for (a, p) in seq.iter().zip(&powers) {
        if p.is_none() {
            blocked = blocked.union(&a.letters());
        }
    }
    let Some(yid) = fresh.difference(&blocked).ids().next() else {
        let index = seq
            .iter()
            .zip(&powers)
            .position(|(a, p)| p.is_none() && !a.letters().is_disjoint(&fresh))
            .unwrap_or(0);
        return Err(CancelError::PreconditionViolated {
            index,
            reason: "every fresh letter occurs in an element outside ⟨g0⟩".into(),
        });
    };
    let j0 = yid - s.fresh_start + 1;
    let mut l_set = Vec::new();
    let mut exponents = Vec::new();
    let mut signs = Vec::new();
    let mut images = Vec::with_capacity(seq.len());
    for (l, (a, p)) in seq.iter().zip(&powers).enumerate() {
        match p {
            Some(q) => {
                l_set.push(l);
                exponents.push(q.unsigned_abs());
                signs.push(q.signum() as i8);
                images.push(if skip == Some(l) { a.clone() } else { Word::e() });
            }
            None => images.push(a.clone()),
        }
    }
    let eta_product = Word::product(images.iter());
    Ok(EtaReport {
        equal: eta_product == product,
        product,
        eta_product,
        j0,
        l_set,
        exponents,
        signs,
    })
}
