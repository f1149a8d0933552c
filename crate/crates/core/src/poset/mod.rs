//! Conditions `⟨X, n, 𝒰⟩`, the extension relation, and constructive
//! witnesses for the dense sets `A_n`, `B_S`, `C_g`, `D_g`, `E_{n,S,g,h}`.

mod descriptor;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cancellation::{make_setting, CancelError, ConjSetting};
use crate::nbhd::{
    enumerate_members, member, pullback, BaseSet, BaseWitness, Budget, CanonicalRep, Layer, MembershipAnswer,
    NbhdError, Nsys, Origin,
};
use crate::word::{Alphabet, GeneratorId, Word};

pub use descriptor::DenseDescriptor;

/// Unknown words kept verbatim in an extension report.
const KEEP_UNKNOWN: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("g must not be the identity")]
    TrivialG,
    #[error("{0} is not a word over the condition's alphabet")]
    NotInAlphabet(Word),
    #[error("threshold 2^{0} is too large to allocate")]
    Threshold(String),
    #[error("witness for {descriptor} failed: {reason}")]
    WitnessFailed {
        descriptor: String,
        reason: String,
        report: Option<Box<ExtensionReport>>,
    },
    #[error("bad descriptor: {0}")]
    Parse(String),
    #[error(transparent)]
    Nbhd(#[from] NbhdError),
    #[error(transparent)]
    Cancel(#[from] CancelError),
}

/// A condition of the poset: alphabet, depth and system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub x: Alphabet,
    pub n: usize,
    pub u: Nsys,
}

impl Condition {
    pub fn new(u: Nsys) -> Condition {
        Condition {
            x: u.alphabet().clone(),
            n: u.depth(),
            u,
        }
    }

    /// `⟨{a}, 1, trivial⟩`.
    pub fn initial() -> Condition {
        Condition::new(Nsys::trivial(Alphabet::from_ids([0]), 1).expect("depth 1"))
    }
}

/// How many fresh letters conjugation witnesses allocate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `k = 2^(|X| · 4^n)`
    Paper,
    /// fixed small `k ≥ 2`
    Test(u64),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Paper => f.write_str("paper"),
            Mode::Test(k) => write!(f, "test:{k}"),
        }
    }
}

impl FromStr for Mode {
    type Err = PosetError;

    fn from_str(s: &str) -> Result<Mode, PosetError> {
        let s = s.trim();
        if s == "paper" {
            return Ok(Mode::Paper);
        }
        let k = s
            .strip_prefix("test:")
            .and_then(|k| k.parse::<u64>().ok())
            .ok_or_else(|| PosetError::Parse(format!("mode must be paper or test:k, got {s:?}")))?;
        if k < 2 {
            return Err(PosetError::Parse("test mode needs k ≥ 2".into()));
        }
        Ok(Mode::Test(k))
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Mode, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `2^(size_x · 4^n)`.
pub fn threshold(size_x: u64, n: u64) -> Result<BigUint, PosetError> {
    let exp = u32::try_from(n)
        .ok()
        .and_then(|n| 4u64.checked_pow(n))
        .and_then(|p| p.checked_mul(size_x))
        .filter(|&e| e <= 1 << 32)
        .ok_or_else(|| PosetError::Threshold(format!("({size_x}·4^{n})")))?;
    Ok(BigUint::one() << exp)
}

fn fresh_count(mode: Mode, size_x: u128, n: usize) -> Result<BigUint, PosetError> {
    match mode {
        Mode::Test(k) => Ok(BigUint::from(k)),
        Mode::Paper => {
            let size = u64::try_from(size_x).map_err(|_| PosetError::Threshold(format!("({size_x}·4^{n})")))?;
            threshold(size, n as u64)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub level: usize,
    pub word: Word,
}

/// Outcome of checking that `q` extends `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    /// `X^p ⊆ X^q`; the witness is a missing generator
    pub alphabet_ok: bool,
    pub alphabet_witness: Option<Word>,
    /// `n^p ≤ n^q`
    pub depth_ok: bool,
    /// `U_i ⊆ V_i`, by the layer stack or by sampling
    pub embeds: bool,
    pub embeds_structural: bool,
    pub embeds_witness: Option<Violation>,
    /// members of `V_i ∩ F(X^p)` compared against `U_i`
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub unknown_count: usize,
    pub unknown: Vec<Violation>,
    /// some enumeration hit the budget
    pub truncated: bool,
    pub budget: Budget,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.alphabet_ok && self.depth_ok && self.embeds && self.violations.is_empty()
    }

    /// The report for `p ≤ p`.
    pub fn reflexive(budget: Budget) -> ExtensionReport {
        ExtensionReport {
            alphabet_ok: true,
            alphabet_witness: None,
            depth_ok: true,
            embeds: true,
            embeds_structural: true,
            embeds_witness: None,
            checked: 0,
            violations: Vec::new(),
            unknown_count: 0,
            unknown: Vec::new(),
            truncated: false,
            budget,
        }
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "pass ({} compared, {} unknown{})",
                self.checked,
                self.unknown_count,
                if self.truncated { ", truncated" } else { "" }
            )
        } else if !self.alphabet_ok {
            format!("fail: alphabet shrinks, missing {}", fmt_opt(&self.alphabet_witness))
        } else if !self.depth_ok {
            "fail: depth decreases".into()
        } else if !self.embeds {
            let w = self.embeds_witness.as_ref().map(|v| v.word.to_string()).unwrap_or_default();
            format!("fail: U_i not contained in V_i, witness {w}")
        } else {
            let v = &self.violations[0];
            format!("fail: {} ∈ V_{} ∩ F(X^p) but not in U_{}", v.word, v.level, v.level)
        }
    }
}

fn fmt_opt(w: &Option<Word>) -> String {
    w.as_ref().map(|w| w.to_string()).unwrap_or_default()
}

/// Checks (i) `X^p ⊆ X^q`, (ii) `n^p ≤ n^q` and (iii) `V_i ∩ F(X^p) = U_i`
/// for `i ≤ n^p`, the last one by enumerating `V_i` within budget.
pub fn is_extension(q: &Condition, p: &Condition, budget: Budget) -> ExtensionReport {
    let mut r = ExtensionReport::reflexive(budget);
    r.alphabet_ok = p.x.is_subset(&q.x);
    r.alphabet_witness = (!r.alphabet_ok).then(|| Word::gen(p.x.difference(&q.x).ids().next().expect("missing id")));
    r.depth_ok = p.n <= q.n;
    if !r.depth_ok {
        r.embeds = false;
        return r;
    }
    r.embeds_structural = q.u.builds_on(&p.u);
    if !r.embeds_structural {
        // sampled: members of U_i must not be refuted in V_i
        let found = (0..=p.n).into_par_iter().map(|i| {
            let en = enumerate_members(&p.u, i, budget).ok()?;
            en.items.iter().find_map(|(w, _)| {
                matches!(member(&q.u, i, w, budget), Ok(MembershipAnswer::No(_))).then(|| Violation {
                    level: i,
                    word: w.clone(),
                })
            })
        });
        r.embeds_witness = found.collect::<Vec<_>>().into_iter().flatten().next();
        r.embeds = r.embeds_witness.is_none();
    }
    let per_level: Vec<(usize, bool, Vec<Violation>, Vec<Violation>)> = (0..=p.n)
        .into_par_iter()
        .map(|i| {
            let Ok(en) = enumerate_members(&q.u, i, budget) else {
                return (0, true, Vec::new(), Vec::new());
            };
            let mut checked = 0;
            let mut bad = Vec::new();
            let mut unknown = Vec::new();
            for (w, rep) in &en.items {
                if !w.supported_in(&p.x) {
                    continue;
                }
                checked += 1;
                if r.embeds_structural && pullback(rep, &q.u, &p.u).is_some() {
                    continue;
                }
                match member(&p.u, i, w, budget) {
                    Ok(MembershipAnswer::Yes(_)) => {}
                    Ok(MembershipAnswer::No(_)) => bad.push(Violation {
                        level: i,
                        word: w.clone(),
                    }),
                    _ => unknown.push(Violation {
                        level: i,
                        word: w.clone(),
                    }),
                }
            }
            (checked, en.truncated || en.capped, bad, unknown)
        })
        .collect();
    for (checked, truncated, bad, unknown) in per_level {
        r.checked += checked;
        r.truncated |= truncated;
        r.violations.extend(bad);
        r.unknown_count += unknown.len();
        r.unknown.extend(unknown);
    }
    r.unknown.truncate(KEEP_UNKNOWN);
    r
}

/// Witness for `A_n`: appends `{e}` levels up to `n`.
pub fn pad_levels(p: &Condition, n: usize) -> Condition {
    if n <= p.n {
        return p.clone();
    }
    Condition::new(p.u.pad(n))
}

/// Witness for `B_S`: the cyclic `(S ∖ X^p)`-enrichment.
pub fn add_letters(p: &Condition, s: &Alphabet) -> Result<Condition, PosetError> {
    let fresh = s.difference(&p.x);
    if fresh.is_empty() {
        return Ok(p.clone());
    }
    Ok(Condition::new(p.u.cyclic_alphabet_extension(&fresh)?))
}

/// Witness for `C_g`: adds the letters of `g`, then one `{e}` level.
pub fn separate(p: &Condition, g: &Word) -> Result<Condition, PosetError> {
    if g.is_e() {
        return Err(PosetError::TrivialG);
    }
    let r = add_letters(p, &g.letters())?;
    Ok(pad_levels(&r, p.n + 1))
}

/// A certificate that `f·g·f⁻¹·h` lies in level `level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjCert {
    pub g: Word,
    pub h: Word,
    pub conjugator: Word,
    pub word: Word,
    pub level: usize,
    pub rep: Arc<CanonicalRep>,
}

impl ConjCert {
    /// Re-checks `word = f·g·f⁻¹·h` and the membership certificate.
    pub fn verify(&self, sys: &Nsys) -> Result<(), String> {
        let computed = self.conjugator.conjugate(&self.g).mul(&self.h);
        if computed != self.word {
            return Err(format!("f·g·f⁻¹·h = {computed}, certificate names {}", self.word));
        }
        if self.rep.word != self.word || self.rep.level != self.level {
            return Err("membership certificate is for another word or level".into());
        }
        self.rep.verify_product().map_err(|e| e.to_string())?;
        self.rep.verify(sys).map_err(|e| e.to_string())
    }
}

/// Result of the main extension step.
#[derive(Clone, Debug)]
pub struct ConjExtension {
    pub condition: Condition,
    pub setting: ConjSetting,
    pub cert: ConjCert,
    pub report: ExtensionReport,
}

/// The `⟨g0⟩`-enrichment over `F(Y)` with `g0 = f * g * f⁻¹ * h`.
pub fn conj_extension(p: &Condition, g: &Word, h: &Word, mode: Mode, budget: Budget) -> Result<ConjExtension, PosetError> {
    if g.is_e() {
        return Err(PosetError::TrivialG);
    }
    for w in [g, h] {
        if !w.supported_in(&p.x) {
            return Err(PosetError::NotInAlphabet(w.clone()));
        }
    }
    let k = fresh_count(mode, p.x.len(), p.n)?;
    let start = GeneratorId(p.x.fresh_start(23));
    let setting = make_setting(&p.x, g, h, &k, start)?;
    let u = p.u.enrich(BaseSet::Cyclic(vec![setting.g0.clone()]), setting.y.clone())?;
    let q = Condition::new(u);
    let rep = Arc::new(CanonicalRep::leaf(
        q.n,
        setting.g0.clone(),
        Origin::Base(BaseWitness::Power {
            generator: setting.g0.clone(),
            exponent: 1,
        }),
    ));
    let cert = ConjCert {
        g: g.clone(),
        h: h.clone(),
        conjugator: setting.f.clone(),
        word: setting.g0.clone(),
        level: q.n,
        rep,
    };
    let report = is_extension(&q, p, budget);
    Ok(ConjExtension {
        condition: q,
        setting,
        cert,
        report,
    })
}

/// One factor of a cyclic factorization: `word = generator^exponent` with
/// `⟨generator⟩` inside level `level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycFactor {
    pub word: Word,
    pub generator: Word,
    pub exponent: i64,
    pub level: usize,
    pub rep: Arc<CanonicalRep>,
}

/// `target = ∏ factors`, each factor in a cyclic subgroup contained in the
/// top level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycCert {
    pub target: Word,
    pub factors: Vec<CycFactor>,
}

impl CycCert {
    pub fn verify(&self, sys: &Nsys) -> Result<(), String> {
        let product = Word::product(self.factors.iter().map(|f| &f.word));
        if product != self.target {
            return Err(format!("factors multiply to {product}, not {}", self.target));
        }
        for f in &self.factors {
            if f.generator.pow(f.exponent) != f.word {
                return Err(format!("{} is not {}^{}", f.word, f.generator, f.exponent));
            }
            let contained = sys.stack().iter().any(|s| {
                s.depth() >= f.level
                    && matches!(s.layer(), Layer::Enriched(BaseSet::Cyclic(gens)) if gens.contains(&f.generator))
            });
            if !contained {
                return Err(format!("⟨{}⟩ is not a cyclic base at level ≥ {}", f.generator, f.level));
            }
            if f.rep.word != f.word || f.rep.level != f.level {
                return Err("factor certificate is for another word or level".into());
            }
            f.rep.verify_product().map_err(|e| e.to_string())?;
            f.rep.verify(sys).map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

/// Witness for `D_g`: enriches by `⟨g0⟩ ∪ ⟨f⟩` with `g0 = f·g·f⁻¹`, so that
/// `g = f⁻¹ · g0 · f`. Returned only when the certificate re-verifies and
/// the extension report passes.
pub fn cyc_witness(
    p: &Condition,
    g: &Word,
    mode: Mode,
    budget: Budget,
) -> Result<(Condition, CycCert, ExtensionReport), PosetError> {
    if g.is_e() {
        return Err(PosetError::TrivialG);
    }
    if !g.supported_in(&p.x) {
        return Err(PosetError::NotInAlphabet(g.clone()));
    }
    let k = fresh_count(mode, p.x.len(), p.n)?;
    let start = GeneratorId(p.x.fresh_start(23));
    let setting = make_setting(&p.x, g, &Word::e(), &k, start)?;
    let (f, g0) = (setting.f.clone(), setting.g0.clone());
    let u = p.u.enrich(BaseSet::Cyclic(vec![g0.clone(), f.clone()]), setting.y.clone())?;
    let q = Condition::new(u);
    let factor = |generator: &Word, exponent: i64| {
        let word = generator.pow(exponent);
        CycFactor {
            rep: Arc::new(CanonicalRep::leaf(
                q.n,
                word.clone(),
                Origin::Base(BaseWitness::Power {
                    generator: generator.clone(),
                    exponent,
                }),
            )),
            word,
            generator: generator.clone(),
            exponent,
            level: q.n,
        }
    };
    let cert = CycCert {
        target: g.clone(),
        factors: vec![factor(&f, -1), factor(&g0, 1), factor(&f, 1)],
    };
    let fail = |reason: String, report: Option<ExtensionReport>| PosetError::WitnessFailed {
        descriptor: format!("D({g})"),
        reason,
        report: report.map(Box::new),
    };
    cert.verify(&q.u).map_err(|e| fail(e, None))?;
    let report = is_extension(&q, p, budget);
    if !report.passed() {
        return Err(fail(report.summary(), Some(report)));
    }
    Ok((q, cert, report))
}

/// Certificates attached to a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cert {
    /// `g ∉ U_level`, refuted exactly
    Separation { g: Word, level: usize, reason: String },
    Cyc(CycCert),
    Conj(ConjCert),
}

/// A condition inside a dense set, with its certificates.
#[derive(Clone, Debug)]
pub struct Witnessed {
    pub condition: Condition,
    pub certs: Vec<Cert>,
    pub report: ExtensionReport,
    /// the input condition already belonged to the set
    pub unchanged: bool,
    /// thresholds `2^(|X|·4^n)` for the descriptor's `n` and for the depth
    /// used (E only, as decimal exponents)
    pub thresholds: Option<(String, String)>,
}

/// Evaluates the defining predicate of `d` on `q`, using `certs` for the
/// existential parts.
pub fn satisfies(q: &Condition, d: &DenseDescriptor, certs: &[Cert], budget: Budget) -> Result<(), String> {
    match d {
        DenseDescriptor::A(n) => (*n <= q.n).then_some(()).ok_or_else(|| format!("depth {} < {n}", q.n)),
        DenseDescriptor::B(s) => s
            .is_subset(&q.x)
            .then_some(())
            .ok_or_else(|| format!("{s} is not inside {}", q.x)),
        DenseDescriptor::C(g) => {
            if !g.supported_in(&q.x) {
                return Err(format!("{g} is not a word over {}", q.x));
            }
            match member(&q.u, q.n, g, budget) {
                Ok(MembershipAnswer::No(_)) => Ok(()),
                Ok(MembershipAnswer::Yes(_)) => Err(format!("{g} lies in the top level")),
                _ => Err(format!("{g} not refuted exactly at the top level")),
            }
        }
        DenseDescriptor::D(g) => {
            if g.is_e() {
                return Ok(());
            }
            certs
                .iter()
                .find_map(|c| match c {
                    Cert::Cyc(cc) if &cc.target == g && cc.factors.iter().all(|f| f.level == q.n) => {
                        Some(cc.verify(&q.u))
                    }
                    _ => None,
                })
                .unwrap_or_else(|| Err("no cyclic factorization certificate".into()))
        }
        DenseDescriptor::E { n, s, g, h } => {
            if *n > q.n {
                return Err(format!("depth {} < {n}", q.n));
            }
            if !s.is_subset(&q.x) {
                return Err(format!("{s} is not inside {}", q.x));
            }
            certs
                .iter()
                .find_map(|c| match c {
                    Cert::Conj(cc) if &cc.g == g && &cc.h == h && cc.level == q.n => Some(cc.verify(&q.u)),
                    _ => None,
                })
                .unwrap_or_else(|| Err("no element of Conj(g)·h certified in the top level".into()))
        }
    }
}

/// Builds a condition below `p` inside the dense set `d` and checks the
/// set's predicate on it directly.
pub fn witness(p: &Condition, d: &DenseDescriptor, mode: Mode, budget: Budget) -> Result<Witnessed, PosetError> {
    d.validate()?;
    if !matches!(d, DenseDescriptor::E { .. }) && satisfies(p, d, &[], budget).is_ok() {
        return Ok(Witnessed {
            condition: p.clone(),
            certs: Vec::new(),
            report: ExtensionReport::reflexive(budget),
            unchanged: true,
            thresholds: None,
        });
    }
    let fail = |reason: String, report: Option<ExtensionReport>| PosetError::WitnessFailed {
        descriptor: d.to_string(),
        reason,
        report: report.map(Box::new),
    };
    let mut thresholds = None;
    let (q, certs) = match d {
        DenseDescriptor::A(n) => (pad_levels(p, *n), Vec::new()),
        DenseDescriptor::B(s) => (add_letters(p, s)?, Vec::new()),
        DenseDescriptor::C(g) => {
            let q = separate(p, g)?;
            let reason = match member(&q.u, q.n, g, budget)? {
                MembershipAnswer::No(r) => r,
                _ => return Err(fail(format!("{g} not refuted at the top level"), None)),
            };
            let level = q.n;
            (q, vec![Cert::Separation { g: g.clone(), level, reason }])
        }
        DenseDescriptor::D(g) => {
            let r = add_letters(p, &g.letters())?;
            let (q, cert, _) = cyc_witness(&r, g, mode, budget)?;
            (q, vec![Cert::Cyc(cert)])
        }
        DenseDescriptor::E { n, s, g, h } => {
            let r = add_letters(p, &s.union(&g.letters()).union(&h.letters()))?;
            let r = pad_levels(&r, *n);
            let size = r.x.len();
            thresholds = Some((threshold_exponent(size, *n), threshold_exponent(size, r.n)));
            let ext = conj_extension(&r, g, h, mode, budget)?;
            (ext.condition, vec![Cert::Conj(ext.cert)])
        }
    };
    let report = is_extension(&q, p, budget);
    if !report.passed() {
        return Err(fail(report.summary(), Some(report)));
    }
    satisfies(&q, d, &certs, budget).map_err(|e| fail(format!("predicate fails on the result: {e}"), None))?;
    Ok(Witnessed {
        condition: q,
        certs,
        report,
        unchanged: false,
        thresholds,
    })
}

/// `|X| · 4^n` as a decimal string.
fn threshold_exponent(size_x: u128, n: usize) -> String {
    (BigUint::from(size_x) * BigUint::from(4u8).pow(n as u32)).to_string()
}

#[cfg(test)]
mod tests;
