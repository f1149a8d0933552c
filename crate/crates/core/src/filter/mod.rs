//! The generic-chain builder: meets the dense sets of a schedule one step
//! at a time, keeps certificates, and answers queries about the basis
//! `U_n = ⋃{U^p_n : p in the chain, n ≤ n^p}`.

mod schedule;

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nbhd::{
    compose, descend, enumerate_members, identity_rep, lift, member, Budget, CanonicalRep, LayerRecord, MembershipAnswer,
    Nsys,
};
use crate::poset::{witness, Cert, Condition, ConjCert, CycCert, DenseDescriptor, ExtensionReport, Mode, PosetError};
use crate::word::{Alphabet, Word};

pub use schedule::{set_at, unpair, word_at, Preset, Schedule};

/// Version tag of the state file.
pub const FORMAT_VERSION: u32 = 1;
const FORMAT_NAME: &str = "fgtop-chain";

/// Attempts per descriptor before it is dropped.
pub const MAX_ATTEMPTS: u32 = 3;
/// Steps between a failure and its retry.
const RETRY_DELAY: usize = 5;
/// Members sampled per level in the group-axiom checks.
const GROUP_SAMPLE: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("g must not be the identity")]
    TrivialG,
    #[error("{0} is not separated at any stage yet")]
    NotYetSeparated(Word),
    #[error("witness failed: {0}")]
    WitnessFailed(String),
    #[error("state file: {0}")]
    Format(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Queued {
    pub descriptor: DenseDescriptor,
    pub attempt: u32,
    /// first stage at which the item may run
    pub due: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// a new condition inside the dense set
    Met,
    /// the previous condition was already inside
    AlreadyMet,
    /// the witness failed; the previous condition is repeated
    Failed { reason: String, retry: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub stage: usize,
    pub descriptor: DenseDescriptor,
    pub attempt: u32,
    pub mode: Mode,
    pub outcome: Outcome,
    pub report: ExtensionReport,
    pub note: Option<String>,
    /// exponents of the thresholds `2^(|X|·4^n)` for the descriptor's `n`
    /// and for the depth used (E only)
    pub thresholds: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredCert {
    pub stage: usize,
    pub descriptor: DenseDescriptor,
    pub cert: Cert,
}

/// A chain `p_0 ≥ p_1 ≥ …` with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub schedule: Schedule,
    pub mode: Mode,
    pub budget: Budget,
    pub chain: Vec<Condition>,
    /// next schedule item
    pub cursor: u64,
    pub queue: VecDeque<Queued>,
    pub records: Vec<StepRecord>,
    pub certs: Vec<StoredCert>,
}

/// A basis membership answer with the stage whose condition certified it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisAnswer {
    pub answer: MembershipAnswer,
    pub stage: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub stage: usize,
    pub n: usize,
    pub reason: String,
    /// `g ∉ U_n` globally holds when every extension report passed
    pub reports_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjAnswer {
    pub stage: usize,
    /// `f` with `f·g·f⁻¹·h⁻¹ ∈ U_n`
    pub f: Word,
    pub cert: ConjCert,
    /// certificate for `f·g·f⁻¹·h⁻¹` at level `n`
    pub rep: Arc<CanonicalRep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssgpAnswer {
    pub stage: usize,
    pub cert: CycCert,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCheck {
    /// "product", "symmetry" or "conjugation"
    pub claim: String,
    pub level: usize,
    pub word: Word,
    pub passed: bool,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub stage: usize,
    pub checks: Vec<GroupCheck>,
    /// products whose membership search stayed unknown
    pub unknown: usize,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl ChainState {
    /// The chain `[p_0]` with `p_0 = ⟨{a}, 1, trivial⟩`.
    pub fn new(schedule: Schedule, mode: Mode, budget: Budget) -> ChainState {
        ChainState {
            schedule,
            mode,
            budget,
            chain: vec![Condition::initial()],
            cursor: 0,
            queue: VecDeque::new(),
            records: Vec::new(),
            certs: Vec::new(),
        }
    }

    pub fn last(&self) -> &Condition {
        self.chain.last().expect("non-empty chain")
    }

    /// Current stage (index of the last condition).
    pub fn stage(&self) -> usize {
        self.chain.len() - 1
    }

    fn next_item(&mut self) -> Queued {
        let stage = self.chain.len();
        if let Some(pos) = self.queue.iter().position(|q| q.due <= stage) {
            return self.queue.remove(pos).expect("position in range");
        }
        let mut items = self.schedule.item(self.cursor).into_iter();
        self.cursor += 1;
        let first = items.next().expect("schedule items are non-empty");
        let rest: Vec<DenseDescriptor> = items.collect();
        let note = (!rest.is_empty()).then(|| "intersection met as consecutive steps".to_string());
        for (i, d) in rest.into_iter().enumerate().rev() {
            self.queue.push_front(Queued {
                descriptor: d,
                attempt: 0,
                due: stage + 1 + i,
                note: note.clone(),
            });
        }
        Queued {
            descriptor: first,
            attempt: 0,
            due: stage,
            note,
        }
    }

    /// Meets the next scheduled descriptor.
    pub fn step(&mut self) -> &StepRecord {
        let item = self.next_item();
        self.run(item, true)
    }

    /// Meets the given descriptor now, outside the schedule.
    pub fn step_with(&mut self, d: DenseDescriptor, note: &str) -> &StepRecord {
        let item = Queued {
            descriptor: d,
            attempt: 0,
            due: self.chain.len(),
            note: Some(note.to_string()),
        };
        self.run(item, false)
    }

    /// Like `step_with`, but a failed witness is retried at once with the
    /// larger attempts of the retry policy. Returns the last record.
    pub fn step_with_retries(&mut self, d: DenseDescriptor, note: &str) -> &StepRecord {
        let mut attempt = 0;
        loop {
            let item = Queued {
                descriptor: d.clone(),
                attempt,
                due: self.chain.len(),
                note: Some(note.to_string()),
            };
            let failed = matches!(self.run(item, false).outcome, Outcome::Failed { .. });
            if !failed || attempt + 1 >= MAX_ATTEMPTS {
                break;
            }
            attempt += 1;
        }
        self.records.last().expect("a step was recorded")
    }

    fn run(&mut self, item: Queued, retry: bool) -> &StepRecord {
        let stage = self.chain.len();
        let p = self.last().clone();
        // retries use more fresh letters and a larger search budget
        let mode = match self.mode {
            Mode::Test(k) => Mode::Test(k << item.attempt),
            Mode::Paper => Mode::Paper,
        };
        let mut budget = self.budget;
        budget.nodes <<= item.attempt;
        let record = match witness(&p, &item.descriptor, mode, budget) {
            Ok(w) => {
                self.chain.push(w.condition);
                for c in w.certs {
                    self.certs.push(StoredCert {
                        stage,
                        descriptor: item.descriptor.clone(),
                        cert: c,
                    });
                }
                StepRecord {
                    stage,
                    descriptor: item.descriptor,
                    attempt: item.attempt,
                    mode,
                    outcome: if w.unchanged { Outcome::AlreadyMet } else { Outcome::Met },
                    report: w.report,
                    note: item.note,
                    thresholds: w.thresholds,
                }
            }
            Err(e) => {
                self.chain.push(p);
                let again = retry && matches!(e, PosetError::WitnessFailed { .. }) && item.attempt + 1 < MAX_ATTEMPTS;
                if again {
                    self.queue.push_back(Queued {
                        descriptor: item.descriptor.clone(),
                        attempt: item.attempt + 1,
                        due: stage + RETRY_DELAY,
                        note: item.note.clone(),
                    });
                }
                StepRecord {
                    stage,
                    descriptor: item.descriptor,
                    attempt: item.attempt,
                    mode,
                    outcome: Outcome::Failed {
                        reason: e.to_string(),
                        retry: again,
                    },
                    report: ExtensionReport::reflexive(budget),
                    note: item.note,
                    thresholds: None,
                }
            }
        };
        self.records.push(record);
        self.records.last().expect("just pushed")
    }

    /// Distinct conditions with their first stage.
    fn distinct(&self) -> Vec<(usize, &Condition)> {
        let mut out: Vec<(usize, &Condition)> = Vec::new();
        for (s, c) in self.chain.iter().enumerate() {
            if out.last().is_none_or(|(_, prev)| !prev.u.ptr_eq(&c.u)) {
                out.push((s, c));
            }
        }
        out
    }

    /// Membership in `U_n`: stored certificates first, then the last
    /// condition, then earlier ones.
    pub fn basis_member(&self, n: usize, w: &Word) -> BasisAnswer {
        let last = self.last();
        if w.is_e() {
            let level = n.min(last.n);
            return BasisAnswer {
                answer: MembershipAnswer::Yes(identity_rep(&last.u, level).expect("e is in every level")),
                stage: Some(self.stage()),
            };
        }
        for sc in &self.certs {
            if let Cert::Conj(c) = &sc.cert {
                if &c.word == w && c.level >= n {
                    if let Some(rep) = descend(&self.chain[sc.stage].u, &c.rep, n) {
                        return BasisAnswer {
                            answer: MembershipAnswer::Yes(rep),
                            stage: Some(sc.stage),
                        };
                    }
                }
            }
        }
        if n > last.n {
            return BasisAnswer {
                answer: MembershipAnswer::Unknown,
                stage: None,
            };
        }
        let answer = member(&last.u, n, w, self.budget).unwrap_or(MembershipAnswer::Unknown);
        if !matches!(answer, MembershipAnswer::Unknown) {
            return BasisAnswer {
                stage: answer.is_yes().then(|| self.stage()),
                answer,
            };
        }
        for (s, c) in self.distinct().into_iter().rev().skip(1) {
            if n <= c.n {
                if let Ok(MembershipAnswer::Yes(r)) = member(&c.u, n, w, self.budget) {
                    return BasisAnswer {
                        answer: MembershipAnswer::Yes(r),
                        stage: Some(s),
                    };
                }
            }
        }
        BasisAnswer {
            answer: MembershipAnswer::Unknown,
            stage: None,
        }
    }

    /// The first stage whose condition has `g ∈ F(X^p) ∖ U^p_{n^p}`,
    /// refuted exactly.
    pub fn separation_index(&self, g: &Word) -> Result<Separation, FilterError> {
        if g.is_e() {
            return Err(FilterError::TrivialG);
        }
        for (s, c) in self.distinct() {
            if !g.supported_in(&c.x) {
                continue;
            }
            if let Ok(MembershipAnswer::No(reason)) = member(&c.u, c.n, g, self.budget) {
                return Ok(Separation {
                    stage: s,
                    n: c.n,
                    reason,
                    reports_pass: self.reports_pass(),
                });
            }
        }
        Err(FilterError::NotYetSeparated(g.clone()))
    }

    /// Every appended condition came with a passing extension report.
    pub fn reports_pass(&self) -> bool {
        self.records.iter().all(|r| r.report.passed())
    }

    fn find_conj(&self, g: &Word, hinv: &Word, n: usize) -> Option<ConjAnswer> {
        self.certs.iter().find_map(|sc| match &sc.cert {
            Cert::Conj(c) if &c.g == g && &c.h == hinv && c.level >= n => {
                let rep = descend(&self.chain[sc.stage].u, &c.rep, n)?;
                Some(ConjAnswer {
                    stage: sc.stage,
                    f: c.conjugator.clone(),
                    cert: c.clone(),
                    rep,
                })
            }
            _ => None,
        })
    }

    /// `f` with `f·g·f⁻¹ ∈ U_n·h`, stepping through `E(n, lett(g) ∪ lett(h),
    /// g, h⁻¹)` when no stored certificate applies.
    pub fn conj_density_witness(&mut self, g: &Word, h: &Word, n: usize) -> Result<ConjAnswer, FilterError> {
        if g.is_e() {
            return Err(FilterError::TrivialG);
        }
        let hinv = h.inverse();
        if let Some(a) = self.find_conj(g, &hinv, n) {
            return Ok(a);
        }
        let d = DenseDescriptor::E {
            n,
            s: g.letters().union(&h.letters()),
            g: g.clone(),
            h: hinv.clone(),
        };
        let rec = self.step_with_retries(d, "conjugacy density query");
        if let Outcome::Failed { reason, .. } = &rec.outcome {
            return Err(FilterError::WitnessFailed(reason.clone()));
        }
        self.find_conj(g, &hinv, n)
            .ok_or_else(|| FilterError::WitnessFailed("no certificate stored".into()))
    }

    fn find_cyc(&self, g: &Word, n: usize) -> Option<AssgpAnswer> {
        self.certs.iter().find_map(|sc| match &sc.cert {
            Cert::Cyc(c) if &c.target == g && c.factors.iter().all(|f| f.level >= n) => Some(AssgpAnswer {
                stage: sc.stage,
                cert: c.clone(),
            }),
            _ => None,
        })
    }

    /// A factorization of `g` into elements generating cyclic subgroups of
    /// `U_n`, stepping through `A(n)` and `D(g)` as needed.
    pub fn assgp_certificate(&mut self, n: usize, g: &Word) -> Result<AssgpAnswer, FilterError> {
        if g.is_e() {
            return Ok(AssgpAnswer {
                stage: self.stage(),
                cert: CycCert {
                    target: Word::e(),
                    factors: Vec::new(),
                },
            });
        }
        if let Some(a) = self.find_cyc(g, n) {
            return Ok(a);
        }
        if self.last().n < n {
            let rec = self.step_with_retries(DenseDescriptor::A(n), "ASSGP query");
            if let Outcome::Failed { reason, .. } = &rec.outcome {
                return Err(FilterError::WitnessFailed(reason.clone()));
            }
        }
        let rec = self.step_with_retries(DenseDescriptor::D(g.clone()), "ASSGP query");
        if let Outcome::Failed { reason, .. } = &rec.outcome {
            return Err(FilterError::WitnessFailed(reason.clone()));
        }
        let a = self
            .find_cyc(g, n)
            .ok_or_else(|| FilterError::WitnessFailed("no certificate stored".into()))?;
        a.cert
            .verify(&self.chain[a.stage].u)
            .map_err(FilterError::WitnessFailed)?;
        Ok(a)
    }

    /// Replays the basis claims on the last condition: products of sampled
    /// members of level `n+1` lie in level `n`, inverses of members are
    /// members, and conjugating a member of level `n+l` by a word of
    /// length `l` lands in level `n`.
    pub fn check_group_axioms(&self, budget: Budget) -> GroupReport {
        let sys = &self.last().u;
        let mut report = GroupReport {
            stage: self.stage(),
            ..GroupReport::default()
        };
        let depth = sys.depth();
        // stored certificates first, then the first enumerated members
        let certified: Vec<Arc<CanonicalRep>> = self
            .certs
            .iter()
            .filter_map(|sc| match &sc.cert {
                Cert::Conj(c) => lift(c.rep.clone(), &self.chain[sc.stage].u, sys),
                _ => None,
            })
            .collect();
        let sample = |level: usize| -> Vec<Arc<CanonicalRep>> {
            let mut out: Vec<Arc<CanonicalRep>> = certified.iter().filter(|r| r.level == level).cloned().collect();
            if let Ok(en) = enumerate_members(sys, level, budget) {
                out.extend(en.items.iter().take(GROUP_SAMPLE).map(|(_, r)| r.clone()));
            }
            out.dedup_by(|a, b| a.word == b.word);
            out
        };
        for n in 0..depth {
            let upper = sample(n + 1);
            for u in &upper {
                for v in &upper {
                    let word = u.word.mul(&v.word);
                    let (passed, note) = match compose(sys, n, None, u, v) {
                        Some(r) if r.word == word => match r.verify_full(sys) {
                            Ok(()) => {
                                if member(sys, n, &word, budget).is_ok_and(|a| a.is_no()) {
                                    (false, "search refutes a composed member".to_string())
                                } else {
                                    (true, "composed certificate verifies".to_string())
                                }
                            }
                            Err(e) => (false, e.to_string()),
                        },
                        _ => (false, "no composed certificate".to_string()),
                    };
                    report.checks.push(GroupCheck {
                        claim: "product".into(),
                        level: n,
                        word,
                        passed,
                        note,
                    });
                }
            }
        }
        for level in 0..=depth {
            for r in sample(level) {
                let inv = r.inverse();
                let res = inv.verify_full(sys);
                report.checks.push(GroupCheck {
                    claim: "symmetry".into(),
                    level,
                    word: inv.word.clone(),
                    passed: res.is_ok() && inv.word == r.word.inverse(),
                    note: res.err().map_or_else(|| "inverse certificate verifies".into(), |e| e.to_string()),
                });
            }
        }
        let letters: Vec<_> = sys.alphabet().letters().take(4).collect();
        for l in 1..=2usize {
            for n in 0..=depth.saturating_sub(l) {
                if n + l > depth {
                    continue;
                }
                for r in sample(n + l).into_iter().take(2) {
                    for &x0 in &letters {
                        let g: Vec<_> = std::iter::repeat_n(x0, l).collect();
                        let gw = Word::from_letters(g.iter().copied());
                        let mut cur = r.clone();
                        let mut ok = true;
                        for &x in g.iter().rev() {
                            let e = identity_rep(sys, cur.level).expect("e is in every level");
                            match compose(sys, cur.level - 1, Some(x), &cur, &e) {
                                Some(next) => cur = next,
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        let expected = gw.conjugate(&r.word);
                        let res = if ok { cur.verify_full(sys).map_err(|e| e.to_string()) } else { Err("no composed certificate".into()) };
                        report.checks.push(GroupCheck {
                            claim: "conjugation".into(),
                            level: n,
                            word: expected.clone(),
                            passed: res.is_ok() && cur.word == expected && cur.level == n,
                            note: res.err().unwrap_or_else(|| format!("m = n + {l}")),
                        });
                    }
                }
            }
        }
        report
    }

    /// Re-verifies every stored certificate against its stage.
    pub fn verify_certs(&self) -> Result<(), String> {
        for sc in &self.certs {
            let sys = &self
                .chain
                .get(sc.stage)
                .ok_or_else(|| format!("certificate for stage {} beyond the chain", sc.stage))?
                .u;
            let res = match &sc.cert {
                Cert::Conj(c) => c.verify(sys),
                Cert::Cyc(c) => c.verify(sys),
                Cert::Separation { g, level, .. } => match member(sys, *level, g, self.budget) {
                    Ok(MembershipAnswer::No(_)) => Ok(()),
                    _ => Err(format!("{g} is no longer refuted at level {level}")),
                },
            };
            res.map_err(|e| format!("{} at stage {}: {e}", sc.descriptor, sc.stage))?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let last = &self.last().u;
        let file = StateFile {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            schedule: self.schedule,
            mode: self.mode,
            budget: self.budget,
            cursor: self.cursor,
            system: last.to_records(),
            chain: self.chain.iter().map(|c| c.u.height()).collect(),
            queue: self.queue.iter().cloned().collect(),
            records: self.records.clone(),
            certs: self.certs.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("state serializes");
        s.push('\n');
        s
    }

    pub fn deserialize(text: &str) -> Result<ChainState, FilterError> {
        let bad = |m: String| FilterError::Format(m);
        let file: StateFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if file.format != FORMAT_NAME {
            return Err(bad(format!("not a chain state ({:?})", file.format)));
        }
        if file.version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {}", file.version)));
        }
        let sys = Nsys::from_records(&file.system).map_err(|e| bad(e.to_string()))?;
        let mut chain = Vec::with_capacity(file.chain.len());
        let mut prev = 0;
        for &h in &file.chain {
            if h < prev {
                return Err(bad("chain heights decrease".into()));
            }
            prev = h;
            let u = sys.ancestor(h).ok_or_else(|| bad(format!("no layer at height {h}")))?;
            chain.push(Condition::new(u.clone()));
        }
        if chain.is_empty() || chain.last().is_some_and(|c| c.u.height() != sys.height()) {
            return Err(bad("chain does not end at the stored system".into()));
        }
        let state = ChainState {
            schedule: file.schedule,
            mode: file.mode,
            budget: file.budget,
            chain,
            cursor: file.cursor,
            queue: file.queue.into(),
            records: file.records,
            certs: file.certs,
        };
        state.verify_certs().map_err(bad)?;
        Ok(state)
    }

    /// Alphabet of the last condition.
    pub fn alphabet(&self) -> &Alphabet {
        &self.last().x
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    format: String,
    version: u32,
    schedule: Schedule,
    mode: Mode,
    budget: Budget,
    cursor: u64,
    system: Vec<LayerRecord>,
    chain: Vec<usize>,
    queue: Vec<Queued>,
    records: Vec<StepRecord>,
    certs: Vec<StoredCert>,
}

#[cfg(test)]
mod tests;
