use serde::{Deserialize, Serialize};

use super::search::{enumerate, member, MembershipAnswer};
use super::{Budget, Layer, Nsys};
use crate::word::Word;

/// How a check was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exact,
    Exhaustive,
    /// holds by construction given the layer below
    Structural,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    /// height of the layer in its stack
    pub layer: usize,
    /// 1 = alphabet, 2 = symmetry, 3 = product/conjugation closure, 4 = e ∈ U_n
    pub axiom: u8,
    pub level: Option<usize>,
    pub mode: CheckMode,
    pub passed: bool,
    pub witness: Option<Word>,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    /// sampled closure products whose membership stayed unknown
    pub unknown: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Samples per level for the closure spot-check of enriched layers.
const SAMPLE: usize = 8;

fn check(layer: usize, axiom: u8, level: Option<usize>, mode: CheckMode, witness: Option<Word>, note: impl Into<String>) -> AxiomCheck {
    AxiomCheck {
        layer,
        axiom,
        level,
        mode,
        passed: witness.is_none(),
        witness,
        note: note.into(),
    }
}

/// Checks the four axioms of a finite neighbourhood system on every layer
/// of the stack.
pub fn verify_axioms(sys: &Nsys, budget: Budget) -> AxiomReport {
    let mut report = AxiomReport::default();
    for layer in sys.stack() {
        check_layer(&layer, budget, &mut report);
    }
    report
}

fn check_layer(sys: &Nsys, budget: Budget, report: &mut AxiomReport) {
    let h = sys.height();
    let n = sys.depth();
    match sys.layer() {
        Layer::Trivial => {
            for axiom in 1..=4 {
                report.checks.push(check(h, axiom, None, CheckMode::Exact, None, "all levels are {e}"));
            }
        }
        Layer::Explicit(levels) => {
            for (i, lv) in levels.iter().enumerate() {
                let bad = lv.iter().find(|w| !w.supported_in(sys.alphabet())).cloned();
                report.checks.push(check(h, 1, Some(i), CheckMode::Exact, bad, "level within F(X)"));
                let bad = lv.iter().find(|w| !lv.contains(&w.inverse())).cloned();
                report.checks.push(check(h, 2, Some(i), CheckMode::Exact, bad, "level closed under inverses"));
            }
            for i in 0..n {
                let mut bad = None;
                'outer: for x in sys.conjugators() {
                    let xw = x.map_or_else(Word::e, Word::letter);
                    for u in &levels[i + 1] {
                        for v in &levels[i + 1] {
                            let w = xw.conjugate(&u.mul(v));
                            if !levels[i].contains(&w) {
                                bad = Some(w);
                                break 'outer;
                            }
                        }
                    }
                }
                report.checks.push(check(
                    h,
                    3,
                    Some(i),
                    CheckMode::Exhaustive,
                    bad,
                    "all products x·u·v·x⁻¹ over finite levels",
                ));
            }
            let bad = (!levels[n].contains(&Word::e())).then(Word::e);
            report.checks.push(check(h, 4, Some(n), CheckMode::Exact, bad, "e in the top level"));
        }
        Layer::Padded => {
            let base = sys.base().expect("padded layer has a base");
            let e_ok = member(base, base.depth(), &Word::e(), budget)
                .map(|a| a.is_yes())
                .unwrap_or(false);
            report.checks.push(check(
                h,
                3,
                Some(base.depth()),
                CheckMode::Exact,
                (!e_ok).then(Word::e),
                "x·e·e·x⁻¹ = e lies in the old top level",
            ));
            for axiom in [1, 2, 4] {
                report.checks.push(check(h, axiom, None, CheckMode::Exact, None, "appended levels are {e}"));
            }
        }
        Layer::Enriched(b) => {
            let base = sys.base().expect("enriched layer has a base");
            let bad = base
                .alphabet()
                .union(&b.alphabet())
                .difference(sys.alphabet())
                .ids()
                .next()
                .map(Word::gen);
            report.checks.push(check(h, 1, None, CheckMode::Exact, bad, "base system and B inside F(ambient)"));
            report.checks.push(check(h, 2, Some(n), CheckMode::Exact, b.asymmetry(), "B closed under inverses"));
            report.checks.push(check(
                h,
                3,
                None,
                CheckMode::Structural,
                None,
                "V_i contains every x·V_{i+1}·V_{i+1}·x⁻¹ by definition",
            ));
            for i in 0..n {
                let upper = enumerate(sys, i + 1, budget);
                let sample: Vec<&Word> = upper.items.iter().take(SAMPLE).map(|(w, _)| w).collect();
                let mut bad = None;
                'outer: for x in sys.conjugators().take(5) {
                    let xw = x.map_or_else(Word::e, Word::letter);
                    for u in &sample {
                        for v in &sample {
                            let w = xw.conjugate(&u.mul(v));
                            match member(sys, i, &w, budget) {
                                Ok(MembershipAnswer::No(_)) => {
                                    bad = Some(w);
                                    break 'outer;
                                }
                                Ok(MembershipAnswer::Unknown) => report.unknown += 1,
                                _ => {}
                            }
                        }
                    }
                }
                report.checks.push(check(h, 3, Some(i), CheckMode::Sampled, bad, "sampled products re-found by search"));
            }
            let e_ok = member(sys, n, &Word::e(), budget)
                .map(|a| a.is_yes())
                .unwrap_or(false);
            report.checks.push(check(h, 4, Some(n), CheckMode::Exact, (!e_ok).then(Word::e), "e in V_n"));
        }
    }
}
