use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BaseSet, Layer, Nsys};
use crate::word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("level {level} exceeds depth {depth}")]
    Level { level: usize, depth: usize },
    #[error("word {0} leaves the system alphabet")]
    Alphabet(Word),
    #[error("identity leaf for {0} at a level that is not {{e}}")]
    Identity(Word),
    #[error("listed leaf {0} is not in the explicit level")]
    Listed(Word),
    #[error("lower-layer leaf does not match: {0}")]
    Lower(String),
    #[error("base leaf {0} is not in the enrichment base")]
    Base(Word),
    #[error("composite node at a layer or level that does not admit one: {0}")]
    Composite(String),
    #[error("stored word {stored} differs from recomputed {computed}")]
    Product { stored: Word, computed: Word },
}

/// Why a word belongs to an enrichment base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseWitness {
    /// element of a finite base
    Element,
    /// `generator^exponent`
    Power { generator: Word, exponent: i64 },
}

impl BaseWitness {
    fn exp_magnitude(&self) -> u64 {
        match self {
            BaseWitness::Element => 0,
            BaseWitness::Power { exponent, .. } => exponent.unsigned_abs(),
        }
    }

    fn inverse(&self) -> BaseWitness {
        match self {
            BaseWitness::Element => BaseWitness::Element,
            BaseWitness::Power {
                generator,
                exponent,
            } => BaseWitness::Power {
                generator: generator.clone(),
                exponent: -exponent,
            },
        }
    }
}

/// Origin of a leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// `e` at a level that is `{e}` by construction
    Identity,
    /// member of a hand-built finite level
    Listed,
    /// member of the same level of the layer below
    Lower(Arc<CanonicalRep>),
    /// member of the enrichment base `B`
    Base(BaseWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepNode {
    Leaf(Origin),
    /// `x · left · right · x⁻¹` with `left`, `right` one level deeper
    Conj {
        x: Option<Letter>,
        left: Arc<CanonicalRep>,
        right: Arc<CanonicalRep>,
    },
}

/// A derivation that `word` lies in level `level` of a system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalRep {
    pub level: usize,
    pub word: Word,
    pub node: RepNode,
}

impl CanonicalRep {
    pub fn leaf(level: usize, word: Word, origin: Origin) -> CanonicalRep {
        CanonicalRep {
            level,
            word,
            node: RepNode::Leaf(origin),
        }
    }

    /// Builds `x · left · right · x⁻¹`; both children must sit one level
    /// deeper than the result.
    pub fn conj(x: Option<Letter>, left: Arc<CanonicalRep>, right: Arc<CanonicalRep>) -> CanonicalRep {
        let xw = x.map_or_else(Word::e, Word::letter);
        let word = xw.conjugate(&left.word.mul(&right.word));
        CanonicalRep {
            level: left.level - 1,
            word,
            node: RepNode::Conj { x, left, right },
        }
    }

    /// Wraps a certificate of the layer below.
    pub fn lower(rep: Arc<CanonicalRep>) -> CanonicalRep {
        CanonicalRep {
            level: rep.level,
            word: rep.word.clone(),
            node: RepNode::Leaf(Origin::Lower(rep)),
        }
    }

    /// Composite depth at this layer (leaves have depth 0).
    pub fn tree_depth(&self) -> usize {
        match &self.node {
            RepNode::Leaf(_) => 0,
            RepNode::Conj { left, right, .. } => 1 + left.tree_depth().max(right.tree_depth()),
        }
    }

    pub(crate) fn exp_magnitude(&self) -> u64 {
        match &self.node {
            RepNode::Leaf(Origin::Base(b)) => b.exp_magnitude(),
            RepNode::Leaf(Origin::Lower(r)) => r.exp_magnitude(),
            _ => 0,
        }
    }

    /// The sequence `a_1, …, a_m` whose product is the certified word:
    /// conjugating letters and leaf words in order.
    pub fn flatten(&self) -> Vec<Word> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<Word>) {
        match &self.node {
            RepNode::Leaf(_) => out.push(self.word.clone()),
            RepNode::Conj { x, left, right } => {
                if let Some(x) = x {
                    out.push(Word::letter(*x));
                }
                left.flatten_into(out);
                right.flatten_into(out);
                if let Some(x) = x {
                    out.push(Word::letter(x.inverse()));
                }
            }
        }
    }

    /// Leaf words only, in order.
    pub fn leaves(&self) -> Vec<&Word> {
        let mut out = Vec::new();
        self.leaves_into(&mut out);
        out
    }

    fn leaves_into<'a>(&'a self, out: &mut Vec<&'a Word>) {
        match &self.node {
            RepNode::Leaf(_) => out.push(&self.word),
            RepNode::Conj { left, right, .. } => {
                left.leaves_into(out);
                right.leaves_into(out);
            }
        }
    }

    /// Checks that the flattened sequence multiplies to the stored word.
    /// Uses only word multiplication, never the system.
    pub fn verify_product(&self) -> Result<(), CertError> {
        let computed = Word::product(self.flatten().iter());
        if computed != self.word {
            return Err(CertError::Product {
                stored: self.word.clone(),
                computed,
            });
        }
        Ok(())
    }

    /// Certificate for the inverse word (levels are symmetric).
    pub fn inverse(&self) -> CanonicalRep {
        let word = self.word.inverse();
        let node = match &self.node {
            RepNode::Leaf(Origin::Lower(r)) => RepNode::Leaf(Origin::Lower(Arc::new(r.inverse()))),
            RepNode::Leaf(Origin::Base(b)) => RepNode::Leaf(Origin::Base(b.inverse())),
            RepNode::Leaf(o) => RepNode::Leaf(o.clone()),
            RepNode::Conj { x, left, right } => RepNode::Conj {
                x: *x,
                left: Arc::new(right.inverse()),
                right: Arc::new(left.inverse()),
            },
        };
        CanonicalRep {
            level: self.level,
            word,
            node,
        }
    }

    /// Full structural check of the certificate against the system.
    pub fn verify(&self, sys: &Nsys) -> Result<(), CertError> {
        if self.level > sys.depth() {
            return Err(CertError::Level {
                level: self.level,
                depth: sys.depth(),
            });
        }
        if !self.word.supported_in(sys.alphabet()) {
            return Err(CertError::Alphabet(self.word.clone()));
        }
        match (&self.node, sys.layer()) {
            (RepNode::Leaf(Origin::Identity), layer) => {
                let ok = self.word.is_e()
                    && match layer {
                        Layer::Trivial => true,
                        Layer::Padded => self.level > sys.base().map_or(0, |b| b.depth()),
                        _ => false,
                    };
                if !ok {
                    return Err(CertError::Identity(self.word.clone()));
                }
            }
            (RepNode::Leaf(Origin::Listed), Layer::Explicit(levels)) => {
                if !levels[self.level].contains(&self.word) {
                    return Err(CertError::Listed(self.word.clone()));
                }
            }
            (RepNode::Leaf(Origin::Listed), _) => {
                return Err(CertError::Listed(self.word.clone()));
            }
            (RepNode::Leaf(Origin::Lower(sub)), Layer::Padded | Layer::Enriched(_)) => {
                let base = sys.base().expect("layer has a base");
                if sub.level != self.level || sub.word != self.word {
                    return Err(CertError::Lower(format!(
                        "wrapper ({}, {}) vs inner ({}, {})",
                        self.level, self.word, sub.level, sub.word
                    )));
                }
                sub.verify(base)?;
            }
            (RepNode::Leaf(Origin::Lower(_)), _) => {
                return Err(CertError::Lower("root layer has no layer below".into()));
            }
            (RepNode::Leaf(Origin::Base(wit)), Layer::Enriched(b)) => {
                let ok = self.level == sys.depth()
                    && match (wit, b) {
                        (BaseWitness::Element, BaseSet::Finite(s)) => s.contains(&self.word),
                        (
                            BaseWitness::Power {
                                generator,
                                exponent,
                            },
                            BaseSet::Cyclic(gens),
                        ) => {
                            (gens.contains(generator) || self.word.is_e())
                                && !generator.is_e()
                                && generator.pow(*exponent) == self.word
                        }
                        _ => false,
                    };
                if !ok {
                    return Err(CertError::Base(self.word.clone()));
                }
            }
            (RepNode::Leaf(Origin::Base(_)), _) => {
                return Err(CertError::Base(self.word.clone()));
            }
            (RepNode::Conj { x, left, right }, Layer::Enriched(_)) => {
                if self.level >= sys.depth() {
                    return Err(CertError::Composite(format!("at top level {}", self.level)));
                }
                if let Some(x) = x {
                    if !sys.alphabet().contains(x.id()) {
                        return Err(CertError::Composite(format!(
                            "conjugator {} not in the alphabet",
                            Word::letter(*x)
                        )));
                    }
                }
                if left.level != self.level + 1 || right.level != self.level + 1 {
                    return Err(CertError::Composite("children not one level deeper".into()));
                }
                left.verify(sys)?;
                right.verify(sys)?;
                let xw = x.map_or_else(Word::e, Word::letter);
                let computed = xw.conjugate(&left.word.mul(&right.word));
                if computed != self.word {
                    return Err(CertError::Product {
                        stored: self.word.clone(),
                        computed,
                    });
                }
            }
            (RepNode::Conj { .. }, _) => {
                return Err(CertError::Composite("layer is not an enrichment".into()));
            }
        }
        Ok(())
    }

    /// Both checks: structural against `sys` and the independent product.
    pub fn verify_full(&self, sys: &Nsys) -> Result<(), CertError> {
        self.verify(sys)?;
        self.verify_product()
    }
}

/// Certificate for `e` at `level`.
pub fn identity_rep(sys: &Nsys, level: usize) -> Option<Arc<CanonicalRep>> {
    if level > sys.depth() {
        return None;
    }
    let rep = match sys.layer() {
        Layer::Trivial => CanonicalRep::leaf(level, Word::e(), Origin::Identity),
        Layer::Explicit(levels) => {
            if !levels[level].contains(&Word::e()) {
                return None;
            }
            CanonicalRep::leaf(level, Word::e(), Origin::Listed)
        }
        Layer::Padded => {
            let base = sys.base()?;
            if level > base.depth() {
                CanonicalRep::leaf(level, Word::e(), Origin::Identity)
            } else {
                CanonicalRep::lower(identity_rep(base, level)?)
            }
        }
        Layer::Enriched(_) => CanonicalRep::lower(identity_rep(sys.base()?, level)?),
    };
    Some(Arc::new(rep))
}

/// Re-expresses a certificate valid in `from` (a layer of `to`'s stack) as
/// a certificate valid in `to`.
pub fn lift(rep: Arc<CanonicalRep>, from: &Nsys, to: &Nsys) -> Option<Arc<CanonicalRep>> {
    if !to.builds_on(from) || rep.level > from.depth() {
        return None;
    }
    let mut r = rep;
    for _ in from.height()..to.height() {
        r = Arc::new(CanonicalRep::lower(r));
    }
    Some(r)
}

/// Certificate for `x · u · v · x⁻¹` at `level` from certificates of `u`
/// and `v` at `level + 1`, both valid in `sys`.
pub fn compose(
    sys: &Nsys,
    level: usize,
    x: Option<Letter>,
    u: &Arc<CanonicalRep>,
    v: &Arc<CanonicalRep>,
) -> Option<Arc<CanonicalRep>> {
    if level >= sys.depth() || u.level != level + 1 || v.level != level + 1 {
        return None;
    }
    if let Some(x) = x {
        if !sys.alphabet().contains(x.id()) {
            return None;
        }
    }
    let rep = match sys.layer() {
        Layer::Enriched(_) => CanonicalRep::conj(x, u.clone(), v.clone()),
        Layer::Trivial => CanonicalRep::leaf(level, Word::e(), Origin::Identity),
        Layer::Explicit(levels) => {
            let xw = x.map_or_else(Word::e, Word::letter);
            let w = xw.conjugate(&u.word.mul(&v.word));
            if !levels[level].contains(&w) {
                return None;
            }
            CanonicalRep::leaf(level, w, Origin::Listed)
        }
        Layer::Padded => {
            let base = sys.base()?;
            if level + 1 > base.depth() {
                // u = v = e, so the product is e, which lies in every level
                if !u.word.is_e() || !v.word.is_e() {
                    return None;
                }
                return identity_rep(sys, level);
            }
            let (RepNode::Leaf(Origin::Lower(su)), RepNode::Leaf(Origin::Lower(sv))) = (&u.node, &v.node)
            else {
                return None;
            };
            CanonicalRep::lower(compose(base, level, x, su, sv)?)
        }
    };
    Some(Arc::new(rep))
}

/// Moves a certificate valid in `sys` down to the layer `target` of its
/// stack, when every node of the derivation already exists there.
pub fn pullback(rep: &Arc<CanonicalRep>, sys: &Nsys, target: &Nsys) -> Option<Arc<CanonicalRep>> {
    if sys.height() == target.height() {
        return Some(rep.clone());
    }
    if sys.height() < target.height() || rep.level > target.depth() {
        return None;
    }
    match &rep.node {
        RepNode::Leaf(Origin::Lower(sub)) => pullback(sub, sys.base()?, target),
        RepNode::Leaf(Origin::Identity) => identity_rep(target, rep.level),
        RepNode::Leaf(_) => None,
        RepNode::Conj { x, left, right } => {
            let l = pullback(left, sys, target)?;
            let r = pullback(right, sys, target)?;
            compose(target, rep.level, *x, &l, &r)
        }
    }
}

/// Certificate that `U_i ⊆ U_j` for `j ≤ i`: descends by composing with
/// `e` (the axiom `x·U_{i+1}·U_{i+1}·x⁻¹ ⊆ U_i` with `x = e`).
pub fn descend(sys: &Nsys, rep: &Arc<CanonicalRep>, to_level: usize) -> Option<Arc<CanonicalRep>> {
    let mut cur = rep.clone();
    while cur.level > to_level {
        let e = identity_rep(sys, cur.level)?;
        cur = compose(sys, cur.level - 1, None, &cur, &e)?;
    }
    (cur.level == to_level).then_some(cur)
}
