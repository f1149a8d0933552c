//! Finite neighbourhood systems `U_0 ⊇ U_1 ⊇ … ⊇ U_n` of a free group.
//!
//! Systems are intensional: a system is a stack of layers over a root, and
//! each layer describes its level sets in terms of the layer below. Levels
//! are never materialized. Membership is decided by searching for a
//! [`CanonicalRep`] certificate within a [`Budget`].

mod axioms;
mod eta;
mod rep;
mod search;
mod serial;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Alphabet, Letter, Word};

pub use axioms::{verify_axioms, AxiomCheck, AxiomReport, CheckMode};
pub use eta::{eta, letter_bound, letter_bound_check, reduce_rep};
pub use rep::{compose, descend, identity_rep, lift, pullback, BaseWitness, CanonicalRep, CertError, Origin, RepNode};
pub use search::{enumerate_members, member, Enumeration, MembershipAnswer};
pub use serial::LayerRecord;

/// Generators of a cyclic base above this count are refused.
pub const MAX_CYCLIC_GENERATORS: u128 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NbhdError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("base set is not closed under inverses: {0} has no inverse in it")]
    AsymmetricB(Word),
    #[error("base set element {0} is not supported in the ambient alphabet")]
    BaseOutsideAmbient(Word),
    #[error("system alphabet is not contained in the ambient alphabet")]
    AmbientTooSmall,
    #[error("fresh letters overlap the system alphabet")]
    OverlapAlphabet,
    #[error("too many fresh letters for a cyclic base ({0})")]
    TooManyGenerators(u128),
    #[error("level {level} out of range 0..={depth}")]
    BadLevel { level: usize, depth: usize },
    #[error("hypothesis of the reduction map not verified: {0}")]
    HypothesisUnverified(String),
    #[error("malformed system description: {0}")]
    Format(String),
    #[error("invalid certificate: {0}")]
    Cert(#[from] CertError),
}

/// Caps for bounded certificate search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// longest explicit leaf word taken from a finite set
    pub leaf_len: usize,
    /// largest |k| used for leaves `c^k` from a cyclic base
    pub exp: u32,
    /// cap on search nodes (membership) or candidates (enumeration)
    pub nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            leaf_len: 6,
            exp: 3,
            nodes: 20_000,
        }
    }
}

/// The set `B` adjoined at the top level of an enrichment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseSet {
    Finite(BTreeSet<Word>),
    /// `⋃ ⟨c⟩` over the listed generators
    Cyclic(Vec<Word>),
}

impl BaseSet {
    /// The base `{e}`.
    pub fn identity() -> BaseSet {
        BaseSet::Finite([Word::e()].into_iter().collect())
    }

    pub fn finite<I: IntoIterator<Item = Word>>(words: I) -> BaseSet {
        BaseSet::Finite(words.into_iter().collect())
    }

    /// The first element without its inverse, if any.
    pub fn asymmetry(&self) -> Option<Word> {
        match self {
            BaseSet::Finite(s) => s.iter().find(|w| !s.contains(&w.inverse())).cloned(),
            BaseSet::Cyclic(_) => None,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        let mut a = Alphabet::new();
        let ws: Box<dyn Iterator<Item = &Word>> = match self {
            BaseSet::Finite(s) => Box::new(s.iter()),
            BaseSet::Cyclic(v) => Box::new(v.iter()),
        };
        for w in ws {
            a = a.union(&w.letters());
        }
        a
    }

    pub fn is_finite(&self) -> bool {
        match self {
            BaseSet::Finite(_) => true,
            BaseSet::Cyclic(v) => v.is_empty(),
        }
    }

    /// Exact membership; the witness names the generator and exponent for
    /// cyclic bases.
    pub fn witness(&self, w: &Word) -> Option<BaseWitness> {
        match self {
            BaseSet::Finite(s) => s.contains(w).then_some(BaseWitness::Element),
            BaseSet::Cyclic(gens) => {
                if w.is_e() {
                    return gens.first().map(|c| BaseWitness::Power {
                        generator: c.clone(),
                        exponent: 0,
                    });
                }
                gens.iter().find_map(|c| {
                    w.cyclic_member(c).ok().flatten().map(|k| BaseWitness::Power {
                        generator: c.clone(),
                        exponent: k,
                    })
                })
            }
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.witness(w).is_some()
    }
}

/// How a layer builds its levels from the layer below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    /// every level is `{e}`
    Trivial,
    /// hand-built finite levels; not validated on construction
    Explicit(Vec<BTreeSet<Word>>),
    /// levels above the base depth are `{e}`, the rest are the base's
    Padded,
    /// the `B`-enrichment of the base over the node alphabet
    Enriched(BaseSet),
}

pub(crate) struct Node {
    pub(crate) layer: Layer,
    pub(crate) base: Option<Nsys>,
    pub(crate) alphabet: Alphabet,
    pub(crate) depth: usize,
    pub(crate) height: usize,
    pub(crate) cache: Mutex<HashMap<(usize, Budget), Arc<Enumeration>>>,
}

/// A finite neighbourhood system, shared by reference.
#[derive(Clone)]
pub struct Nsys(pub(crate) Arc<Node>);

impl std::fmt::Debug for Nsys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Nsys")
            .field("alphabet", &self.alphabet().to_string())
            .field("depth", &self.depth())
            .field("height", &self.height())
            .field("layer", &self.layer())
            .finish()
    }
}

impl PartialEq for Nsys {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.height() == other.height()
            && self.depth() == other.depth()
            && self.alphabet() == other.alphabet()
            && self.layer() == other.layer()
            && self.base() == other.base()
    }
}

impl Eq for Nsys {}

impl Nsys {
    fn make(layer: Layer, base: Option<Nsys>, alphabet: Alphabet, depth: usize) -> Nsys {
        let height = base.as_ref().map_or(0, |b| b.height() + 1);
        Nsys(Arc::new(Node {
            layer,
            base,
            alphabet,
            depth,
            height,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// The system with every level equal to `{e}`.
    pub fn trivial(alphabet: Alphabet, n: usize) -> Result<Nsys, NbhdError> {
        if n < 1 {
            return Err(NbhdError::ZeroDepth);
        }
        Ok(Nsys::make(Layer::Trivial, None, alphabet, n))
    }

    /// A hand-built system with levels `levels[0] ⊇ … ⊇ levels[n]`.
    /// The axioms are not checked here; see [`verify_axioms`].
    pub fn explicit(alphabet: Alphabet, levels: Vec<BTreeSet<Word>>) -> Result<Nsys, NbhdError> {
        if levels.len() < 2 {
            return Err(NbhdError::ZeroDepth);
        }
        let n = levels.len() - 1;
        Ok(Nsys::make(Layer::Explicit(levels), None, alphabet, n))
    }

    /// Appends `{e}` levels up to depth `n`; unchanged if `n ≤ depth`.
    pub fn pad(&self, n: usize) -> Nsys {
        if n <= self.depth() {
            return self.clone();
        }
        Nsys::make(Layer::Padded, Some(self.clone()), self.alphabet().clone(), n)
    }

    /// The `B`-enrichment of this system in `F(ambient)`.
    pub fn enrich(&self, b: BaseSet, ambient: Alphabet) -> Result<Nsys, NbhdError> {
        if !self.alphabet().is_subset(&ambient) {
            return Err(NbhdError::AmbientTooSmall);
        }
        if let Some(w) = b.asymmetry() {
            return Err(NbhdError::AsymmetricB(w));
        }
        let ws: Vec<&Word> = match &b {
            BaseSet::Finite(s) => s.iter().collect(),
            BaseSet::Cyclic(v) => v.iter().collect(),
        };
        if let Some(w) = ws.into_iter().find(|w| !w.supported_in(&ambient)) {
            return Err(NbhdError::BaseOutsideAmbient(w.clone()));
        }
        let b = match b {
            BaseSet::Cyclic(v) => BaseSet::Cyclic(v.into_iter().filter(|c| !c.is_e()).collect()),
            other => other,
        };
        Ok(Nsys::make(Layer::Enriched(b), Some(self.clone()), ambient, self.depth()))
    }

    /// The cyclic enrichment by the fresh letters: `B = ⋃_{y ∈ fresh} ⟨y⟩`
    /// over the enlarged alphabet.
    pub fn cyclic_alphabet_extension(&self, fresh: &Alphabet) -> Result<Nsys, NbhdError> {
        if !fresh.is_disjoint(self.alphabet()) {
            return Err(NbhdError::OverlapAlphabet);
        }
        if fresh.len() > MAX_CYCLIC_GENERATORS {
            return Err(NbhdError::TooManyGenerators(fresh.len()));
        }
        let gens = fresh.ids().map(Word::gen).collect();
        self.enrich(BaseSet::Cyclic(gens), self.alphabet().union(fresh))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    /// Number of layers below this one.
    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn layer(&self) -> &Layer {
        &self.0.layer
    }

    pub fn base(&self) -> Option<&Nsys> {
        self.0.base.as_ref()
    }

    pub fn ptr_eq(&self, other: &Nsys) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The layer at the given height in this system's stack.
    pub fn ancestor(&self, height: usize) -> Option<&Nsys> {
        let mut cur = self;
        while cur.height() > height {
            cur = cur.base()?;
        }
        (cur.height() == height).then_some(cur)
    }

    /// True iff `other` is a layer of this system's stack (or the system
    /// itself).
    pub fn builds_on(&self, other: &Nsys) -> bool {
        self.ancestor(other.height())
            .is_some_and(|a| a.ptr_eq(other) || a == other)
    }

    /// Layers from the root up to this one.
    pub fn stack(&self) -> Vec<Nsys> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(b) = cur.base().cloned() {
            out.push(b.clone());
            cur = b;
        }
        out.reverse();
        out
    }

    /// Whether all level sets are finite (so enumeration can be complete).
    pub fn is_finite(&self) -> bool {
        match self.layer() {
            Layer::Trivial | Layer::Explicit(_) => true,
            Layer::Padded => self.base().is_some_and(|b| b.is_finite()),
            Layer::Enriched(b) => b.is_finite() && self.base().is_some_and(|x| x.is_finite()),
        }
    }

    pub fn check_level(&self, level: usize) -> Result<(), NbhdError> {
        if level > self.depth() {
            return Err(NbhdError::BadLevel {
                level,
                depth: self.depth(),
            });
        }
        Ok(())
    }

    /// Conjugators `X̄` of this layer, identity first.
    pub fn conjugators(&self) -> impl Iterator<Item = Option<Letter>> + '_ {
        std::iter::once(None).chain(self.alphabet().letters().map(Some))
    }
}
