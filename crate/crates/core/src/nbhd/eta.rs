use std::sync::Arc;

use super::rep::{identity_rep, CanonicalRep, Origin, RepNode};
use super::search::enumerate;
use super::{BaseSet, Budget, Layer, NbhdError, Nsys};
use crate::word::{Alphabet, Word};

/// The reduction map for `B′ ⊆ B`: sends elements of `B ∖ B′` to `e` and
/// fixes everything else.
pub fn eta(w: &Word, b: &BaseSet, b_prime: &BaseSet) -> Word {
    if b.contains(w) && !b_prime.contains(w) {
        Word::e()
    } else {
        w.clone()
    }
}

/// `|X| · 4^(n−i)`, saturating.
pub fn letter_bound(size_x: u128, n: usize, i: usize) -> u128 {
    let e = n.saturating_sub(i) as u32;
    4u128
        .checked_pow(e)
        .and_then(|p| p.checked_mul(size_x))
        .unwrap_or(u128::MAX)
}

/// True iff the leaves of `rep` use at most `|X| · 4^(n−i)` letters in
/// total (counted per leaf).
pub fn letter_bound_check(rep: &CanonicalRep, x: &Alphabet, n: usize, i: usize) -> bool {
    let total: u128 = rep.leaves().iter().map(|w| w.letters().len()).sum();
    total <= letter_bound(x.len(), n, i)
}

/// Maps a certificate of the `B`-enrichment `sys` to one of the
/// `B′`-enrichment of the same base, replacing every leaf by its η-image.
///
/// The disjointness hypothesis `(B ∖ B′) ∩ (X̄ ∪ ⋃ V′_i) ⊆ {e}` is checked
/// on the enumerated members of the `B′`-enrichment; the call fails when a
/// violation turns up or when the node cap cut the enumeration short.
pub fn reduce_rep(
    rep: &CanonicalRep,
    sys: &Nsys,
    b_prime: &BaseSet,
    budget: Budget,
) -> Result<(Nsys, CanonicalRep), NbhdError> {
    let Layer::Enriched(b) = sys.layer() else {
        return Err(NbhdError::HypothesisUnverified("system is not an enrichment".into()));
    };
    let base = sys.base().expect("enriched layer has a base");
    let reduced = base.enrich(b_prime.clone(), sys.alphabet().clone())?;
    rep.verify(sys)?;

    let in_diff = |w: &Word| !w.is_e() && b.contains(w) && !b_prime.contains(w);
    if let Some(x) = sys.alphabet().letters().take(budget.nodes).map(Word::letter).find(|w| in_diff(w)) {
        return Err(NbhdError::HypothesisUnverified(format!("letter {x} lies in B ∖ B′")));
    }
    for i in 0..=reduced.depth() {
        let en = enumerate(&reduced, i, budget);
        if let Some((w, _)) = en.items.iter().find(|(w, _)| in_diff(w)) {
            return Err(NbhdError::HypothesisUnverified(format!("{w} lies in V′_{i} and in B ∖ B′")));
        }
        if en.capped {
            return Err(NbhdError::HypothesisUnverified(format!(
                "node budget exhausted while listing V′_{i}"
            )));
        }
    }

    let out = map_rep(rep, &reduced, b, b_prime)?;
    out.verify(&reduced)?;
    Ok((reduced, out))
}

fn map_rep(rep: &CanonicalRep, reduced: &Nsys, b: &BaseSet, b_prime: &BaseSet) -> Result<CanonicalRep, NbhdError> {
    match &rep.node {
        RepNode::Leaf(Origin::Base(_)) => {
            let img = eta(&rep.word, b, b_prime);
            if img.is_e() {
                let below = identity_rep(reduced.base().expect("enrichment has a base"), rep.level)
                    .ok_or_else(|| NbhdError::HypothesisUnverified("e missing from the base system".into()))?;
                return Ok(CanonicalRep::lower(below));
            }
            let wit = b_prime
                .witness(&img)
                .ok_or_else(|| NbhdError::HypothesisUnverified(format!("{img} not in B′")))?;
            Ok(CanonicalRep::leaf(rep.level, img, Origin::Base(wit)))
        }
        RepNode::Leaf(_) => Ok(rep.clone()),
        RepNode::Conj { x, left, right } => {
            let l = map_rep(left, reduced, b, b_prime)?;
            let r = map_rep(right, reduced, b, b_prime)?;
            Ok(CanonicalRep::conj(*x, Arc::new(l), Arc::new(r)))
        }
    }
}
