use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::rep::{BaseWitness, CanonicalRep, Origin};
use super::{BaseSet, Budget, Layer, NbhdError, Nsys};
use crate::word::{Letter, Word};

/// Result of a bounded membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipAnswer {
    Yes(Arc<CanonicalRep>),
    /// definitely not a member, with the reason
    No(String),
    Unknown,
}

impl MembershipAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, MembershipAnswer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, MembershipAnswer::No(_))
    }

    pub fn rep(&self) -> Option<&Arc<CanonicalRep>> {
        match self {
            MembershipAnswer::Yes(r) => Some(r),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            MembershipAnswer::Yes(_) => "yes",
            MembershipAnswer::No(_) => "no",
            MembershipAnswer::Unknown => "unknown",
        }
    }
}

/// Distinct members of a level with certificates, in search order.
#[derive(Debug)]
pub struct Enumeration {
    pub items: Vec<(Word, Arc<CanonicalRep>)>,
    /// the level has members not listed here
    pub truncated: bool,
    /// the node cap (rather than leaf or exponent caps) stopped the listing
    pub capped: bool,
}

impl Enumeration {
    pub fn find(&self, w: &Word) -> Option<&Arc<CanonicalRep>> {
        self.items.iter().find(|(x, _)| x == w).map(|(_, r)| r)
    }
}

/// Lists members of level `level`: depth-0 leaves ordered by length, then
/// exponent magnitude, then word order; then composites by increasing tree
/// depth, walking pairs of lower members diagonally. Memoized per system.
pub fn enumerate_members(sys: &Nsys, level: usize, budget: Budget) -> Result<Arc<Enumeration>, NbhdError> {
    sys.check_level(level)?;
    Ok(enumerate(sys, level, budget))
}

pub(crate) fn enumerate(sys: &Nsys, level: usize, budget: Budget) -> Arc<Enumeration> {
    if let Some(hit) = sys.0.cache.lock().expect("cache lock").get(&(level, budget)) {
        return hit.clone();
    }
    let out = Arc::new(compute(sys, level, budget));
    sys.0
        .cache
        .lock()
        .expect("cache lock")
        .insert((level, budget), out.clone());
    out
}

fn single(level: usize, origin: Origin) -> Enumeration {
    Enumeration {
        items: vec![(Word::e(), Arc::new(CanonicalRep::leaf(level, Word::e(), origin)))],
        truncated: false,
        capped: false,
    }
}

fn compute(sys: &Nsys, level: usize, budget: Budget) -> Enumeration {
    match sys.layer() {
        Layer::Trivial => single(level, Origin::Identity),
        Layer::Explicit(levels) => {
            let mut items = Vec::new();
            let mut truncated = false;
            let mut capped = false;
            for w in &levels[level] {
                if w.len() > budget.leaf_len as u128 {
                    truncated = true;
                    continue;
                }
                if items.len() >= budget.nodes {
                    truncated = true;
                    capped = true;
                    break;
                }
                items.push((w.clone(), Arc::new(CanonicalRep::leaf(level, w.clone(), Origin::Listed))));
            }
            Enumeration {
                items,
                truncated,
                capped,
            }
        }
        Layer::Padded => {
            let base = sys.base().expect("padded layer has a base");
            if level > base.depth() {
                return single(level, Origin::Identity);
            }
            let below = enumerate(base, level, budget);
            Enumeration {
                items: below
                    .items
                    .iter()
                    .map(|(w, r)| (w.clone(), Arc::new(CanonicalRep::lower(r.clone()))))
                    .collect(),
                truncated: below.truncated,
                capped: below.capped,
            }
        }
        Layer::Enriched(b) => enumerate_enriched(sys, b, level, budget),
    }
}

fn base_leaves(b: &BaseSet, level: usize, budget: Budget) -> (Vec<Arc<CanonicalRep>>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    match b {
        BaseSet::Finite(s) => {
            for w in s {
                if w.len() > budget.leaf_len as u128 {
                    truncated = true;
                    continue;
                }
                out.push(Arc::new(CanonicalRep::leaf(
                    level,
                    w.clone(),
                    Origin::Base(BaseWitness::Element),
                )));
            }
        }
        BaseSet::Cyclic(gens) => {
            truncated = !gens.is_empty();
            for c in gens {
                for k in 1..=budget.exp as i64 {
                    for e in [k, -k] {
                        out.push(Arc::new(CanonicalRep::leaf(
                            level,
                            c.pow(e),
                            Origin::Base(BaseWitness::Power {
                                generator: c.clone(),
                                exponent: e,
                            }),
                        )));
                    }
                }
            }
        }
    }
    (out, truncated)
}

fn enumerate_enriched(sys: &Nsys, b: &BaseSet, level: usize, budget: Budget) -> Enumeration {
    let base = sys.base().expect("enriched layer has a base");
    let below = enumerate(base, level, budget);
    let mut truncated = below.truncated;
    let mut capped = below.capped;
    let mut leaves: Vec<Arc<CanonicalRep>> = below
        .items
        .iter()
        .map(|(_, r)| Arc::new(CanonicalRep::lower(r.clone())))
        .collect();
    if level == sys.depth() {
        let (extra, t) = base_leaves(b, level, budget);
        truncated |= t;
        leaves.extend(extra);
    }
    leaves.sort_by(|x, y| {
        x.word
            .len()
            .cmp(&y.word.len())
            .then(x.exp_magnitude().cmp(&y.exp_magnitude()))
            .then_with(|| x.word.cmp(&y.word))
    });
    let mut seen: HashSet<Word> = HashSet::new();
    let mut items: Vec<(Word, Arc<CanonicalRep>)> = Vec::new();
    for r in leaves {
        if items.len() >= budget.nodes {
            truncated = true;
            capped = true;
            break;
        }
        if seen.insert(r.word.clone()) {
            items.push((r.word.clone(), r));
        }
    }
    if level == sys.depth() {
        return Enumeration {
            items,
            truncated,
            capped,
        };
    }

    let child = enumerate(sys, level + 1, budget);
    truncated |= child.truncated;
    capped |= child.capped;
    // child items are grouped by tree depth; ends[d] = number of child
    // items of depth ≤ d
    let depths: Vec<usize> = child.items.iter().map(|(_, r)| r.tree_depth()).collect();
    let max_d = depths.iter().copied().max().unwrap_or(0);
    let ends: Vec<usize> = (0..=max_d)
        .map(|d| depths.iter().take_while(|&&x| x <= d).count())
        .collect();
    let xs: Vec<Option<Letter>> = sys.conjugators().take(budget.nodes.max(1)).collect();
    let mut generated = 0usize;
    let mut work = 0usize;
    let work_cap = budget.nodes.saturating_mul(8);
    'bands: for d in 0..=max_d {
        let n = ends[d];
        let prev = if d == 0 { 0 } else { ends[d - 1] };
        if n == 0 {
            continue;
        }
        for s in 0..(2 * n - 1) {
            let lo = s.saturating_sub(n - 1);
            let hi = s.min(n - 1);
            for iu in lo..=hi {
                let iv = s - iu;
                work += 1;
                if work > work_cap {
                    truncated = true;
                    capped = true;
                    break 'bands;
                }
                if iu < prev && iv < prev {
                    continue;
                }
                let (_, ru) = &child.items[iu];
                let (_, rv) = &child.items[iv];
                let uv = ru.word.mul(&rv.word);
                for &x in &xs {
                    if generated >= budget.nodes {
                        truncated = true;
                        capped = true;
                        break 'bands;
                    }
                    generated += 1;
                    let w = match x {
                        None => uv.clone(),
                        Some(l) => Word::letter(l).conjugate(&uv),
                    };
                    if seen.contains(&w) {
                        continue;
                    }
                    seen.insert(w.clone());
                    let rep = CanonicalRep {
                        level,
                        word: w.clone(),
                        node: super::RepNode::Conj {
                            x,
                            left: ru.clone(),
                            right: rv.clone(),
                        },
                    };
                    items.push((w, Arc::new(rep)));
                }
            }
        }
    }
    if xs.len() < sys.alphabet().len() as usize * 2 + 1 {
        truncated = true;
    }
    Enumeration {
        items,
        truncated,
        capped,
    }
}

/// Bounded membership: `Yes` carries a certificate, `No` is only returned
/// when refutation is exact for this system, `Unknown` otherwise.
pub fn member(sys: &Nsys, level: usize, w: &Word, budget: Budget) -> Result<MembershipAnswer, NbhdError> {
    sys.check_level(level)?;
    let mut s = Searcher {
        budget,
        used: 0,
        memo: HashMap::new(),
    };
    let ans = s.search(sys, level, w);
    if let MembershipAnswer::Yes(r) = &ans {
        debug_assert!(r.verify_full(sys).is_ok(), "search produced an invalid certificate");
    }
    Ok(ans)
}

struct Searcher {
    budget: Budget,
    used: usize,
    memo: HashMap<(usize, usize, Word), MembershipAnswer>,
}

/// Split points tried when looking for `w = u · v` without cancellation,
/// balanced splits first.
fn split_points(w: &Word) -> Vec<u128> {
    let len = w.len();
    let mut pts: Vec<u128> = if len <= 48 { (0..=len).collect() } else { boundary_points(w) };
    pts.sort_by_key(|&p| ((2 * p).abs_diff(len), p));
    pts
}

fn boundary_points(w: &Word) -> Vec<u128> {
    let len = w.len();
    let mut pts: Vec<u128> = Vec::new();
    for b in w.segment_boundaries() {
        for d in [0i128, -2, -1, 1, 2] {
            let p = b as i128 + d;
            if p >= 0 && p <= len as i128 {
                pts.push(p as u128);
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

impl Searcher {
    fn search(&mut self, sys: &Nsys, level: usize, w: &Word) -> MembershipAnswer {
        if !w.supported_in(sys.alphabet()) {
            return MembershipAnswer::No(format!("{w} is not supported in the alphabet"));
        }
        let key = (sys.height(), level, w.clone());
        if let Some(a) = self.memo.get(&key) {
            return a.clone();
        }
        if self.used >= self.budget.nodes {
            return MembershipAnswer::Unknown;
        }
        self.used += 1;
        let ans = self.search_uncached(sys, level, w);
        if !matches!(ans, MembershipAnswer::Unknown) || self.used < self.budget.nodes {
            self.memo.insert(key, ans.clone());
        }
        ans
    }

    fn search_uncached(&mut self, sys: &Nsys, level: usize, w: &Word) -> MembershipAnswer {
        match sys.layer() {
            Layer::Trivial => {
                if w.is_e() {
                    MembershipAnswer::Yes(Arc::new(CanonicalRep::leaf(level, Word::e(), Origin::Identity)))
                } else {
                    MembershipAnswer::No("every level is {e}".into())
                }
            }
            Layer::Explicit(levels) => {
                if levels[level].contains(w) {
                    MembershipAnswer::Yes(Arc::new(CanonicalRep::leaf(level, w.clone(), Origin::Listed)))
                } else {
                    MembershipAnswer::No(format!("{w} is not listed at level {level}"))
                }
            }
            Layer::Padded => {
                let base = sys.base().expect("padded layer has a base");
                if level > base.depth() {
                    return if w.is_e() {
                        MembershipAnswer::Yes(Arc::new(CanonicalRep::leaf(level, Word::e(), Origin::Identity)))
                    } else {
                        MembershipAnswer::No(format!("level {level} is {{e}}"))
                    };
                }
                match self.search(base, level, w) {
                    MembershipAnswer::Yes(r) => MembershipAnswer::Yes(Arc::new(CanonicalRep::lower(r))),
                    other => other,
                }
            }
            Layer::Enriched(b) => self.search_enriched(sys, b, level, w),
        }
    }

    fn search_enriched(&mut self, sys: &Nsys, b: &BaseSet, level: usize, w: &Word) -> MembershipAnswer {
        let base = sys.base().expect("enriched layer has a base");
        let below = self.search(base, level, w);
        if let MembershipAnswer::Yes(r) = below {
            return MembershipAnswer::Yes(Arc::new(CanonicalRep::lower(r)));
        }
        let below_exact = below.is_no();
        if level == sys.depth() {
            if let Some(wit) = b.witness(w) {
                return MembershipAnswer::Yes(Arc::new(CanonicalRep::leaf(level, w.clone(), Origin::Base(wit))));
            }
            return if below_exact {
                MembershipAnswer::No(format!("{w} is neither in the lower level nor in the base"))
            } else {
                MembershipAnswer::Unknown
            };
        }
        if sys.is_finite() {
            let all = enumerate(sys, level, self.budget);
            if !all.truncated {
                return match all.find(w) {
                    Some(r) => MembershipAnswer::Yes(r.clone()),
                    None => MembershipAnswer::No(format!("{w} is not among all members of level {level}")),
                };
            }
        }
        let mut xs: Vec<Option<Letter>> = vec![None];
        if let Some(f) = w.first_letter() {
            xs.push(Some(f));
        }
        if let Some(l) = w.last_letter() {
            xs.push(Some(l.inverse()));
        }
        if sys.alphabet().len() <= 8 {
            xs.extend(sys.alphabet().letters().map(Some));
        }
        let mut uniq = Vec::new();
        for x in xs {
            if !uniq.contains(&x) {
                uniq.push(x);
            }
        }
        let child_items = enumerate(sys, level + 1, self.budget);
        for x in uniq {
            if self.used >= self.budget.nodes {
                break;
            }
            let inner = match x {
                None => w.clone(),
                Some(l) => Word::letter(l.inverse()).conjugate(w),
            };
            for p in split_points(&inner) {
                if self.used >= self.budget.nodes {
                    break;
                }
                let (u, v) = inner.split_at(p);
                if let Some(rep) = self.try_pair(sys, level, x, &u, &v) {
                    return MembershipAnswer::Yes(rep);
                }
            }
            for (u, ru) in child_items.items.iter() {
                if self.used >= self.budget.nodes {
                    break;
                }
                let v = u.inverse().mul(&inner);
                let rv = match self.search(sys, level + 1, &v) {
                    MembershipAnswer::Yes(r) => r,
                    _ => continue,
                };
                return MembershipAnswer::Yes(Arc::new(CanonicalRep::conj(x, ru.clone(), rv)));
            }
        }
        MembershipAnswer::Unknown
    }

    fn try_pair(&mut self, sys: &Nsys, level: usize, x: Option<Letter>, u: &Word, v: &Word) -> Option<Arc<CanonicalRep>> {
        let ru = self.search(sys, level + 1, u).rep()?.clone();
        let rv = self.search(sys, level + 1, v).rep()?.clone();
        Some(Arc::new(CanonicalRep::conj(x, ru, rv)))
    }
}
