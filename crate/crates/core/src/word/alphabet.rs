use std::fmt;

use super::{GeneratorId, Letter, Sign};

/// A finite set of generator ids, stored as sorted, disjoint, non-adjacent
/// inclusive ranges so that fresh blocks of size 2^32 stay cheap.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    ranges: Vec<(u64, u64)>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet { ranges: Vec::new() }
    }

    pub fn from_ids<I: IntoIterator<Item = u64>>(ids: I) -> Self {
        let mut a = Alphabet::new();
        for id in ids {
            a.insert_range(id, id);
        }
        a
    }

    /// `len` consecutive ids starting at `start`. `len` must be at least 1.
    pub fn block(start: u64, len: u64) -> Self {
        let mut a = Alphabet::new();
        a.insert_range(start, start + (len - 1));
        a
    }

    pub fn ranges(&self) -> &[(u64, u64)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn len(&self) -> u128 {
        self.ranges
            .iter()
            .map(|&(lo, hi)| (hi - lo) as u128 + 1)
            .sum()
    }

    pub fn max_id(&self) -> Option<u64> {
        self.ranges.last().map(|r| r.1)
    }

    pub fn contains(&self, id: u64) -> bool {
        let idx = self.ranges.partition_point(|r| r.1 < id);
        idx < self.ranges.len() && self.ranges[idx].0 <= id
    }

    /// True iff the whole range `lo..=hi` lies inside the alphabet.
    pub fn contains_range(&self, lo: u64, hi: u64) -> bool {
        let idx = self.ranges.partition_point(|r| r.1 < lo);
        idx < self.ranges.len() && self.ranges[idx].0 <= lo && hi <= self.ranges[idx].1
    }

    pub fn insert(&mut self, id: u64) {
        self.insert_range(id, id);
    }

    pub fn insert_range(&mut self, lo: u64, hi: u64) {
        assert!(lo <= hi, "empty range");
        let mut lo = lo;
        let mut hi = hi;
        let mut out = Vec::with_capacity(self.ranges.len() + 1);
        let mut placed = false;
        for &(a, b) in &self.ranges {
            if b.saturating_add(1) < lo {
                out.push((a, b));
            } else if hi.saturating_add(1) < a {
                if !placed {
                    out.push((lo, hi));
                    placed = true;
                }
                out.push((a, b));
            } else {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if !placed {
            out.push((lo, hi));
        }
        self.ranges = out;
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.clone();
        for &(lo, hi) in &other.ranges {
            out.insert_range(lo, hi);
        }
        out
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.ranges.iter().all(|&(lo, hi)| other.contains_range(lo, hi))
    }

    pub fn is_disjoint(&self, other: &Alphabet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a, b) = self.ranges[i];
            let (c, d) = other.ranges[j];
            if b < c {
                i += 1;
            } else if d < a {
                j += 1;
            } else {
                return false;
            }
        }
        true
    }

    pub fn difference(&self, other: &Alphabet) -> Alphabet {
        let mut out = Alphabet::new();
        for &(lo, hi) in &self.ranges {
            let mut cur = lo;
            let mut done = false;
            for &(c, d) in &other.ranges {
                if d < cur || c > hi {
                    continue;
                }
                if c > cur {
                    out.ranges.push((cur, c - 1));
                }
                if d >= hi {
                    done = true;
                    break;
                }
                cur = d + 1;
            }
            if !done {
                out.ranges.push((cur, hi));
            }
        }
        out
    }

    /// Ids in ascending order.
    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.ranges.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    /// X̄ without the identity: every letter and its inverse,
    /// ordered by id with the positive letter first.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.ids().flat_map(|id| {
            [
                Letter::new(GeneratorId(id), Sign::Pos),
                Letter::new(GeneratorId(id), Sign::Neg),
            ]
        })
    }

    /// The smallest id that is larger than every id in the alphabet and at
    /// least `floor`.
    pub fn fresh_start(&self, floor: u64) -> u64 {
        match self.max_id() {
            Some(m) => (m + 1).max(floor),
            None => floor,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(lo, hi) in &self.ranges {
            let mut tokens = Vec::new();
            if hi - lo >= 3 {
                tokens.push(super::text::range_token(lo, hi));
            } else {
                for id in lo..=hi {
                    tokens.push(super::text::gen_name(id));
                }
            }
            for t in tokens {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                f.write_str(&t)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_merges_adjacent() {
        let mut a = Alphabet::new();
        a.insert(3);
        a.insert(5);
        assert_eq!(a.ranges(), &[(3, 3), (5, 5)]);
        a.insert(4);
        assert_eq!(a.ranges(), &[(3, 5)]);
        a.insert_range(0, 1);
        assert_eq!(a.ranges(), &[(0, 1), (3, 5)]);
        a.insert(2);
        assert_eq!(a.ranges(), &[(0, 5)]);
    }

    #[test]
    fn subset_and_difference() {
        let a = Alphabet::from_ids([0, 1, 2, 7, 8]);
        let b = Alphabet::from_ids([1, 7]);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.difference(&b), Alphabet::from_ids([0, 2, 8]));
        assert!(Alphabet::from_ids([3, 4]).is_disjoint(&a));
        assert!(!b.is_disjoint(&a));
    }

    #[test]
    fn huge_block_is_compact() {
        let a = Alphabet::block(23, 1 << 32);
        assert_eq!(a.len(), 1u128 << 32);
        assert_eq!(a.ranges().len(), 1);
        assert!(a.contains(23 + (1 << 31)));
        assert_eq!(a.fresh_start(23), 23 + (1 << 32));
    }
}
