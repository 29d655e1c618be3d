//! `k`-subsets of `[n]` as machine words, and families of them.
//!
//! A [`KSet`] stores element `i` in bit `i - 1`, so `n <= 64`. Comparing the
//! raw words numerically is exactly the colex order, which is why a
//! [`Family`] keeps its members sorted by word: the canonical order and the
//! colex order coincide.

mod matching;
mod shadow;
mod shift;
mod text;

use std::fmt;

pub(crate) use matching::has_matching_bits;
pub use matching::{cover_number, matching_number};
pub use shadow::{ell_shadow, ell_shadow_direct, shadow};
pub use shift::{is_shifted, shift_closure, shift_ij};

use crate::error::{Error, Result};

/// Largest supported universe.
pub const MAX_N: u32 = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KSet(u64);

impl KSet {
    pub const EMPTY: KSet = KSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        KSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Set from its elements (each in `1..=64`, any order, duplicates rejected).
    pub fn from_elems<I: IntoIterator<Item = u32>>(elems: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elems {
            if !(1..=MAX_N).contains(&e) {
                return Err(Error::Range(format!("element {e} outside 1..={MAX_N}")));
            }
            let b = 1u64 << (e - 1);
            if bits & b != 0 {
                return Err(Error::Domain(format!("element {e} repeated")));
            }
            bits |= b;
        }
        Ok(KSet(bits))
    }

    /// `{lo, lo+1, ..., hi}`; empty when `lo > hi`.
    pub fn interval(lo: u32, hi: u32) -> Self {
        if lo > hi || hi == 0 {
            return KSet::EMPTY;
        }
        let lo = lo.max(1);
        let width = hi - lo + 1;
        let run = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        KSet(run << (lo - 1))
    }

    /// `[n] = {1, ..., n}`.
    pub fn prefix(n: u32) -> Self {
        KSet::interval(1, n)
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=MAX_N).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    pub fn insert(self, v: u32) -> Self {
        KSet(self.0 | 1u64 << (v - 1))
    }

    pub fn remove(self, v: u32) -> Self {
        KSet(self.0 & !(1u64 << (v - 1)))
    }

    pub const fn union(self, o: KSet) -> Self {
        KSet(self.0 | o.0)
    }

    pub const fn intersection(self, o: KSet) -> Self {
        KSet(self.0 & o.0)
    }

    pub const fn difference(self, o: KSet) -> Self {
        KSet(self.0 & !o.0)
    }

    pub const fn is_subset(self, o: KSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub const fn is_disjoint(self, o: KSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Elements in increasing order.
    pub fn elems(self) -> Elems {
        Elems(self.0)
    }

    /// Every subset of `self` with exactly `r` elements, in colex order.
    pub fn subsets_of_size(self, r: u32) -> impl Iterator<Item = KSet> {
        let elems: Vec<u32> = self.elems().collect();
        let k = elems.len() as u32;
        let picks = if r <= k { Some(Combinations::new(k, r)) } else { None };
        picks.into_iter().flatten().map(move |pick| {
            let mut bits = 0u64;
            for p in pick.elems() {
                bits |= 1u64 << (elems[p as usize - 1] - 1);
            }
            KSet(bits)
        })
    }
}

pub struct Elems(u64);

impl Iterator for Elems {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elems {}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All `r`-subsets of `[n]` in colex order (Gosper's hack).
#[derive(Clone, Debug)]
pub struct Combinations {
    cur: Option<u64>,
    limit: u128,
}

impl Combinations {
    pub fn new(n: u32, r: u32) -> Self {
        assert!(n <= MAX_N, "universe {n} exceeds {MAX_N}");
        let cur = (r <= n).then(|| KSet::prefix(r).bits());
        Combinations { cur, limit: 1u128 << n }
    }
}

impl Iterator for Combinations {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        let x = self.cur?;
        self.cur = if x == 0 {
            None
        } else {
            let x = x as u128;
            let c = x & x.wrapping_neg();
            let r = x + c;
            let next = (((r ^ x) >> 2) / c) | r;
            (next < self.limit).then_some(next as u64)
        };
        Some(KSet(x))
    }
}

/// A `k`-uniform family on `[n]`, members deduplicated and in colex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Family {
    n: u32,
    k: u32,
    members: Vec<KSet>,
}

impl Family {
    pub fn empty(n: u32, k: u32) -> Self {
        Family { n, k, members: Vec::new() }
    }

    /// Validates every member, then sorts and deduplicates.
    pub fn new<I: IntoIterator<Item = KSet>>(n: u32, k: u32, members: I) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Range(format!("universe {n} exceeds {MAX_N}")));
        }
        if k > n {
            return Err(Error::Domain(format!("uniformity {k} exceeds universe {n}")));
        }
        let ground = KSet::prefix(n);
        let mut v: Vec<KSet> = Vec::new();
        for a in members {
            if a.len() != k {
                return Err(Error::UniformityMismatch { left: a.len(), right: k });
            }
            if !a.is_subset(ground) {
                return Err(Error::Range(format!("member {a} not inside [{n}]")));
            }
            v.push(a);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Family { n, k, members: v })
    }

    /// Caller guarantees validity; members are sorted and deduplicated here.
    pub(crate) fn from_raw(n: u32, k: u32, mut members: Vec<KSet>) -> Self {
        members.sort_unstable();
        members.dedup();
        debug_assert!(members.iter().all(|a| a.len() == k && a.is_subset(KSet::prefix(n))));
        Family { n, k, members }
    }

    /// `C([n], k)`.
    pub fn complete(n: u32, k: u32) -> Result<Self> {
        Family::filtered(n, k, |_| true)
    }

    /// The `k`-subsets of `[n]` satisfying `keep`.
    pub fn filtered(n: u32, k: u32, keep: impl Fn(KSet) -> bool) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Range(format!("universe {n} exceeds {MAX_N}")));
        }
        if k > n {
            return Err(Error::Domain(format!("uniformity {k} exceeds universe {n}")));
        }
        let members = Combinations::new(n, k).filter(|&a| keep(a)).collect();
        Ok(Family { n, k, members })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.members.iter()
    }

    pub fn contains(&self, a: KSet) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Same members viewed in a larger universe.
    pub fn with_universe(&self, n: u32) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Range(format!("universe {n} exceeds {MAX_N}")));
        }
        let ground = KSet::prefix(n);
        if let Some(a) = self.members.iter().find(|a| !a.is_subset(ground)) {
            return Err(Error::Range(format!("member {a} not inside [{n}]")));
        }
        Ok(Family { n, k: self.k, members: self.members.clone() })
    }

    /// `self ∪ other`; both must share `k`, the universe is the larger one.
    pub fn union(&self, other: &Family) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::UniformityMismatch { left: self.k, right: other.k });
        }
        let mut v = self.members.clone();
        v.extend_from_slice(&other.members);
        Ok(Family::from_raw(self.n.max(other.n), self.k, v))
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.k == other.k && self.members.iter().all(|&a| other.contains(a))
    }

    /// `{A ∪ S : A ∈ self}` for `S` disjoint from every member.
    pub fn translate(&self, s: KSet, n: u32) -> Result<Self> {
        if self.members.iter().any(|a| !a.is_disjoint(s)) {
            return Err(Error::Domain(format!("translate set {s} meets a member")));
        }
        Family::new(n, self.k + s.len(), self.members.iter().map(|a| a.union(s)))
    }

    /// The first `m` members in colex order.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m > self.members.len() {
            return Err(Error::SegmentTooLong { m: m as u128, available: self.members.len() as u128 });
        }
        Ok(Family { n: self.n, k: self.k, members: self.members[..m].to_vec() })
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v < 1 || v > self.n {
            return Err(Error::Range(format!("vertex {v} outside 1..={}", self.n)));
        }
        Ok(())
    }

    /// `d(v) = |{A : v ∈ A}|`.
    pub fn degree(&self, v: u32) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.members.iter().filter(|a| a.contains(v)).count())
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.members.iter().filter(|a| a.contains(v)).count()).max().unwrap_or(0)
    }

    /// `{A \ {v} : v ∈ A}`, a `(k-1)`-uniform family on the same universe.
    pub fn link(&self, v: u32) -> Result<Self> {
        self.check_vertex(v)?;
        if self.k == 0 {
            return Err(Error::EmptyUniformity);
        }
        let members = self.members.iter().filter(|a| a.contains(v)).map(|a| a.remove(v)).collect();
        Ok(Family::from_raw(self.n, self.k - 1, members))
    }

    /// Members avoiding `v`; the universe is unchanged.
    pub fn delete_vertex(&self, v: u32) -> Result<Self> {
        self.check_vertex(v)?;
        let members = self.members.iter().copied().filter(|a| !a.contains(v)).collect();
        Ok(Family { n: self.n, k: self.k, members })
    }

    /// `|A ∩ B| >= t` for all distinct members, and `k >= t` if non-empty.
    pub fn is_t_intersecting(&self, t: u32) -> bool {
        if self.members.is_empty() {
            return true;
        }
        if self.k < t {
            return false;
        }
        let m = &self.members;
        (0..m.len()).all(|i| m[i + 1..].iter().all(|b| m[i].intersection(*b).len() >= t))
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
