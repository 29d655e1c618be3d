//! Colex order, ranking, and initial segments `L_m` of the full layer and of
//! the restricted layers `EM` and `HM`.
//!
//! The order on a restricted layer is the global colex order restricted to
//! its members. Segments can be produced two independent ways: by filtering
//! the global order, or by assembling the blocks named by the cascade
//! representation of `m`, each translated by the shifted tail
//! `{a_{i+1}+1, ..., a_k+1}`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::combinatorics::{binom, cascade_generalized, cascade_hm, CascadeRep, Restriction};
use crate::error::{Error, Result};
use crate::families::{FamilySpec, Params, Predicate};
use crate::setfamily::{ell_shadow, Combinations, Family, KSet, MAX_N};

/// Colex comparison; `A < B` iff the largest element of `A Δ B` lies in `B`.
pub fn colex_cmp(a: KSet, b: KSet) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::UniformityMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.bits().cmp(&b.bits()))
}

/// 0-based position of `A = {a_1 < ... < a_k}` in the colex order: `sum_i C(a_i - 1, i)`.
pub fn colex_rank(a: KSet) -> u128 {
    a.elems().enumerate().map(|(i, e)| binom(e as i64 - 1, i as i64 + 1).expect("fits for n <= 64")).sum()
}

/// The `k`-set of colex rank `r`.
pub fn colex_unrank(r: u128, k: u32) -> Result<KSet> {
    let mut rem = r;
    let mut bits = 0u64;
    let mut upper = MAX_N as i64;
    for i in (1..=k as i64).rev() {
        // largest c < upper with C(c, i) <= rem
        let mut c = i - 1;
        while c + 1 < upper && binom(c + 1, i)? <= rem {
            c += 1;
        }
        let v = binom(c, i)?;
        if v > rem || c + 1 > MAX_N as i64 {
            return Err(Error::Range(format!("rank {r} has no {k}-set inside [{MAX_N}]")));
        }
        rem -= v;
        bits |= 1u64 << c;
        upper = c;
    }
    if rem != 0 {
        return Err(Error::Range(format!("rank {r} has no {k}-set inside [{MAX_N}]")));
    }
    Ok(KSet::from_bits(bits))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SegmentKind {
    Full,
    Em { s: u32, t: u32 },
    Hm { s: u32, t: u32 },
}

/// `L_m` of the layer named by `kind` on `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentSpec {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub n: u32,
    pub k: u32,
    pub m: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentMethod {
    /// Walk the global colex order keeping members of the layer.
    Filter,
    /// Assemble translated blocks from the cascade representation of `m`.
    Decompose,
    /// Run both and require identical output.
    Both,
}

impl FromStr for SegmentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "filter" => Ok(SegmentMethod::Filter),
            "decompose" => Ok(SegmentMethod::Decompose),
            "both" => Ok(SegmentMethod::Both),
            _ => Err(Error::Domain(format!("unknown segment method {s:?}"))),
        }
    }
}

impl SegmentSpec {
    pub fn new(kind: SegmentKind, n: u32, k: u32, m: u128) -> Self {
        SegmentSpec { kind, n, k, m }
    }

    /// The layer whose prefix this is.
    pub fn ambient(&self) -> FamilySpec {
        let (n, k) = (self.n, self.k);
        match self.kind {
            SegmentKind::Full => FamilySpec::Full { n, k },
            SegmentKind::Em { s, t } => FamilySpec::Em { n, k, s, t },
            SegmentKind::Hm { s, t } => FamilySpec::HmSt { n, k, s, t },
        }
    }

    pub fn restriction(&self) -> Restriction {
        match self.kind {
            SegmentKind::Full => Restriction::FULL,
            SegmentKind::Em { s, t } => Restriction::Em { s, t },
            SegmentKind::Hm { s, t } => Restriction::Hm { s, t },
        }
    }

    /// Size of the ambient layer.
    pub fn available(&self) -> Result<u128> {
        self.ambient().size()
    }

    pub fn validate(&self) -> Result<()> {
        let available = self.available()?;
        if self.m > available {
            return Err(Error::SegmentTooLong { m: self.m, available });
        }
        Ok(())
    }

    /// Cascade representation of `m` against this layer; `None` for `m = 0`.
    pub fn cascade(&self) -> Result<Option<CascadeRep>> {
        if self.m == 0 {
            return Ok(None);
        }
        let rep = match self.kind {
            SegmentKind::Full => cascade_generalized(self.m, self.k, 0, 0)?,
            SegmentKind::Em { s, t } => cascade_generalized(self.m, self.k, s, t)?,
            SegmentKind::Hm { s, t } => cascade_hm(self.m, self.k, s, t)?,
        };
        Ok(Some(rep))
    }

    /// Members of the block of uniformity `i` on `[a]` used by the decomposition.
    ///
    /// For `EM`, a block on `[a]` with `a < s` is the whole layer: all of its
    /// sets lie inside `[s]`, and the tail added later supplies no further
    /// elements of `[s]`. Otherwise the block is the literal layer.
    pub fn block(&self, a: u32, i: u32) -> Result<Family> {
        let keep = match self.kind {
            SegmentKind::Full => Predicate::All,
            SegmentKind::Em { s, .. } if a < s => Predicate::All,
            SegmentKind::Em { s, t } => return em_block(a, i, s, t),
            SegmentKind::Hm { s, t } => FamilySpec::HmSt { n: a.max(s + t), k: i, s, t }.predicate()?,
        };
        Family::filtered(a, i, |x| keep.test(x))
    }
}

/// `EM(a,i,s,t)` for `s <= a`, built from its parts inside and outside `[s]`
/// rather than by filtering `C([a],i)`.
fn em_block(a: u32, i: u32, s: u32, t: u32) -> Result<Family> {
    if i > a {
        return Err(Error::Domain(format!("uniformity {i} exceeds universe {a}")));
    }
    let mut members = Vec::new();
    for j in t..=i.min(s) {
        if i - j > a - s {
            continue;
        }
        for low in Combinations::new(s, j) {
            members.extend(Combinations::new(a - s, i - j).map(|high| low.union(KSet::from_bits(high.bits() << s))));
        }
    }
    Ok(Family::from_raw(a, i, members))
}

impl fmt::Display for SegmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, k, m) = (self.n, self.k, self.m);
        match self.kind {
            SegmentKind::Full => write!(f, "full:n={n},k={k},m={m}"),
            SegmentKind::Em { s, t } => write!(f, "em:n={n},k={k},s={s},t={t},m={m}"),
            SegmentKind::Hm { s, t } => write!(f, "hm:n={n},k={k},s={s},t={t},m={m}"),
        }
    }
}

impl FromStr for SegmentSpec {
    type Err = Error;

    /// `full:n=..,k=..,m=..`, `em:n=..,k=..,s=..,t=..,m=..` or `hm:...` with
    /// the same keys as `em`; a leading `segment:` is accepted.
    fn from_str(src: &str) -> Result<Self> {
        let body = src.trim();
        let body = body.strip_prefix("segment:").unwrap_or(body);
        let (name, rest) =
            body.split_once(':').ok_or_else(|| Error::Domain(format!("{src}: expected kind:key=value,...")))?;
        let spec = match name {
            "full" => {
                let p = Params::parse(src, rest, &["n", "k", "m"])?;
                SegmentSpec::new(SegmentKind::Full, p.get("n")?, p.get("k")?, p.get_wide("m")?)
            }
            "em" | "hm" => {
                let p = Params::parse(src, rest, &["n", "k", "s", "t", "m"])?;
                let (s, t) = (p.get("s")?, p.get("t")?);
                let kind = if name == "em" { SegmentKind::Em { s, t } } else { SegmentKind::Hm { s, t } };
                SegmentSpec::new(kind, p.get("n")?, p.get("k")?, p.get_wide("m")?)
            }
            _ => return Err(Error::Domain(format!("{src}: unknown segment kind {name:?}"))),
        };
        spec.ambient().validate()?;
        Ok(spec)
    }
}

/// `L_m` of the layer.
pub fn initial_segment(spec: &SegmentSpec, method: SegmentMethod) -> Result<Family> {
    spec.validate()?;
    match method {
        SegmentMethod::Filter => filter_segment(spec),
        SegmentMethod::Decompose => decompose_segment(spec),
        SegmentMethod::Both => {
            let a = filter_segment(spec)?;
            let b = decompose_segment(spec)?;
            if a != b {
                return Err(Error::Domain(format!("{spec}: filtered and decomposed segments differ")));
            }
            Ok(a)
        }
    }
}

fn filter_segment(spec: &SegmentSpec) -> Result<Family> {
    let keep = spec.ambient().predicate()?;
    let members = Combinations::new(spec.n, spec.k).filter(|&a| keep.test(a)).take(spec.m as usize).collect();
    Ok(Family::from_raw(spec.n, spec.k, members))
}

fn decompose_segment(spec: &SegmentSpec) -> Result<Family> {
    let Some(rep) = spec.cascade()? else {
        return Ok(Family::empty(spec.n, spec.k));
    };
    // Each block sits on [a] below the tail, and the tails grow, so the
    // blocks are disjoint and arrive already in colex order.
    let mut out: Vec<KSet> = Vec::with_capacity(spec.m as usize);
    let mut tail = KSet::EMPTY;
    for (i, a) in rep.levels() {
        let a = u32::try_from(a)
            .ok()
            .filter(|&a| a <= spec.n)
            .ok_or(Error::SegmentTooLong { m: spec.m, available: spec.available().unwrap_or(0) })?;
        let block = spec.block(a, i)?;
        out.extend(block.iter().map(|b| b.union(tail)));
        if a < spec.n {
            tail = tail.insert(a + 1);
        }
    }
    if out.len() as u128 != spec.m || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{spec}: decomposition produced {} sets out of order", out.len())));
    }
    Ok(Family::from_raw(spec.n, spec.k, out))
}

/// `|∂_ℓ L_m|`, from the constructed segment.
pub fn segment_shadow_size(spec: &SegmentSpec, ell: u32) -> Result<u128> {
    if ell < 1 || ell >= spec.k {
        return Err(Error::Range(format!("shadow level {ell} outside 1..{}", spec.k)));
    }
    let seg = initial_segment(spec, SegmentMethod::Filter)?;
    Ok(ell_shadow(&seg, ell)?.len() as u128)
}

/// `|∂_ℓ {A_1, ..., A_m}|` for every prefix length `m = 0..=len`.
pub fn prefix_shadow_profile(members: &[KSet], ell: u32) -> Vec<u64> {
    let mut seen: HashSet<KSet> = HashSet::new();
    let mut out = Vec::with_capacity(members.len() + 1);
    out.push(0);
    for a in members {
        let r = a.len().saturating_sub(ell);
        for b in a.subsets_of_size(r) {
            seen.insert(b);
        }
        out.push(seen.len() as u64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{shadow_size_em_segment, shadow_size_hm_segment};
    use crate::setfamily::is_shifted;

    fn ks(e: &[u32]) -> KSet {
        KSet::from_elems(e.iter().copied()).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(colex_cmp(ks(&[1, 3, 4]), ks(&[2, 3, 4])).unwrap(), Ordering::Less);
        assert_eq!(colex_cmp(ks(&[1, 2, 5]), ks(&[3, 4, 5])).unwrap(), Ordering::Less);
        assert_eq!(colex_cmp(ks(&[2, 4]), ks(&[2, 4])).unwrap(), Ordering::Equal);
        assert!(colex_cmp(ks(&[1]), ks(&[1, 2])).is_err());
        // the definition, checked over all pairs of C([6],3)
        let all: Vec<KSet> = Combinations::new(6, 3).collect();
        for &a in &all {
            for &b in &all {
                let d = a.bits() ^ b.bits();
                let want = if d == 0 {
                    Ordering::Equal
                } else if b.contains(64 - d.leading_zeros()) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                assert_eq!(colex_cmp(a, b).unwrap(), want);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(colex_rank(ks(&[1, 2, 3])), 0);
        assert_eq!(colex_rank(ks(&[2, 3, 4])), 3);
        assert_eq!(colex_unrank(1, 3).unwrap(), ks(&[1, 2, 4]));
        for (r, a) in Combinations::new(9, 4).enumerate() {
            assert_eq!(colex_rank(a), r as u128);
            assert_eq!(colex_unrank(r as u128, 4).unwrap(), a);
        }
        assert_eq!(colex_unrank(0, 0).unwrap(), KSet::EMPTY);
        assert!(colex_unrank(1, 0).is_err());
        assert!(colex_unrank(binom(64, 3).unwrap(), 3).is_err());
        assert_eq!(colex_unrank(binom(64, 3).unwrap() - 1, 3).unwrap(), ks(&[62, 63, 64]));
    }

    #[test]
    fn rank_round_trip() {
        for k in 1..=6u32 {
            let limit = binom(64, k as i64).unwrap().min(100_000);
            assert!(colex_unrank(limit.max(binom(64, k as i64).unwrap()), k).is_err());
            for r in 0..limit {
                let a = colex_unrank(r, k).unwrap();
                assert_eq!(a.len(), k);
                assert_eq!(colex_rank(a), r);
            }
        }
    }

    fn seg(kind: SegmentKind, n: u32, k: u32, m: u128) -> SegmentSpec {
        SegmentSpec::new(kind, n, k, m)
    }

    #[test]
    fn segment_examples() {
        let s = seg(SegmentKind::Em { s: 1, t: 1 }, 5, 3, 3);
        let f = initial_segment(&s, SegmentMethod::Both).unwrap();
        assert_eq!(f.members(), &[ks(&[1, 2, 3]), ks(&[1, 2, 4]), ks(&[1, 3, 4])]);
        let f = initial_segment(&seg(SegmentKind::Full, 6, 3, 4), SegmentMethod::Both).unwrap();
        assert_eq!(f.members(), &[ks(&[1, 2, 3]), ks(&[1, 2, 4]), ks(&[1, 3, 4]), ks(&[2, 3, 4])]);
        let whole = seg(SegmentKind::Em { s: 3, t: 2 }, 10, 3, 22);
        assert_eq!(
            initial_segment(&whole, SegmentMethod::Decompose).unwrap(),
            FamilySpec::Em { n: 10, k: 3, s: 3, t: 2 }.build().unwrap()
        );
        assert!(matches!(
            initial_segment(&seg(SegmentKind::Em { s: 3, t: 2 }, 10, 3, 23), SegmentMethod::Filter),
            Err(Error::SegmentTooLong { m: 23, available: 22 })
        ));
        assert!(initial_segment(&seg(SegmentKind::Full, 6, 3, 0), SegmentMethod::Both).unwrap().is_empty());
    }

    #[test]
    fn segment_shadow_examples() {
        let s = seg(SegmentKind::Em { s: 1, t: 1 }, 10, 3, 22);
        assert_eq!(segment_shadow_size(&s, 1).unwrap(), 30);
        for n in 3..=9 {
            let m = binom(n as i64, 3).unwrap();
            assert_eq!(segment_shadow_size(&seg(SegmentKind::Full, n, 3, m), 1).unwrap(), binom(n as i64, 2).unwrap());
        }
        let s = seg(SegmentKind::Em { s: 3, t: 2 }, 10, 3, 22);
        assert_eq!(segment_shadow_size(&s, 1).unwrap(), shadow_size_em_segment(22, 3, 3, 2, 1).unwrap());
        assert!(segment_shadow_size(&s, 3).is_err());
    }

    #[test]
    fn filter_matches_decompose_em() {
        for n in 1..=10u32 {
            for k in 1..=n.min(5) {
                for s in 0..=4u32 {
                    for t in 0..=k.min(s) {
                        let kind = SegmentKind::Em { s, t };
                        let full = seg(kind, n, k, seg(kind, n, k, 0).available().unwrap());
                        let all = initial_segment(&full, SegmentMethod::Filter).unwrap();
                        for m in 0..=all.len() {
                            let d = initial_segment(&seg(kind, n, k, m as u128), SegmentMethod::Decompose)
                                .unwrap_or_else(|e| panic!("n={n} k={k} s={s} t={t} m={m}: {e}"));
                            assert_eq!(d.members(), &all.members()[..m], "n={n} k={k} s={s} t={t} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn filter_matches_decompose_hm() {
        for n in 1..=10u32 {
            for k in 1..=n.min(5) {
                for s in 1..=4u32 {
                    for t in 0..=4u32 {
                        if n < s + t {
                            continue;
                        }
                        let kind = SegmentKind::Hm { s, t };
                        let total = seg(kind, n, k, 0).available().unwrap();
                        let all = initial_segment(&seg(kind, n, k, total), SegmentMethod::Filter).unwrap();
                        assert_eq!(all.len() as u128, total);
                        for m in 0..=all.len() {
                            let d = initial_segment(&seg(kind, n, k, m as u128), SegmentMethod::Decompose)
                                .unwrap_or_else(|e| panic!("n={n} k={k} s={s} t={t} m={m}: {e}"));
                            assert_eq!(d.members(), &all.members()[..m]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_prefixes_are_shifted_and_grow_at_the_top() {
        for n in 2..=8u32 {
            for k in 1..=n.min(4) {
                let all = Family::complete(n, k).unwrap();
                for m in 1..=all.len() {
                    let l = initial_segment(&seg(SegmentKind::Full, n, k, m as u128), SegmentMethod::Filter).unwrap();
                    assert!(is_shifted(&l));
                    assert_eq!(l.members().last(), all.members().get(m - 1));
                    assert!(l.members().iter().all(|&a| a <= l.members()[m - 1]));
                }
            }
        }
    }

    #[test]
    fn profile_matches_formulas() {
        let all = FamilySpec::HmSt { n: 9, k: 3, s: 2, t: 2 }.build().unwrap();
        let prof = prefix_shadow_profile(all.members(), 1);
        for m in 1..=all.len() {
            assert_eq!(prof[m] as u128, shadow_size_hm_segment(m as u128, 3, 2, 2).unwrap());
        }
        let all = FamilySpec::Em { n: 9, k: 4, s: 3, t: 2 }.build().unwrap();
        for ell in 1..4 {
            let prof = prefix_shadow_profile(all.members(), ell);
            for m in 1..=all.len() {
                assert_eq!(prof[m] as u128, shadow_size_em_segment(m as u128, 4, 3, 2, ell).unwrap());
            }
        }
    }

    #[test]
    fn segment_strings() {
        let s: SegmentSpec = "segment:em:n=10,k=3,s=1,t=1,m=22".parse().unwrap();
        assert_eq!(s, seg(SegmentKind::Em { s: 1, t: 1 }, 10, 3, 22));
        assert_eq!(s.to_string(), "em:n=10,k=3,s=1,t=1,m=22");
        assert_eq!("full:n=6,k=3,m=4".parse::<SegmentSpec>().unwrap().to_string(), "full:n=6,k=3,m=4");
        assert!("em:n=10,k=3,s=1,m=2".parse::<SegmentSpec>().is_err());
    }
}
