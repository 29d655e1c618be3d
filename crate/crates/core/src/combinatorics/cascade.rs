//! Cascade representations of integers relative to the `EM` and `HM` layers.
//!
//! A representation of `m` is a strictly decreasing sequence
//! `a_k > a_{k-1} > ... > a_h >= h >= 1` with `m = sum_i f(a_i, i)`, where
//! `f(a, i)` is the size of the restricted layer `EM(a,i,s,t)` or
//! `HM(a,i,s,t)` given by its closed form. With `s = t = 0` this is the
//! ordinary `k`-cascade of Kruskal–Katona.
//!
//! The representation is computed greedily: each `a_i` is the largest value
//! below `a_{i+1}` whose layer still fits in the remainder. The greedy
//! sequence is the lexicographically largest valid one; it is the
//! decomposition of the colex initial segment `L_m` into whole sub-layers.

use std::fmt;

use serde::Serialize;

use super::{em_formula, hm_formula, ibinom, to_unsigned};
use crate::error::{domain, Error, Result};

/// Which restricted layer a representation is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Restriction {
    /// `EM(.,i,s,t)`; `s = t = 0` is the plain binomial cascade.
    Em { s: u32, t: u32 },
    /// `HM(.,i,s,t)`.
    Hm { s: u32, t: u32 },
}

impl Restriction {
    pub const FULL: Restriction = Restriction::Em { s: 0, t: 0 };

    pub fn params(&self) -> (u32, u32) {
        match *self {
            Restriction::Em { s, t } | Restriction::Hm { s, t } => (s, t),
        }
    }

    /// Closed-form size of the layer of uniformity `i` on `[a]`.
    pub fn layer_size(&self, a: i64, i: i64) -> Result<i128> {
        match *self {
            Restriction::Em { s, t } => em_formula(a, i, s as i64, t as i64),
            Restriction::Hm { s, t } => hm_formula(a, i, s as i64, t as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CascadeRep {
    pub restriction: Restriction,
    pub k: u32,
    pub h: u32,
    /// `a_h, a_{h+1}, ..., a_k` (ascending index order).
    terms: Vec<u64>,
}

impl CascadeRep {
    pub fn new(restriction: Restriction, k: u32, h: u32, terms: Vec<u64>) -> Result<Self> {
        if h < 1 || h > k || terms.len() != (k - h + 1) as usize {
            return domain(format!(
                "representation needs 1 <= h <= k and k-h+1 terms, got h={h} k={k} with {} terms",
                terms.len()
            ));
        }
        let rep = CascadeRep { restriction, k, h, terms };
        rep.check_invariants()?;
        Ok(rep)
    }

    /// `a_i` for `h <= i <= k`.
    pub fn a(&self, i: u32) -> Option<u64> {
        if i < self.h || i > self.k {
            return None;
        }
        Some(self.terms[(i - self.h) as usize])
    }

    /// The terms `a_h, ..., a_k`.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// `(i, a_i)` pairs from the top index `k` down to `h`.
    pub fn levels(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        (self.h..=self.k).rev().map(move |i| (i, self.terms[(i - self.h) as usize]))
    }

    /// `a_k > ... > a_h >= h >= 1`.
    pub fn check_invariants(&self) -> Result<()> {
        if self.h < 1 {
            return Err(Error::NoRepresentation("h must be at least 1".into()));
        }
        if self.terms[0] < self.h as u64 {
            return Err(Error::NoRepresentation(format!("a_h = {} is below h = {}", self.terms[0], self.h)));
        }
        if self.terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NoRepresentation(format!("terms {:?} are not strictly increasing in i", self.terms)));
        }
        Ok(())
    }

    /// Sum of the layer sizes; reproduces the `m` the representation was built from.
    pub fn evaluate(&self) -> Result<u128> {
        let mut total: i128 = 0;
        for (i, a) in self.levels() {
            let v = self.restriction.layer_size(a as i64, i as i64)?;
            total = total.checked_add(v).ok_or_else(|| Error::Overflow("cascade sum".into()))?;
        }
        to_unsigned(total, "cascade")
    }

    /// `sum_i C(a_i, i-l) - sum_{j=0}^{t-1-l} C(s,j) sum_i C(a_i-s, i-l-j)`,
    /// the size of the `l`-shadow of the colex segment this representation
    /// describes in `EM(.,k,s,t)`.
    pub fn em_shadow_size(&self, ell: u32) -> Result<u128> {
        let Restriction::Em { s, t } = self.restriction else {
            return domain("em_shadow_size needs an EM representation");
        };
        let (s, t, l) = (s as i64, t as i64, ell as i64);
        let mut total: i128 = 0;
        for (i, a) in self.levels() {
            let (i, a) = (i as i64, a as i64);
            total = checked(total, ibinom(a, i - l)?, 1)?;
            for j in 0..(t - l).max(0) {
                let sj = ibinom(s, j)?;
                total = checked(total, sj, -ibinom(a - s, i - l - j)?)?;
            }
        }
        to_unsigned(total, "EM segment shadow")
    }

    /// `sum_i C(a_i, i-1)`.
    pub fn hm_shadow_size(&self) -> Result<u128> {
        let mut total: i128 = 0;
        for (i, a) in self.levels() {
            total = checked(total, ibinom(a as i64, i as i64 - 1)?, 1)?;
        }
        to_unsigned(total, "HM segment shadow")
    }
}

fn checked(acc: i128, x: i128, y: i128) -> Result<i128> {
    x.checked_mul(y).and_then(|p| acc.checked_add(p)).ok_or_else(|| Error::Overflow("shadow formula".into()))
}

impl fmt::Display for CascadeRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.terms.iter().map(u64::to_string).collect();
        write!(f, "h={} a=[{}]", self.h, list.join(","))
    }
}

/// Largest top index probed.
const TOP_CAP: u64 = 1 << 40;

/// Layer size with overflow read as "larger than anything we compare against".
fn size_or_inf(r: &Restriction, a: u64, i: u32) -> Result<i128> {
    match r.layer_size(a as i64, i as i64) {
        Ok(v) => Ok(v),
        Err(Error::Overflow(_)) => Ok(i128::MAX),
        Err(e) => Err(e),
    }
}

/// Largest `a` in `[lo, hi]` with `f(a) <= target`, assuming `f` nondecreasing
/// on the interval and `f(lo) <= target`.
fn largest_fit(r: &Restriction, i: u32, lo: u64, hi: u64, target: i128) -> Result<u64> {
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if size_or_inf(r, mid, i)? <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

fn greedy(m: u128, k: u32, r: Restriction) -> Result<CascadeRep> {
    if m == 0 || k == 0 {
        return domain(format!("cascade needs m >= 1 and k >= 1, got m={m} k={k}"));
    }
    let target = i128::try_from(m).map_err(|_| Error::Overflow(format!("m = {m}")))?;
    let mut rem = target;
    let mut terms_desc: Vec<u64> = Vec::new();

    // top level: the only place where the layer may be bounded in a
    let top = match r {
        Restriction::Hm { s, .. } if k == 1 => {
            // HM(.,1,s,t) is {{x} : x < s}; its closed form is not monotone in a
            if m >= s as u128 {
                return Err(Error::NoRepresentation(format!(
                    "HM layers of uniformity 1 hold at most {} sets",
                    s.saturating_sub(1)
                )));
            }
            m as u64
        }
        Restriction::Hm { s: 0, .. } | Restriction::Hm { s: 1, t: 0 } => {
            return Err(Error::NoRepresentation(format!("{r:?} layers are empty")));
        }
        _ => {
            let (s, t) = r.params();
            // past a0 every binomial argument is nonnegative and the layer size
            // is a polynomial of degree <= k in a; constant on k+2 points means bounded
            let a0 = (s + t + k + 2) as u64;
            let probe: Vec<i128> = (a0..=a0 + k as u64 + 1).map(|a| size_or_inf(&r, a, k)).collect::<Result<_>>()?;
            if probe.iter().all(|&v| v == probe[0] && v != i128::MAX) {
                let total = probe[0];
                if target > total {
                    return Err(Error::NoRepresentation(format!(
                        "m = {m} exceeds the total size {total} of every {r:?} layer"
                    )));
                }
                // on the plateau take the smallest a reaching the value
                let best = largest_fit(&r, k, (k - 1) as u64, a0, target)?;
                let v = r.layer_size(best as i64, k as i64)?;
                let (mut lo, mut hi) = ((k - 1) as u64, best);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if r.layer_size(mid as i64, k as i64)? >= v {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                lo
            } else {
                // gallop to a value whose layer is too large, then bisect
                let mut lo = (k - 1) as u64;
                let mut hi = k as u64;
                while hi < TOP_CAP && size_or_inf(&r, hi, k)? <= target {
                    lo = hi;
                    hi = (hi * 2).min(TOP_CAP);
                }
                let a = largest_fit(&r, k, lo, hi, target)?;
                if matches!(r.layer_size(a as i64 + 1, k as i64), Err(Error::Overflow(_))) {
                    return Err(Error::Overflow(format!("layer sizes near m = {m} at uniformity {k}")));
                }
                a
            }
        }
    };
    if top < k as u64 {
        return Err(Error::NoRepresentation(format!(
            "m = {m} is smaller than the first {r:?} layer of uniformity {k}"
        )));
    }
    rem -= r.layer_size(top as i64, k as i64)?;
    terms_desc.push(top);

    let mut upper = top;
    let mut i = k;
    while rem > 0 {
        i -= 1;
        if i == 0 || upper <= i as u64 {
            return Err(Error::NoRepresentation(format!(
                "remainder {rem} left after reaching uniformity {} for m = {m} ({r:?})",
                i + 1
            )));
        }
        let a = match r {
            Restriction::Hm { s, t } if i == 1 => {
                // first a whose successor overshoots; the sizes are constant past s+t
                let flat = (s + t + 1) as u64;
                let mut a = 0u64;
                while a + 1 < upper && size_or_inf(&r, a + 1, 1)? <= rem {
                    a += 1;
                    if a > flat {
                        a = upper - 1;
                        break;
                    }
                }
                a
            }
            _ => largest_fit(&r, i, (i - 1) as u64, upper - 1, rem)?,
        };
        let v = r.layer_size(a as i64, i as i64)?;
        if a < i as u64 || v <= 0 {
            return Err(Error::NoRepresentation(format!(
                "no layer of uniformity {i} below {upper} fits remainder {rem} for m = {m} ({r:?})"
            )));
        }
        rem -= v;
        terms_desc.push(a);
        upper = a;
    }
    if rem < 0 {
        return Err(Error::NoRepresentation(format!("greedy overshoot for m = {m} ({r:?})")));
    }
    terms_desc.reverse();
    let rep = CascadeRep::new(r, k, i, terms_desc)?;
    debug_assert_eq!(rep.evaluate().ok(), Some(m));
    Ok(rep)
}

/// Ordinary `k`-cascade: `m = sum_{i=h}^k C(a_i, i)`.
pub fn cascade_standard(m: u128, k: u32) -> Result<CascadeRep> {
    greedy(m, k, Restriction::FULL)
}

/// Representation of `m` against the `EM(.,.,s,t)` layers.
///
/// Requires `k >= t` and `s >= t`. When the segment stays inside `[s]` the
/// lowest index `h` may fall below `t`. For `t = k` the layers are bounded
/// by `C(s,k)` and larger `m` has no representation.
pub fn cascade_generalized(m: u128, k: u32, s: u32, t: u32) -> Result<CascadeRep> {
    if !(k >= t && s >= t) {
        return domain(format!("cascade needs k >= t and s >= t, got k={k} s={s} t={t}"));
    }
    greedy(m, k, Restriction::Em { s, t })
}

/// Representation of `m` against the `HM(.,.,s,t)` layers.
pub fn cascade_hm(m: u128, k: u32, s: u32, t: u32) -> Result<CascadeRep> {
    if s == 0 {
        return Err(Error::NoRepresentation("HM(.,.,0,t) is empty".into()));
    }
    greedy(m, k, Restriction::Hm { s, t })
}

/// `|d_l L_m EM(n,k,s,t)|` from the representation of `m`.
pub fn shadow_size_em_segment(m: u128, k: u32, s: u32, t: u32, ell: u32) -> Result<u128> {
    if ell < 1 || ell >= k {
        return Err(Error::Range(format!("shadow level {ell} outside 1..{k}")));
    }
    if m == 0 {
        return Ok(0);
    }
    cascade_generalized(m, k, s, t)?.em_shadow_size(ell)
}

/// `sum_i C(a_i, i-1)` over the HM representation of `m`.
///
/// This is the closed form for the shadow of `L_m HM(n,k,s,t)`; it agrees with
/// the directly computed shadow for `s >= 2` and overestimates it for `s = 1`.
pub fn shadow_size_hm_segment(m: u128, k: u32, s: u32, t: u32) -> Result<u128> {
    if k < 2 {
        return Err(Error::Range("HM shadow needs k >= 2".into()));
    }
    if m == 0 {
        return Ok(0);
    }
    cascade_hm(m, k, s, t)?.hm_shadow_size()
}
