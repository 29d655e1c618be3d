//! Named extremal families and the size thresholds of the shadow theorems.
//!
//! Every family is described by a [`FamilySpec`] and realised through a
//! membership predicate, so sizes can be counted without materialising the
//! family. The canonical string form is `name:key=value,...`, for example
//! `em:n=10,k=3,s=3,t=2` or `pf:n=13,k=3,s=2`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::combinatorics::{binom, em_size, hm_size};
use crate::error::{Error, Result};
use crate::setfamily::{Combinations, Family, KSet, MAX_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilySpec {
    /// All `k`-subsets of `[n]`.
    Full { n: u32, k: u32 },
    /// Sets containing 1.
    Ekr { n: u32, k: u32 },
    /// Sets meeting `[s]` in at least `t` elements.
    Em { n: u32, k: u32, s: u32, t: u32 },
    /// Sets containing `[t]` and meeting `[t+1, k+1]`, plus `[k+1] \ {i}` for `i` in `[t]`.
    Ak { n: u32, k: u32, t: u32 },
    /// Sets meeting `[s-1]`, or containing `s` and meeting `[s+1, s+t]`.
    HmSt { n: u32, k: u32, s: u32, t: u32 },
    /// Sets through 1 meeting `[2,k]` or containing `[k+1,k+t]`, plus
    /// `{2,...,k,k+i}` for `i` in `[t]`.
    HmT { n: u32, k: u32, t: u32 },
    /// `H_i^k(n)` for `0 <= i <= 5`: the `k`-sets containing a member of the
    /// 3-uniform `H_i^3(n)`.
    H { i: u8, n: u32, k: u32 },
    /// `s` disjoint `k`-sets `T_1..T_s` and the sets through some `v_i`
    /// (`i < s`) meeting a later `T_j`. Labelled with `v_0 = 1`,
    /// `T_i = [(i-1)k+2, ik+1]` and `v_i = min T_i`.
    PfS { n: u32, k: u32, s: u32 },
    /// The `k`-sets containing a member of `G` where, with `Y = [2,k+1]` and
    /// `Z = [k+2,2k]`, `G` holds every `{1,y,z}` and `Y`, `{1,k,k+1}`,
    /// `Z ∪ {k}`, `Z ∪ {k+1}`.
    Pf { n: u32, k: u32 },
}

impl FamilySpec {
    pub fn n(&self) -> u32 {
        match *self {
            FamilySpec::Full { n, .. }
            | FamilySpec::Ekr { n, .. }
            | FamilySpec::Em { n, .. }
            | FamilySpec::Ak { n, .. }
            | FamilySpec::HmSt { n, .. }
            | FamilySpec::HmT { n, .. }
            | FamilySpec::H { n, .. }
            | FamilySpec::PfS { n, .. }
            | FamilySpec::Pf { n, .. } => n,
        }
    }

    pub fn k(&self) -> u32 {
        match *self {
            FamilySpec::Full { k, .. }
            | FamilySpec::Ekr { k, .. }
            | FamilySpec::Em { k, .. }
            | FamilySpec::Ak { k, .. }
            | FamilySpec::HmSt { k, .. }
            | FamilySpec::HmT { k, .. }
            | FamilySpec::H { k, .. }
            | FamilySpec::PfS { k, .. }
            | FamilySpec::Pf { k, .. } => k,
        }
    }

    /// Checks the parameter domain of the defining display.
    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n(), self.k());
        let fail = |why: &str| Err(Error::Domain(format!("{self}: {why}")));
        if n > MAX_N {
            return fail("universe exceeds 64");
        }
        if k > n {
            return fail("needs k <= n");
        }
        match *self {
            FamilySpec::Full { .. } | FamilySpec::Em { .. } => Ok(()),
            FamilySpec::Ekr { .. } if k == 0 => fail("needs k >= 1"),
            FamilySpec::Ekr { .. } => Ok(()),
            FamilySpec::Ak { t, .. } if !(1 <= t && t < k && n > k) => fail("needs 1 <= t < k and n >= k+1"),
            FamilySpec::Ak { .. } => Ok(()),
            FamilySpec::HmSt { s, t, .. } if k == 0 || n < s + t => fail("needs k >= 1 and n >= s+t"),
            FamilySpec::HmSt { .. } => Ok(()),
            FamilySpec::HmT { t, .. } if !(1 <= t && t < k && n >= k + t) => fail("needs 1 <= t <= k-1 and n >= k+t"),
            FamilySpec::HmT { .. } => Ok(()),
            FamilySpec::H { i, .. } if i > 5 => fail("index must be 0..=5"),
            FamilySpec::H { .. } if k < 3 => fail("needs k >= 3"),
            FamilySpec::H { i: 1, .. } if n < 4 => fail("needs n >= 4"),
            FamilySpec::H { i, .. } if i >= 2 && n < 6 => fail("needs n >= 6"),
            FamilySpec::H { .. } => Ok(()),
            FamilySpec::PfS { s, .. } if k < 3 || s < 1 => fail("needs k >= 3 and s >= 1"),
            FamilySpec::PfS { s, .. } if (n as u64) < s as u64 * k as u64 + 1 => fail("needs n >= sk+1"),
            FamilySpec::PfS { .. } => Ok(()),
            FamilySpec::Pf { .. } if k < 3 || n < 2 * k => fail("needs k >= 3 and n >= 2k"),
            FamilySpec::Pf { .. } => Ok(()),
        }
    }

    /// Membership test for a `k`-subset of `[n]`.
    pub fn predicate(&self) -> Result<Predicate> {
        self.validate()?;
        let k = self.k();
        let p = match *self {
            FamilySpec::Full { .. } => Predicate::All,
            FamilySpec::Ekr { .. } => Predicate::Em { s: KSet::prefix(1), t: 1 },
            FamilySpec::Em { n, s, t, .. } => {
                if t > s.min(k) {
                    Predicate::Nothing
                } else if n <= s {
                    Predicate::All
                } else {
                    Predicate::Em { s: KSet::prefix(s), t }
                }
            }
            FamilySpec::Ak { t, .. } => {
                let top = KSet::prefix(k + 1);
                Predicate::Rule {
                    extra: (1..=t).map(|i| top.remove(i)).collect(),
                    core: vec![(KSet::prefix(t), KSet::interval(t + 1, k + 1))],
                }
            }
            FamilySpec::HmSt { s, t, .. } => hm_st_rule(s, t),
            FamilySpec::HmT { t, .. } => {
                let one = KSet::prefix(1);
                let mid = KSet::interval(2, k);
                Predicate::Rule {
                    extra: (1..=t).map(|i| mid.insert(k + i)).collect(),
                    core: vec![(one, mid), (one.union(KSet::interval(k + 1, k + t)), KSet::EMPTY)],
                }
            }
            FamilySpec::H { i, n, .. } => Predicate::UpClosure(h3_members(i, n)),
            FamilySpec::PfS { s, .. } => {
                let block = |i: u32| KSet::interval((i - 1) * k + 2, i * k + 1);
                let v = |i: u32| if i == 0 { 1 } else { (i - 1) * k + 2 };
                let core = (0..s)
                    .map(|i| {
                        let later = (i + 1..=s).fold(KSet::EMPTY, |u, j| u.union(block(j)));
                        (KSet::prefix(0).insert(v(i)), later)
                    })
                    .collect();
                Predicate::Rule { extra: (1..=s).map(block).collect(), core }
            }
            FamilySpec::Pf { .. } => {
                let y = KSet::interval(2, k + 1);
                let z = KSet::interval(k + 2, 2 * k);
                let mut g = Vec::new();
                for a in y.elems() {
                    for b in z.elems() {
                        g.push(KSet::prefix(1).insert(a).insert(b));
                    }
                }
                g.push(y);
                g.push(KSet::from_elems([1, k, k + 1])?);
                g.push(z.insert(k));
                g.push(z.insert(k + 1));
                Predicate::UpClosure(g)
            }
        };
        Ok(p)
    }

    pub fn contains(&self, a: KSet) -> Result<bool> {
        let ground = KSet::prefix(self.n());
        Ok(a.len() == self.k() && a.is_subset(ground) && self.predicate()?.test(a))
    }

    /// The family, by literal translation of its definition.
    pub fn build(&self) -> Result<Family> {
        let p = self.predicate()?;
        Family::filtered(self.n(), self.k(), |a| p.test(a))
    }

    /// Number of members by enumeration, without materialising the family.
    pub fn count(&self) -> Result<u128> {
        let p = self.predicate()?;
        Ok(Combinations::new(self.n(), self.k()).filter(|&a| p.test(a)).count() as u128)
    }

    /// The closed-form size when one is known, for the parameters where it holds.
    pub fn closed_form_size(&self) -> Option<Result<u128>> {
        self.validate().ok()?;
        let (n, k) = (self.n() as i64, self.k() as i64);
        let c = |a: i64, b: i64| binom(a, b);
        let form = match *self {
            FamilySpec::Full { .. } => c(n, k),
            FamilySpec::Ekr { .. } => c(n - 1, k - 1),
            FamilySpec::Em { s, t, .. } if t > s.min(self.k()) => Ok(0),
            FamilySpec::Em { s, .. } if n <= s as i64 => c(n, k),
            FamilySpec::Em { s, t, .. } => em_size(n as u64, k as u32, s, t),
            FamilySpec::HmSt { s, t, .. } => hm_size(n as u64, k as u32, s, t),
            FamilySpec::HmT { t: 2, .. } => (|| {
                let v = c(n - 1, k - 1)? as i128 - c(n - k, k - 1)? as i128 + c(n - k - 2, k - 3)? as i128 + 2;
                u128::try_from(v).map_err(|_| Error::Domain("negative size".into()))
            })(),
            FamilySpec::H { i: 0, .. } => (|| Ok(3 * c(n - 3, k - 2)? + c(n - 3, k - 3)?))(),
            FamilySpec::H { i: 1, .. } => (|| Ok(3 * c(n - 4, k - 2)? + 4 * c(n - 4, k - 3)? + c(n - 4, k - 4)?))(),
            _ => return None,
        };
        Some(form)
    }

    /// Closed form where available, otherwise the enumerated count.
    pub fn size(&self) -> Result<u128> {
        match self.closed_form_size() {
            Some(v) => v,
            None => self.count(),
        }
    }
}

/// Membership rule of a named family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    All,
    Nothing,
    /// `|A ∩ s| >= t`.
    Em {
        s: KSet,
        t: u32,
    },
    /// `A` is one of `extra`, or for some `(must, meet)`: `must ⊆ A` and
    /// (`meet` is empty or `A` meets `meet`).
    Rule {
        extra: Vec<KSet>,
        core: Vec<(KSet, KSet)>,
    },
    /// `A` contains one of the listed sets.
    UpClosure(Vec<KSet>),
}

impl Predicate {
    pub fn test(&self, a: KSet) -> bool {
        match self {
            Predicate::All => true,
            Predicate::Nothing => false,
            Predicate::Em { s, t } => a.intersection(*s).len() >= *t,
            Predicate::Rule { extra, core } => {
                extra.contains(&a)
                    || core.iter().any(|&(must, meet)| must.is_subset(a) && (meet.is_empty() || !a.is_disjoint(meet)))
            }
            Predicate::UpClosure(g) => g.iter().any(|b| b.is_subset(a)),
        }
    }
}

fn hm_st_rule(s: u32, t: u32) -> Predicate {
    let mut core = Vec::new();
    if s >= 2 {
        core.push((KSet::EMPTY, KSet::prefix(s - 1)));
    }
    if s >= 1 && t >= 1 {
        core.push((KSet::prefix(0).insert(s), KSet::interval(s + 1, s + t)));
    }
    if core.is_empty() {
        Predicate::Nothing
    } else {
        Predicate::Rule { extra: Vec::new(), core }
    }
}

/// Members of the 3-uniform `H_i^3(n)`.
fn h3_members(i: u8, n: u32) -> Vec<KSet> {
    let set = |e: [u32; 3]| KSet::from_elems(e).expect("fixed triple");
    let listed = |v: &[[u32; 3]]| -> Vec<KSet> { v.iter().map(|&e| set(e)).collect() };
    let mut out: Vec<KSet> = match i {
        0 => Combinations::new(n, 3).filter(|a| a.intersection(KSet::prefix(3)).len() >= 2).collect(),
        1 => Combinations::new(n, 3)
            .filter(|a| a.contains(1) && !a.is_disjoint(KSet::interval(2, 4)))
            .chain([set([2, 3, 4])])
            .collect(),
        2 => Combinations::new(n, 3)
            .filter(|a| a.contains(1) && !a.is_disjoint(KSet::interval(2, 3)))
            .chain(listed(&[[2, 3, 4], [2, 3, 5], [1, 4, 5]]))
            .collect(),
        3..=5 => {
            let extra: &[[u32; 3]] = match i {
                3 => &[[1, 3, 4], [1, 3, 5], [1, 4, 5], [2, 3, 4], [2, 3, 5], [2, 4, 5]],
                4 => &[[1, 3, 4], [1, 5, 6], [2, 3, 5], [2, 3, 6], [2, 4, 5], [2, 4, 6]],
                _ => &[[1, 3, 4], [1, 5, 6], [1, 3, 6], [2, 3, 5], [2, 3, 6], [2, 4, 6]],
            };
            Combinations::new(n, 3).filter(|a| KSet::prefix(2).is_subset(*a)).chain(listed(extra)).collect()
        }
        _ => unreachable!("validated index"),
    };
    out.sort_unstable();
    out.dedup();
    out
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Full { n, k } => write!(f, "full:n={n},k={k}"),
            FamilySpec::Ekr { n, k } => write!(f, "ekr:n={n},k={k}"),
            FamilySpec::Em { n, k, s, t } => write!(f, "em:n={n},k={k},s={s},t={t}"),
            FamilySpec::Ak { n, k, t } => write!(f, "akt:n={n},k={k},t={t}"),
            FamilySpec::HmSt { n, k, s, t } => write!(f, "hm:n={n},k={k},s={s},t={t}"),
            FamilySpec::HmT { n, k, t } => write!(f, "hm:n={n},k={k},t={t}"),
            FamilySpec::H { i, n, k } => write!(f, "h{i}:n={n},k={k}"),
            FamilySpec::PfS { n, k, s } => write!(f, "pf:n={n},k={k},s={s}"),
            FamilySpec::Pf { n, k } => write!(f, "pf:n={n},k={k}"),
        }
    }
}

/// `key=value` pairs of a spec string, rejecting unknown or repeated keys.
pub(crate) struct Params<'a> {
    pairs: Vec<(&'a str, u128)>,
    src: &'a str,
}

impl<'a> Params<'a> {
    pub(crate) fn parse(src: &'a str, body: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut pairs: Vec<(&str, u128)> = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) =
                tok.split_once('=').ok_or_else(|| Error::Domain(format!("{src}: expected key=value, got {tok:?}")))?;
            if !allowed.contains(&key) {
                return Err(Error::Domain(format!("{src}: unknown parameter {key:?}")));
            }
            if pairs.iter().any(|(k, _)| *k == key) {
                return Err(Error::Domain(format!("{src}: parameter {key:?} repeated")));
            }
            let val = val.parse().map_err(|_| Error::Domain(format!("{src}: bad value in {tok:?}")))?;
            pairs.push((key, val));
        }
        Ok(Params { pairs, src })
    }

    pub(crate) fn opt(&self, key: &str) -> Result<Option<u32>> {
        self.pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|&(_, v)| u32::try_from(v).map_err(|_| Error::Domain(format!("{}: {key} too large", self.src))))
            .transpose()
    }

    pub(crate) fn get(&self, key: &str) -> Result<u32> {
        self.opt(key)?.ok_or_else(|| Error::Domain(format!("{}: missing parameter {key:?}", self.src)))
    }

    pub(crate) fn get_wide(&self, key: &str) -> Result<u128> {
        self.pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::Domain(format!("{}: missing parameter {key:?}", self.src)))
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let (name, body) =
            src.trim().split_once(':').ok_or_else(|| Error::Domain(format!("{src}: expected name:key=value,...")))?;
        let name = name.to_ascii_lowercase();
        let spec = match name.as_str() {
            "full" | "ekr" => {
                let p = Params::parse(src, body, &["n", "k"])?;
                let (n, k) = (p.get("n")?, p.get("k")?);
                if name == "full" {
                    FamilySpec::Full { n, k }
                } else {
                    FamilySpec::Ekr { n, k }
                }
            }
            "em" => {
                let p = Params::parse(src, body, &["n", "k", "s", "t"])?;
                FamilySpec::Em { n: p.get("n")?, k: p.get("k")?, s: p.get("s")?, t: p.get("t")? }
            }
            "ak" | "akt" => {
                let p = Params::parse(src, body, &["n", "k", "t"])?;
                FamilySpec::Ak { n: p.get("n")?, k: p.get("k")?, t: p.get("t")? }
            }
            "hm" => {
                let p = Params::parse(src, body, &["n", "k", "s", "t"])?;
                let (n, k, t) = (p.get("n")?, p.get("k")?, p.get("t")?);
                match p.opt("s")? {
                    Some(s) => FamilySpec::HmSt { n, k, s, t },
                    None => FamilySpec::HmT { n, k, t },
                }
            }
            "pf" => {
                let p = Params::parse(src, body, &["n", "k", "s"])?;
                let (n, k) = (p.get("n")?, p.get("k")?);
                match p.opt("s")? {
                    Some(s) => FamilySpec::PfS { n, k, s },
                    None => FamilySpec::Pf { n, k },
                }
            }
            h if h.len() == 2 && h.starts_with('h') && h.as_bytes()[1].is_ascii_digit() => {
                let p = Params::parse(src, body, &["n", "k"])?;
                FamilySpec::H { i: h.as_bytes()[1] - b'0', n: p.get("n")?, k: p.get("k")? }
            }
            _ => return Err(Error::Domain(format!("{src}: unknown family {name:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    /// Intersecting families, `m(n,k)`.
    T13,
    /// `t`-intersecting families, `m(n,k,t)`.
    T16,
    /// Families with matching number at most `s`, `m(n,k,s)`.
    T111,
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('.', "").as_str() {
            "t13" => Ok(Theorem::T13),
            "t16" => Ok(Theorem::T16),
            "t111" => Ok(Theorem::T111),
            _ => Err(Error::Domain(format!("unknown theorem id {s:?}"))),
        }
    }
}

/// Size above which a shadow bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Threshold {
    /// Exact threshold, or `constant * C(n,k-2)` for the asymptotic one.
    pub value: u128,
    /// Leading constant `c(k,s)` of the asymptotic threshold.
    pub constant: Option<u128>,
    /// The threshold carries an unspecified `o(1)` correction.
    pub asymptotic: bool,
}

/// `m(n,k)`, `m(n,k,t)` or `c(k,s) C(n,k-2)`; `param` is `t` or `s`.
pub fn threshold(thm: Theorem, n: u32, k: u32, param: Option<u32>) -> Result<Threshold> {
    let exact = |value| Threshold { value, constant: None, asymptotic: false };
    let (ni, ki) = (n as i64, k as i64);
    match thm {
        Theorem::T13 => {
            if !(k >= 3 && n > 2 * k) {
                return Err(Error::Domain(format!("m(n,k) needs n > 2k >= 6, got n={n} k={k}")));
            }
            if k == 3 {
                return Ok(exact(3 * n as u128 - 8));
            }
            let v = binom(ni - 1, ki - 1)? + binom(ni - ki - 2, ki - 3)? + 2 - binom(ni - ki, ki - 1)?;
            Ok(exact(v))
        }
        Theorem::T16 => {
            let t = param.ok_or_else(|| Error::Domain("m(n,k,t) needs t".into()))?;
            if !(t >= 1 && k >= 3 && t < k && n > (t + 1) * (k - t + 1)) {
                return Err(Error::Domain(format!(
                    "m(n,k,t) needs t >= 1, k >= 3, t < k and n > (t+1)(k-t+1), got n={n} k={k} t={t}"
                )));
            }
            let em = FamilySpec::Em { n, k, s: t + 2, t: t + 1 }.size()?;
            if 2 * t < k - 1 {
                Ok(exact(em.max(FamilySpec::Ak { n, k, t }.size()?)))
            } else {
                Ok(exact(em))
            }
        }
        Theorem::T111 => {
            let s = param.ok_or_else(|| Error::Domain("m(n,k,s) needs s".into()))?;
            if !(k >= 3 && s >= 1) {
                return Err(Error::Domain(format!("m(n,k,s) needs k >= 3 and s >= 1, got k={k} s={s}")));
            }
            let c = if s == 1 {
                3
            } else if k == 3 {
                binom(2 * s as i64 + 1, 2)?
            } else {
                k as u128 * binom(s as i64 + 1, 2)?
            };
            let value = c.checked_mul(binom(ni, ki - 2)?).ok_or_else(|| Error::Overflow("threshold".into()))?;
            Ok(Threshold { value, constant: Some(c), asymptotic: true })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamily::matching_number;

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(spec("ekr:n=5,k=3").build().unwrap().len(), 6);
        let ak = spec("akt:n=10,k=3,t=1").build().unwrap();
        assert_eq!(ak.len(), 22);
        assert!(ak.contains(KSet::from_elems([2, 3, 4]).unwrap()));
        assert_eq!(ak.iter().filter(|a| a.contains(1)).count(), 21);
        assert_eq!(spec("h0:n=6,k=3").build().unwrap().len(), 10);
        assert_eq!(spec("hm:n=10,k=4,t=2").size().unwrap(), 70);
        assert_eq!(spec("hm:n=10,k=4,t=2").count().unwrap(), 70);
        assert_eq!(spec("h0:n=8,k=4").count().unwrap(), 35);
        assert_eq!(spec("pf:n=8,k=3").count().unwrap(), 10);
        assert_eq!(spec("hm:n=6,k=3,s=1,t=1").build().unwrap().len(), 4);
        assert_eq!(spec("hm:n=10,k=3,s=1,t=3").build().unwrap().len(), 21);
        for n in 3..=12 {
            for s in 0..=6 {
                let em1 = FamilySpec::Em { n, k: 3, s, t: 1 }.count().unwrap();
                let want = binom(n as i64, 3).unwrap() - binom(n as i64 - s as i64, 3).unwrap();
                assert_eq!(em1, want);
            }
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "em:n=10,k=3,s=3,t=2",
            "akt:n=10,k=3,t=1",
            "h0:n=8,k=4",
            "h5:n=9,k=3",
            "pf:n=13,k=3,s=2",
            "pf:n=8,k=4",
            "hm:n=9,k=3,s=2,t=1",
            "hm:n=9,k=4,t=2",
            "ekr:n=7,k=3",
            "full:n=6,k=3",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
        assert_eq!(spec("ak:n=10,k=3,t=1"), spec("akt:n=10,k=3,t=1"));
        for bad in [
            "em:n=10,k=3,s=3",
            "em:n=10,k=3,s=3,t=2,t=2",
            "zz:n=3,k=1",
            "em:n=10;k=3",
            "h6:n=9,k=3",
            "h2:n=5,k=3",
            "akt:n=10,k=3,t=3",
            "pf:n=6,k=3,s=2",
            "hm:n=5,k=3,t=3",
            "em:n=70,k=3,s=1,t=1",
        ] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn em_conventions() {
        assert_eq!(FamilySpec::Em { n: 8, k: 3, s: 2, t: 3 }.count().unwrap(), 0);
        assert_eq!(FamilySpec::Em { n: 5, k: 3, s: 6, t: 2 }.count().unwrap(), 10);
        assert_eq!(FamilySpec::Em { n: 8, k: 3, s: 2, t: 3 }.size().unwrap(), 0);
        assert_eq!(spec("ekr:n=9,k=4").build().unwrap(), spec("em:n=9,k=4,s=1,t=1").build().unwrap());
    }

    #[test]
    fn closed_forms_match_counts() {
        for n in 1..=12u32 {
            for k in 1..=n.min(5) {
                let mut specs = vec![FamilySpec::Full { n, k }, FamilySpec::Ekr { n, k }];
                for s in 0..=5 {
                    for t in 0..=5 {
                        specs.push(FamilySpec::Em { n, k, s, t });
                        specs.push(FamilySpec::HmSt { n, k, s, t });
                    }
                }
                for t in 1..k {
                    specs.push(FamilySpec::HmT { n, k, t });
                }
                for i in 0..=5 {
                    specs.push(FamilySpec::H { i, n, k });
                }
                for sp in specs.into_iter().filter(|s| s.validate().is_ok()) {
                    if let Some(form) = sp.closed_form_size() {
                        assert_eq!(form.unwrap(), sp.count().unwrap(), "{sp}");
                    }
                }
            }
        }
    }

    #[test]
    fn h_bounds() {
        for n in 6..=12u32 {
            for k in 3..=n.min(6) {
                let h0 = FamilySpec::H { i: 0, n, k }.count().unwrap() as i128;
                let h1 = FamilySpec::H { i: 1, n, k }.count().unwrap() as i128;
                let c = |a: u32, b: u32| binom(a as i64, b as i64).unwrap() as i128;
                let cap = 3 * c(n, k - 2) - 2 * c(n, k - 3);
                assert!(h0 < cap && h1 < cap, "n={n} k={k}");
                for i in 2..=5 {
                    assert!(FamilySpec::H { i, n, k }.count().unwrap() as i128 <= 2 * c(n, k - 2));
                }
            }
        }
    }

    #[test]
    fn intersecting_properties() {
        for n in 4..=12u32 {
            for k in 2..=n.min(5) {
                for t in 1..k {
                    let em = FamilySpec::Em { n, k, s: t + 2, t: t + 1 }.build().unwrap();
                    assert!(em.is_t_intersecting(t));
                    if n > k {
                        let ak = FamilySpec::Ak { n, k, t }.build().unwrap();
                        assert!(ak.is_t_intersecting(t), "AK({n},{k},{t})");
                    }
                }
            }
        }
        for n in 3..=12u32 {
            for s in 1..=3 {
                let f = FamilySpec::Em { n, k: 3, s, t: 1 }.build().unwrap();
                let nu = matching_number(&f) as u32;
                assert!(nu <= s);
                assert_eq!(nu == s, n >= 3 * s, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn pf_structure() {
        let f = spec("pf:n=13,k=3,s=2").build().unwrap();
        assert!(matching_number(&f) <= 2);
        for n in 6..=10 {
            let g = FamilySpec::Pf { n, k: 3 }.build().unwrap();
            assert_eq!(g.len(), 10);
            assert!(g.is_t_intersecting(1));
        }
        assert!(FamilySpec::Pf { n: 10, k: 4 }.build().unwrap().is_t_intersecting(1));
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(Theorem::T13, 10, 3, None).unwrap().value, 22);
        assert_eq!(threshold(Theorem::T13, 10, 4, None).unwrap().value, 70);
        assert_eq!(threshold(Theorem::T13, 10, 4, None).unwrap().value, spec("hm:n=10,k=4,t=2").count().unwrap());
        let t = threshold(Theorem::T16, 20, 5, Some(1)).unwrap();
        let ak = spec("akt:n=20,k=5,t=1").count().unwrap();
        let em = spec("em:n=20,k=5,s=3,t=2").count().unwrap();
        assert_eq!((ak, em), (2876, 2176));
        assert_eq!(t.value, ak.max(em));
        assert_eq!(threshold(Theorem::T16, 12, 4, Some(2)).unwrap().value, 33);
        assert_eq!(threshold(Theorem::T16, 14, 5, Some(2)).unwrap().value, 190);
        let a = threshold(Theorem::T111, 12, 3, Some(2)).unwrap();
        assert_eq!((a.constant, a.value, a.asymptotic), (Some(10), 120, true));
        assert_eq!(threshold(Theorem::T111, 12, 4, Some(1)).unwrap().constant, Some(3));
        assert_eq!(threshold(Theorem::T111, 12, 5, Some(2)).unwrap().constant, Some(15));
        assert!(threshold(Theorem::T13, 6, 3, None).is_err());
        assert!(threshold(Theorem::T16, 8, 4, Some(1)).is_err());
    }
}
