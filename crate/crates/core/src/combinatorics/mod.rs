//! Exact binomial arithmetic and the closed-form sizes of the restricted
//! layers `EM(n,k,s,t)` and `HM(n,k,s,t)`.
//!
//! Binomials follow the boundary convention used throughout the crate:
//! `C(a,b) = 0` whenever `b < 0` or `a < b`, and `C(a,0) = 1` for `a >= 0`.
//! In particular `C(-2,0) = 0`. Every value is an exact `u128`; anything that
//! does not fit is reported as [`Error::Overflow`].

mod cascade;

pub use cascade::{
    cascade_generalized, cascade_hm, cascade_standard, shadow_size_em_segment, shadow_size_hm_segment, CascadeRep,
    Restriction,
};

use crate::error::{domain, Error, Result};

/// Exact binomial coefficient under the crate's boundary convention.
pub fn binom(a: i64, b: i64) -> Result<u128> {
    if b < 0 || a < b {
        return Ok(0);
    }
    // here a >= b >= 0
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut r: u128 = 1;
    for i in 0..b {
        // r = C(a, i); multiply by (a - i) / (i + 1) without leaving the exact range
        let num = a - i;
        let den = i + 1;
        let g = gcd(r, den);
        let (r_red, den_red) = (r / g, den / g);
        debug_assert_eq!(num % den_red, 0);
        r = r_red.checked_mul(num / den_red).ok_or_else(|| Error::Overflow(format!("C({a},{b})")))?;
    }
    Ok(r)
}

fn gcd(mut x: u128, mut y: u128) -> u128 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Signed view of [`binom`] for formulas that subtract terms.
pub(crate) fn ibinom(a: i64, b: i64) -> Result<i128> {
    let v = binom(a, b)?;
    i128::try_from(v).map_err(|_| Error::Overflow(format!("C({a},{b}) as signed")))
}

pub(crate) fn to_unsigned(v: i128, what: &str) -> Result<u128> {
    u128::try_from(v).map_err(|_| Error::Domain(format!("{what} evaluated to negative value {v}")))
}

fn add(x: i128, y: i128) -> Result<i128> {
    x.checked_add(y).ok_or_else(|| Error::Overflow("sum".into()))
}

fn mul(x: i128, y: i128) -> Result<i128> {
    x.checked_mul(y).ok_or_else(|| Error::Overflow("product".into()))
}

/// `C(a,i) - sum_{j<t} C(s,j) C(a-s,i-j)` with no domain checks.
///
/// This is the quantity the cascade machinery sums over, including at
/// uniformities below `t` where it may be evaluated on `a < s`.
pub(crate) fn em_formula(a: i64, i: i64, s: i64, t: i64) -> Result<i128> {
    let mut v = ibinom(a, i)?;
    for j in 0..t {
        let term = mul(ibinom(s, j)?, ibinom(a - s, i - j)?)?;
        v = add(v, -term)?;
    }
    Ok(v)
}

/// `C(a,i) - C(a-s,i) - C(a-s-t,i-1)` with no domain checks.
pub(crate) fn hm_formula(a: i64, i: i64, s: i64, t: i64) -> Result<i128> {
    let v = ibinom(a, i)?;
    let v = add(v, -ibinom(a - s, i)?)?;
    add(v, -ibinom(a - s - t, i - 1)?)
}

/// `|EM(n,k,s,t)|`, the number of `k`-subsets of `[n]` meeting `[s]` in at
/// least `t` elements.
pub fn em_size(n: u64, k: u32, s: u32, t: u32) -> Result<u128> {
    if !(n >= k as u64 && k >= t && s >= t) {
        return domain(format!("em_size needs n >= k >= t and s >= t, got n={n} k={k} s={s} t={t}"));
    }
    let v = em_formula(n as i64, k as i64, s as i64, t as i64)?;
    to_unsigned(v, "em_size")
}

/// `|HM(n,k,s,t)|` by the closed form `C(n,k) - C(n-s,k) - C(n-s-t,k-1)`.
///
/// For `s = 0` the family is empty (no set meets `[s-1]` and `s` is not a
/// vertex), and the closed form does not apply; 0 is returned.
pub fn hm_size(n: u64, k: u32, s: u32, t: u32) -> Result<u128> {
    if !(n >= k as u64 && k >= 1) {
        return domain(format!("hm_size needs n >= k >= 1, got n={n} k={k}"));
    }
    if s == 0 {
        return Ok(0);
    }
    let v = hm_formula(n as i64, k as i64, s as i64, t as i64)?;
    to_unsigned(v, "hm_size")
}
