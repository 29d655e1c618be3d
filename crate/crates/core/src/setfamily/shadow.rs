use super::{Family, KSet};
use crate::error::{Error, Result};

/// `∂F`: every `(k-1)`-set contained in some member.
pub fn shadow(f: &Family) -> Result<Family> {
    if f.k() == 0 {
        return Err(Error::EmptyUniformity);
    }
    let mut out = Vec::with_capacity(f.len() * f.k() as usize);
    for &a in f {
        let mut rest = a.bits();
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            out.push(KSet::from_bits(a.bits() & !low));
            rest &= rest - 1;
        }
    }
    Ok(Family::from_raw(f.n(), f.k() - 1, out))
}

/// `∂_ℓ F` by applying [`shadow`] `ℓ` times.
pub fn ell_shadow(f: &Family, ell: u32) -> Result<Family> {
    check_level(f, ell)?;
    let mut g = f.clone();
    for _ in 0..ell {
        g = shadow(&g)?;
    }
    Ok(g)
}

/// `∂_ℓ F` by listing the `(k-ℓ)`-subsets of each member.
pub fn ell_shadow_direct(f: &Family, ell: u32) -> Result<Family> {
    check_level(f, ell)?;
    let r = f.k() - ell;
    let out = f.iter().flat_map(|a| a.subsets_of_size(r)).collect();
    Ok(Family::from_raw(f.n(), r, out))
}

fn check_level(f: &Family, ell: u32) -> Result<()> {
    if ell < 1 || ell > f.k() {
        return Err(Error::Range(format!("shadow level {ell} outside 1..={}", f.k())));
    }
    Ok(())
}
