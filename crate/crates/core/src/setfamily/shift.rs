use super::{Family, KSet};
use crate::error::{Error, Result};

/// `S_ij(F)`: replace `j` by `i` in each member containing `j` but not `i`,
/// unless the replacement is already a member.
pub fn shift_ij(f: &Family, i: u32, j: u32) -> Result<Family> {
    if !(1 <= i && i < j && j <= f.n()) {
        return Err(Error::Range(format!("shift needs 1 <= i < j <= {}, got i={i} j={j}", f.n())));
    }
    Ok(Family::from_raw(f.n(), f.k(), shifted_members(f, i, j).0))
}

fn shifted_members(f: &Family, i: u32, j: u32) -> (Vec<KSet>, bool) {
    let mut changed = false;
    let out = f
        .iter()
        .map(|&a| {
            if a.contains(j) && !a.contains(i) {
                let b = a.remove(j).insert(i);
                if !f.contains(b) {
                    changed = true;
                    return b;
                }
            }
            a
        })
        .collect();
    (out, changed)
}

/// Applies `S_ij` for all `i < j` in lexicographic order, sweeping until
/// nothing moves.
pub fn shift_closure(f: &Family) -> Family {
    let mut g = f.clone();
    loop {
        let mut moved = false;
        for i in 1..g.n() {
            for j in i + 1..=g.n() {
                let (members, changed) = shifted_members(&g, i, j);
                if changed {
                    g = Family::from_raw(g.n(), g.k(), members);
                    moved = true;
                }
            }
        }
        if !moved {
            return g;
        }
    }
}

/// `F = S_ij(F)` for every `i < j`.
pub fn is_shifted(f: &Family) -> bool {
    f.iter().all(|&a| a.elems().all(|j| (1..j).all(|i| a.contains(i) || f.contains(a.remove(j).insert(i)))))
}
