use super::Family;
use crate::error::{Error, Result};

/// `ν(F)`, the largest number of pairwise disjoint members.
///
/// Branches on the smallest vertex still in play: either it stays uncovered
/// or one of the members through it joins the matching. A greedy matching
/// seeds the lower bound; `min(#members, #vertices / k)` prunes.
pub fn matching_number(f: &Family) -> usize {
    if f.is_empty() {
        return 0;
    }
    if f.k() == 0 {
        return 1;
    }
    let edges: Vec<u64> = f.iter().map(|a| a.bits()).collect();
    let mut used = 0u64;
    let mut best = 0;
    for &e in &edges {
        if e & used == 0 {
            used |= e;
            best += 1;
        }
    }
    search(&edges, f.k(), 0, &mut best);
    best
}

fn search(edges: &[u64], k: u32, cur: usize, best: &mut usize) {
    if cur > *best {
        *best = cur;
    }
    if edges.is_empty() {
        return;
    }
    let span = edges.iter().fold(0u64, |u, e| u | e);
    let bound = edges.len().min((span.count_ones() / k) as usize);
    if cur + bound <= *best {
        return;
    }
    let v = span & span.wrapping_neg();
    let (through, avoid): (Vec<u64>, Vec<u64>) = edges.iter().partition(|&&e| e & v != 0);
    for &e in &through {
        let rest: Vec<u64> = avoid.iter().copied().filter(|&g| g & e == 0).collect();
        search(&rest, k, cur + 1, best);
    }
    search(&avoid, k, cur, best);
}

/// Whether the members given as bit masks contain `r` pairwise disjoint ones.
pub(crate) fn has_matching_bits(edges: &[u64], r: usize) -> bool {
    if r == 0 {
        return true;
    }
    if edges.len() < r {
        return false;
    }
    let span = edges.iter().fold(0u64, |u, e| u | e);
    let v = span & span.wrapping_neg();
    let (through, avoid): (Vec<u64>, Vec<u64>) = edges.iter().partition(|&&e| e & v != 0);
    through.iter().any(|&e| {
        let rest: Vec<u64> = avoid.iter().copied().filter(|&g| g & e == 0).collect();
        has_matching_bits(&rest, r - 1)
    }) || has_matching_bits(&avoid, r)
}

/// `τ(F)`, the fewest vertices meeting every member.
///
/// Tries cover sizes `0, 1, 2, ...`; for each size, branches on the vertices
/// of the first member not yet met. Fails only for a family containing the
/// empty set.
pub fn cover_number(f: &Family) -> Result<usize> {
    if f.is_empty() {
        return Ok(0);
    }
    if f.k() == 0 {
        return Err(Error::EmptyUniformity);
    }
    let edges: Vec<u64> = f.iter().map(|a| a.bits()).collect();
    (1..=f.n() as usize)
        .find(|&d| covers_within(&edges, 0, d))
        .ok_or_else(|| Error::Domain("family cannot be covered".into()))
}

fn covers_within(edges: &[u64], chosen: u64, depth: usize) -> bool {
    let Some(&e) = edges.iter().find(|&&e| e & chosen == 0) else {
        return true;
    };
    if depth == 0 {
        return false;
    }
    let mut rest = e;
    while rest != 0 {
        let v = rest & rest.wrapping_neg();
        if covers_within(edges, chosen | v, depth - 1) {
            return true;
        }
        rest &= rest - 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamily::{Combinations, KSet};

    fn brute_matching(f: &Family) -> usize {
        let m = f.members();
        let mut best = 0;
        for mask in 0u32..1 << m.len() {
            let mut used = 0u64;
            let mut ok = true;
            for (i, a) in m.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ok &= a.bits() & used == 0;
                    used |= a.bits();
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    fn brute_cover(f: &Family) -> usize {
        (0u64..1 << f.n())
            .filter(|c| f.iter().all(|a| a.bits() & c != 0))
            .map(|c| c.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(matching_number(&Family::empty(5, 3)), 0);
        assert_eq!(matching_number(&Family::complete(7, 3).unwrap()), 2);
        let em = Family::filtered(9, 3, |a| !a.is_disjoint(KSet::prefix(2))).unwrap();
        assert_eq!(matching_number(&em), 2);
        assert_eq!(matching_number(&Family::complete(12, 3).unwrap()), 4);
        let ekr = Family::filtered(8, 3, |a| a.contains(1)).unwrap();
        assert_eq!(cover_number(&ekr).unwrap(), 1);
        assert_eq!(cover_number(&Family::complete(5, 3).unwrap()).unwrap(), 3);
        assert_eq!(cover_number(&Family::empty(5, 3)).unwrap(), 0);
        assert_eq!(cover_number(&em).unwrap(), 2);
    }

    #[test]
    fn agree_with_brute_force() {
        let all: Vec<KSet> = Combinations::new(7, 3).collect();
        let mut x = 0x2545f4914f6cdd1du64;
        for _ in 0..200 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let f =
                Family::new(7, 3, all.iter().enumerate().filter(|(i, _)| x >> i & 3 == 0).map(|(_, a)| *a).take(16))
                    .unwrap();
            assert_eq!(matching_number(&f), brute_matching(&f));
            assert_eq!(cover_number(&f).unwrap(), brute_cover(&f));
            let edges: Vec<u64> = f.iter().map(|a| a.bits()).collect();
            let nu = brute_matching(&f);
            assert!(has_matching_bits(&edges, nu));
            assert!(!has_matching_bits(&edges, nu + 1));
        }
    }
}
