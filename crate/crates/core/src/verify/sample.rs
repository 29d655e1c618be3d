use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::Constraint;
use crate::error::Result;
use crate::setfamily::{shift_closure, Combinations, Family, KSet};

/// A random family satisfying `constraint` with at most `target` members.
///
/// Candidates are shuffled, optionally biased towards a random near-extremal
/// core (a star or a two-out-of-three-style block), then added greedily while
/// the constraint allows. Shift-stable constraints get the shift closure
/// applied, which keeps the size and the constraint and can only shrink
/// shadows.
pub fn sample_family<R: Rng>(rng: &mut R, n: u32, k: u32, constraint: &Constraint, target: usize) -> Result<Family> {
    let mut cands: Vec<KSet> = match constraint {
        Constraint::SubfamilyOf(spec) => {
            let pred = spec.predicate()?;
            Combinations::new(n, k).filter(|&a| pred.test(a)).collect()
        }
        _ => Combinations::new(n, k).collect(),
    };
    cands.shuffle(rng);
    if let Some(pref) = core_preference(rng, n, constraint) {
        cands.sort_by_key(|&a| !pref(a));
    }
    let mut chosen: Vec<u64> = Vec::with_capacity(target);
    for a in cands {
        if chosen.len() == target {
            break;
        }
        if constraint.admits(&chosen, a.bits()) {
            chosen.push(a.bits());
        }
    }
    let f = Family::new(n, k, chosen.into_iter().map(KSet::from_bits))?;
    Ok(if constraint.is_shift_stable()? { shift_closure(&f) } else { f })
}

fn random_set<R: Rng>(rng: &mut R, n: u32, size: u32) -> KSet {
    let mut s = KSet::EMPTY;
    for i in index::sample(rng, n as usize, size as usize) {
        s = s.insert(i as u32 + 1);
    }
    s
}

type Pref = Box<dyn Fn(KSet) -> bool>;

fn core_preference<R: Rng>(rng: &mut R, n: u32, constraint: &Constraint) -> Option<Pref> {
    let (p, wide) = match *constraint {
        Constraint::TIntersecting(t) => (t, t + 2),
        Constraint::MatchingAtMost(s) => (s, 2 * s + 1),
        _ => return None,
    };
    let intersecting = matches!(constraint, Constraint::TIntersecting(_));
    match rng.gen_range(0..3) {
        0 if p >= 1 && p <= n => {
            let core = random_set(rng, n, p);
            Some(if intersecting {
                Box::new(move |a: KSet| core.is_subset(a))
            } else {
                Box::new(move |a: KSet| !a.is_disjoint(core))
            })
        }
        1 if wide <= n => {
            let core = random_set(rng, n, wide);
            let need = if intersecting { p + 1 } else { 2 };
            Some(Box::new(move |a: KSet| a.intersection(core).len() >= need))
        }
        _ => None,
    }
}
