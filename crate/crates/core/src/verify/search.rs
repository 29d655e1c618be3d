use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sample::sample_family;
use super::{Constraint, Mode, SearchOptions};
use crate::colex::colex_rank;
use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::setfamily::{ell_shadow, Combinations, Family, KSet};

/// Frontier size the search aims for before splitting into subtrees.
const SPLIT_TARGET: usize = 64;

/// `min |∂_ℓ F|` over `k`-uniform `F` on `[n]` with `|F| = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub n: u32,
    pub k: u32,
    pub m: usize,
    pub ell: u32,
    pub constraint: Constraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinShadow {
    /// `None` when no admissible family of size `m` was found.
    pub value: Option<u64>,
    pub witness: Option<Family>,
    /// Search nodes (or sampling trials) spent.
    pub nodes: u64,
    /// The incumbent was never beaten.
    pub from_incumbent: bool,
}

/// Least `ℓ`-shadow for `problem`.
///
/// With an incumbent the search only looks for strictly smaller shadows and
/// falls back to the incumbent. `Exhaustive` and `Shifted` are exact (the
/// latter for shift-stable constraints); `Randomized` gives an upper bound.
/// Exceeding the node cap in any subtree is an error, never a partial answer.
pub fn min_shadow(
    problem: &Problem,
    mode: Mode,
    opts: &SearchOptions,
    incumbent: Option<&Family>,
) -> Result<MinShadow> {
    let Problem { n, k, m, ell, constraint } = problem.clone();
    if ell == 0 || ell > k {
        return Err(Error::Range(format!("shadow level {ell} outside 1..={k}")));
    }
    let total = binom(n as i64, k as i64)?;
    if m as u128 > total {
        return Ok(MinShadow { value: None, witness: None, nodes: 0, from_incumbent: false });
    }
    let incumbent = match incumbent {
        Some(f) => {
            if f.n() != n || f.k() != k || f.len() != m || !constraint.holds(f) {
                return Err(Error::Domain("incumbent does not fit the problem".into()));
            }
            Some((ell_shadow(f, ell)?.len() as u64, f.clone()))
        }
        None => None,
    };
    if m == 0 {
        return Ok(MinShadow { value: Some(0), witness: Some(Family::empty(n, k)), nodes: 0, from_incumbent: false });
    }
    let found = match mode {
        Mode::Exhaustive => {
            if total > 24 {
                return Err(Error::Domain(format!("exhaustive search needs C(n,k) <= 24, got {total}")));
            }
            Engine::new(n, k, m, ell, &constraint, false, opts.budget)?.run(incumbent.as_ref().map(|p| p.0), opts)?
        }
        Mode::Shifted => {
            if !constraint.is_shift_stable()? {
                return Err(Error::Domain(format!("{constraint} is not preserved by shifting")));
            }
            Engine::new(n, k, m, ell, &constraint, true, opts.budget)?.run(incumbent.as_ref().map(|p| p.0), opts)?
        }
        Mode::Randomized { seed, trials } => sampled(problem, seed, trials, opts)?,
    };
    let (best, nodes) = found;
    Ok(match (best, incumbent) {
        (Some((v, w)), Some((iv, _))) if v < iv => {
            MinShadow { value: Some(v), witness: Some(w), nodes, from_incumbent: false }
        }
        (_, Some((iv, f))) => MinShadow { value: Some(iv), witness: Some(f), nodes, from_incumbent: true },
        (Some((v, w)), None) => MinShadow { value: Some(v), witness: Some(w), nodes, from_incumbent: false },
        (None, None) => MinShadow { value: None, witness: None, nodes, from_incumbent: false },
    })
}

type Found = (Option<(u64, Family)>, u64);

fn sampled(problem: &Problem, seed: u64, trials: u64, opts: &SearchOptions) -> Result<Found> {
    let results: Vec<Result<Option<(u64, Family)>>> = opts.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let f = sample_family(&mut rng, problem.n, problem.k, &problem.constraint, problem.m)?;
                if f.len() != problem.m {
                    return Ok(None);
                }
                Ok(Some((ell_shadow(&f, problem.ell)?.len() as u64, f)))
            })
            .collect()
    });
    let mut best: Option<(u64, Family)> = None;
    for r in results {
        if let Some((v, f)) = r? {
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, f));
            }
        }
    }
    Ok((best, trials))
}

/// Depth-first search over families listed in increasing colex order.
///
/// In shifted mode a set may join only once every set obtained from it by
/// moving one element down by one is present; the families reached are then
/// exactly the downsets of the dominance order. Shadow sizes are kept
/// incrementally with a counter per `(k-ℓ)`-set.
struct Engine<'a> {
    n: u32,
    k: u32,
    m: usize,
    sets: Vec<u64>,
    subs: Vec<Vec<u32>>,
    covers: Vec<Vec<u32>>,
    allowed: Vec<bool>,
    constraint: &'a Constraint,
    shadow_slots: usize,
    cap: u64,
}

struct State {
    chosen: Vec<u32>,
    bits: Vec<u64>,
    present: Vec<bool>,
    counts: Vec<u32>,
    shadow: u64,
}

struct BudgetHit;

impl<'a> Engine<'a> {
    fn new(n: u32, k: u32, m: usize, ell: u32, constraint: &'a Constraint, shifted: bool, cap: u64) -> Result<Self> {
        let all: Vec<KSet> = Combinations::new(n, k).collect();
        let allowed: Vec<bool> = match constraint {
            Constraint::SubfamilyOf(spec) => {
                let pred = spec.predicate()?;
                all.iter().map(|&a| pred.test(a)).collect()
            }
            _ => vec![true; all.len()],
        };
        let (sets, allowed): (Vec<KSet>, Vec<bool>) =
            if shifted { (all, allowed) } else { all.into_iter().zip(allowed).filter(|p| p.1).unzip() };
        let subs = sets.iter().map(|a| a.subsets_of_size(k - ell).map(|b| colex_rank(b) as u32).collect()).collect();
        let covers = if shifted {
            sets.iter()
                .map(|&a| {
                    a.elems()
                        .filter(|&j| j > 1 && !a.contains(j - 1))
                        .map(|j| colex_rank(a.remove(j).insert(j - 1)) as u32)
                        .collect()
                })
                .collect()
        } else {
            vec![Vec::new(); sets.len()]
        };
        let shadow_slots = binom(n as i64, (k - ell) as i64)? as usize;
        Ok(Engine {
            n,
            k,
            m,
            sets: sets.iter().map(|a| a.bits()).collect(),
            subs,
            covers,
            allowed,
            constraint,
            shadow_slots,
            cap,
        })
    }

    fn fresh(&self) -> State {
        State {
            chosen: Vec::with_capacity(self.m),
            bits: Vec::with_capacity(self.m),
            present: vec![false; self.sets.len()],
            counts: vec![0; self.shadow_slots],
            shadow: 0,
        }
    }

    fn push(&self, st: &mut State, idx: u32) {
        st.chosen.push(idx);
        st.bits.push(self.sets[idx as usize]);
        st.present[idx as usize] = true;
        for &r in &self.subs[idx as usize] {
            if st.counts[r as usize] == 0 {
                st.shadow += 1;
            }
            st.counts[r as usize] += 1;
        }
    }

    fn pop(&self, st: &mut State) {
        let idx = st.chosen.pop().expect("pop on empty state");
        st.bits.pop();
        st.present[idx as usize] = false;
        for &r in &self.subs[idx as usize] {
            st.counts[r as usize] -= 1;
            if st.counts[r as usize] == 0 {
                st.shadow -= 1;
            }
        }
    }

    fn admissible(&self, st: &State, idx: usize) -> bool {
        self.allowed[idx]
            && self.covers[idx].iter().all(|&c| st.present[c as usize])
            && match self.constraint {
                Constraint::TIntersecting(_) | Constraint::MatchingAtMost(_) => {
                    self.constraint.admits(&st.bits, self.sets[idx])
                }
                _ => true,
            }
    }

    fn added_shadow(&self, st: &State, idx: usize) -> u64 {
        self.subs[idx].iter().filter(|&&r| st.counts[r as usize] == 0).count() as u64
    }

    /// Children of the current state that could still beat `bound`.
    fn children(&self, st: &State, bound: u64) -> Vec<u32> {
        let start = st.chosen.last().map_or(0, |&i| i as usize + 1);
        let need = self.m - st.chosen.len();
        (start..self.sets.len())
            .take_while(|&idx| self.sets.len() - idx >= need)
            .filter(|&idx| self.admissible(st, idx) && st.shadow + self.added_shadow(st, idx) < bound)
            .map(|idx| idx as u32)
            .collect()
    }

    fn dfs(
        &self,
        st: &mut State,
        best: &mut (u64, Option<Vec<u32>>),
        nodes: &mut u64,
    ) -> std::result::Result<(), BudgetHit> {
        if st.chosen.len() == self.m {
            if st.shadow < best.0 {
                *best = (st.shadow, Some(st.chosen.clone()));
            }
            return Ok(());
        }
        let start = st.chosen.last().map_or(0, |&i| i as usize + 1);
        let need = self.m - st.chosen.len();
        for idx in start..self.sets.len() {
            if self.sets.len() - idx < need {
                break;
            }
            if !self.admissible(st, idx) || st.shadow + self.added_shadow(st, idx) >= best.0 {
                continue;
            }
            *nodes += 1;
            if *nodes > self.cap {
                return Err(BudgetHit);
            }
            self.push(st, idx as u32);
            let r = self.dfs(st, best, nodes);
            self.pop(st);
            r?;
        }
        Ok(())
    }

    /// Splits the tree breadth-first into a fixed frontier, searches each
    /// subtree independently with its own node cap, then merges in frontier
    /// order so the outcome does not depend on scheduling.
    fn run(&self, incumbent: Option<u64>, opts: &SearchOptions) -> Result<Found> {
        let bound = incumbent.unwrap_or(u64::MAX);
        let budget_err = || Error::BudgetExceeded { budget: self.cap };
        let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
        let mut nodes = 0u64;
        while frontier.len() < SPLIT_TARGET && frontier.iter().any(|p| p.len() < self.m) {
            let mut next = Vec::new();
            for prefix in &frontier {
                if prefix.len() == self.m {
                    next.push(prefix.clone());
                    continue;
                }
                let st = self.replay(prefix);
                for c in self.children(&st, bound) {
                    nodes += 1;
                    let mut p = prefix.clone();
                    p.push(c);
                    next.push(p);
                }
            }
            if nodes > self.cap {
                return Err(budget_err());
            }
            if next.is_empty() {
                return Ok((None, nodes));
            }
            frontier = next;
        }
        let results: Vec<std::result::Result<(u64, Option<Vec<u32>>, u64), BudgetHit>> = opts.install(|| {
            frontier
                .par_iter()
                .map(|prefix| {
                    let mut st = self.replay(prefix);
                    let mut best = (bound, None);
                    let mut sub_nodes = 0u64;
                    self.dfs(&mut st, &mut best, &mut sub_nodes)?;
                    Ok((best.0, best.1, sub_nodes))
                })
                .collect()
        });
        let mut best: Option<(u64, Vec<u32>)> = None;
        for r in results {
            let (v, w, sub_nodes) = r.map_err(|_| budget_err())?;
            nodes += sub_nodes;
            if let Some(w) = w {
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, w));
                }
            }
        }
        let best = match best {
            Some((v, idxs)) => {
                let f = Family::new(self.n, self.k, idxs.iter().map(|&i| KSet::from_bits(self.sets[i as usize])))?;
                Some((v, f))
            }
            None => None,
        };
        Ok((best, nodes))
    }

    fn replay(&self, prefix: &[u32]) -> State {
        let mut st = self.fresh();
        for &i in prefix {
            self.push(&mut st, i);
        }
        st
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{segment_shadow_size, SegmentKind, SegmentSpec};
    use crate::setfamily::{is_shifted, shift_closure};

    fn problem(n: u32, k: u32, m: usize, ell: u32, constraint: Constraint) -> Problem {
        Problem { n, k, m, ell, constraint }
    }

    fn kk(n: u32, k: u32, m: usize, ell: u32) -> u64 {
        let spec = SegmentSpec::new(SegmentKind::Full, n, k, m as u128);
        segment_shadow_size(&spec, ell).unwrap() as u64
    }

    #[test]
    fn exhaustive_matches_kruskal_katona() {
        let opts = SearchOptions::default();
        for m in 0..=20 {
            let r = min_shadow(&problem(6, 3, m, 1, Constraint::None), Mode::Exhaustive, &opts, None).unwrap();
            let expect = if m == 0 { 0 } else { kk(6, 3, m, 1) };
            assert_eq!(r.value, Some(expect), "m={m}");
            let w = r.witness.unwrap();
            assert_eq!(w.len(), m);
            if m > 0 {
                assert_eq!(ell_shadow(&w, 1).unwrap().len() as u64, expect);
            }
        }
    }

    #[test]
    fn shifted_agrees_with_exhaustive() {
        let opts = SearchOptions::default();
        let cases = [
            (5, 3, Constraint::None),
            (6, 3, Constraint::TIntersecting(1)),
            (5, 2, Constraint::MatchingAtMost(1)),
            (6, 2, Constraint::MatchingAtMost(2)),
            (6, 3, Constraint::SubfamilyOf(crate::families::FamilySpec::Em { n: 6, k: 3, s: 3, t: 2 })),
        ];
        for (n, k, c) in cases {
            let total = binom(n as i64, k as i64).unwrap() as usize;
            for m in 0..=total {
                for ell in 1..k {
                    let p = problem(n, k, m, ell, c);
                    let e = min_shadow(&p, Mode::Exhaustive, &opts, None).unwrap();
                    let s = min_shadow(&p, Mode::Shifted, &opts, None).unwrap();
                    assert_eq!(e.value, s.value, "n={n} k={k} m={m} ell={ell} {c}");
                    if let Some(w) = s.witness {
                        assert!(is_shifted(&w) && c.holds(&w));
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_intersecting_at_seven() {
        let opts = SearchOptions::default();
        for m in 14..=15 {
            let p = problem(7, 3, m, 1, Constraint::TIntersecting(1));
            let r = min_shadow(&p, Mode::Shifted, &opts, None).unwrap();
            let seg = SegmentSpec::new(SegmentKind::Em { s: 1, t: 1 }, 7, 3, m as u128);
            assert!(r.value.unwrap() >= segment_shadow_size(&seg, 1).unwrap() as u64);
        }
        let r = min_shadow(&problem(7, 3, 16, 1, Constraint::TIntersecting(1)), Mode::Shifted, &opts, None).unwrap();
        assert_eq!(r.value, None);
    }

    #[test]
    fn incumbent_and_budget() {
        let opts = SearchOptions::default();
        let seg = Family::complete(6, 3).unwrap().prefix(10).unwrap();
        let p = problem(6, 3, 10, 1, Constraint::None);
        let r = min_shadow(&p, Mode::Exhaustive, &opts, Some(&seg)).unwrap();
        assert!(r.from_incumbent);
        assert_eq!(r.witness.as_ref(), Some(&seg));
        let tiny = SearchOptions { budget: 3, jobs: 1 };
        assert!(matches!(min_shadow(&p, Mode::Exhaustive, &tiny, None), Err(Error::BudgetExceeded { budget: 3 })));
        assert!(min_shadow(&problem(7, 3, 3, 1, Constraint::None), Mode::Exhaustive, &opts, None).is_err());
        let bad = Family::complete(6, 3).unwrap().prefix(9).unwrap();
        assert!(min_shadow(&p, Mode::Exhaustive, &opts, Some(&bad)).is_err());
    }

    #[test]
    fn independent_of_jobs() {
        let p = problem(8, 3, 20, 1, Constraint::TIntersecting(1));
        let a = min_shadow(&p, Mode::Shifted, &SearchOptions { budget: DEFAULT_BUDGET_TEST, jobs: 1 }, None).unwrap();
        let b = min_shadow(&p, Mode::Shifted, &SearchOptions { budget: DEFAULT_BUDGET_TEST, jobs: 4 }, None).unwrap();
        assert_eq!(a, b);
        let p = problem(9, 3, 12, 1, Constraint::MatchingAtMost(1));
        let mode = Mode::Randomized { seed: 5, trials: 64 };
        let a = min_shadow(&p, mode, &SearchOptions { budget: 1, jobs: 1 }, None).unwrap();
        let b = min_shadow(&p, mode, &SearchOptions { budget: 1, jobs: 3 }, None).unwrap();
        assert_eq!(a, b);
        let w = a.witness.unwrap();
        assert!(is_shifted(&w) && shift_closure(&w) == w && w.len() == 12);
    }

    const DEFAULT_BUDGET_TEST: u64 = super::super::DEFAULT_BUDGET;
}
