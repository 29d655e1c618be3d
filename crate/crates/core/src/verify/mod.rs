//! Oracles and checkers for the shadow bounds.
//!
//! [`min_shadow`] is the workhorse: the least `|∂_ℓ F|` over constrained
//! families of a given size, by exhaustive search, by search over shifted
//! families, or by seeded sampling. The theorem checks compare it against
//! colex segments and record the outcome in a [`VerificationReport`].

mod formulas;
mod real;
mod report;
mod sample;
mod search;
mod theorems;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::setfamily::{has_matching_bits, is_shifted, Family, KSet};

pub use formulas::{cross_check_formulas, FormulaRanges};
pub use real::{gbinom, solve_real_size, RealForm};
pub use report::{ModeInfo, Verdict, VerificationReport, SCHEMA_VERSION};
pub use sample::sample_family;
pub use search::{min_shadow, MinShadow, Problem};
pub use theorems::{
    check_kruskal_katona, check_theorem_1_11, check_theorem_1_3, check_theorem_1_6, scan_fact_1_7, scan_fact_matching,
    Scan, ScanRow,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
/// Default node cap for each search subtree.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every family; only for `C(n,k) <= 24`.
    Exhaustive,
    /// Every shifted family.
    Shifted,
    /// Seeded samples pushed through the shift closure.
    Randomized { seed: u64, trials: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Shifted => "shifted",
            Mode::Randomized { .. } => "randomized",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// `exhaustive`, `shifted` or `randomized` (default seed, 10^4 trials).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "shifted" => Ok(Mode::Shifted),
            "randomized" => Ok(Mode::Randomized { seed: DEFAULT_SEED, trials: 10_000 }),
            _ => Err(Error::Domain(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Search limits. `jobs = 0` uses the global rayon pool; results never
/// depend on `jobs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, jobs: 0 }
    }
}

impl SearchOptions {
    pub(crate) fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        if self.jobs == 0 {
            return op();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}

/// Condition a family must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Any two members share at least `t` elements.
    TIntersecting(u32),
    /// No `s + 1` pairwise disjoint members.
    MatchingAtMost(u32),
    /// Members drawn from a named family.
    SubfamilyOf(FamilySpec),
}

impl Constraint {
    /// Whether `x` may join `chosen` (given as bit masks).
    pub(crate) fn admits(&self, chosen: &[u64], x: u64) -> bool {
        match *self {
            Constraint::None => true,
            Constraint::TIntersecting(t) => chosen.iter().all(|&c| (c & x).count_ones() >= t),
            Constraint::MatchingAtMost(s) => {
                let avoid: Vec<u64> = chosen.iter().copied().filter(|&c| c & x == 0).collect();
                !has_matching_bits(&avoid, s as usize)
            }
            Constraint::SubfamilyOf(spec) => spec.contains(KSet::from_bits(x)).unwrap_or(false),
        }
    }

    pub fn holds(&self, f: &Family) -> bool {
        let bits: Vec<u64> = f.iter().map(|a| a.bits()).collect();
        (0..bits.len()).all(|i| self.admits(&bits[..i], bits[i]))
    }

    /// Shifting keeps the constraint satisfied.
    pub fn is_shift_stable(&self) -> Result<bool> {
        match self {
            Constraint::SubfamilyOf(spec) => Ok(is_shifted(&spec.build()?)),
            _ => Ok(true),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::None => f.write_str("none"),
            Constraint::TIntersecting(t) => write!(f, "{t}-intersecting"),
            Constraint::MatchingAtMost(s) => write!(f, "matching<={s}"),
            Constraint::SubfamilyOf(spec) => write!(f, "subfamily of {spec}"),
        }
    }
}
