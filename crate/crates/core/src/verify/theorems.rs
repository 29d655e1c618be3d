use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::real::{gbinom, solve_real_size, RealForm};
use super::sample::sample_family;
use super::search::{min_shadow, Problem};
use super::{Constraint, Mode, SearchOptions, VerificationReport};
use crate::colex::{prefix_shadow_profile, segment_shadow_size, SegmentKind, SegmentSpec};
use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::families::{threshold, FamilySpec, Theorem};
use crate::setfamily::{ell_shadow, matching_number, Family, KSet};

/// Slack allowed when comparing an integer shadow with a real-valued bound.
const REAL_SLACK: f64 = 1e-6;

/// Largest `n` in the tightness scans run by the theorem checks.
const FACT_SCAN_MAX: u32 = 40;
const MATCHING_SCAN_MAX: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub m: u128,
    /// Shadow of the competing construction.
    pub left: u128,
    /// Shadow of the colex segment of the same size, when it exists.
    pub right: Option<u128>,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    /// Least scanned `n` with strict inequality.
    pub least: Option<u32>,
    /// Least scanned `n` from which the inequality is strict up to the end
    /// of the range.
    pub holds_from: Option<u32>,
}

impl Scan {
    fn from_rows(rows: Vec<ScanRow>) -> Scan {
        let least = rows.iter().find(|r| r.strict).map(|r| r.n);
        let holds_from = match rows.iter().rposition(|r| !r.strict) {
            Some(i) => rows.get(i + 1).map(|r| r.n),
            None => rows.first().map(|r| r.n),
        };
        Scan { rows, least, holds_from }
    }

    fn record(&self, report: &mut VerificationReport, prefix: &str) {
        for r in &self.rows {
            report.row([
                ("scan", prefix.to_string()),
                ("n", r.n.to_string()),
                ("m", r.m.to_string()),
                ("construction", r.left.to_string()),
                ("segment", r.right.map_or("-".into(), |v| v.to_string())),
                ("strict", r.strict.to_string()),
            ]);
        }
        let show = |v: Option<u32>| v.map_or("none".to_string(), |n| n.to_string());
        report.quantity(&format!("{prefix}_least_n"), show(self.least));
        report.quantity(&format!("{prefix}_holds_from"), show(self.holds_from));
    }
}

fn compare_row(n: u32, construction: FamilySpec, segment: SegmentKind, k: u32, ell: u32) -> Result<ScanRow> {
    let g = construction.build()?;
    let m = g.len() as u128;
    let left = ell_shadow(&g, ell)?.len() as u128;
    let spec = SegmentSpec::new(segment, n, k, m);
    let right = if m <= spec.available()? { Some(segment_shadow_size(&spec, ell)?) } else { None };
    Ok(ScanRow { n, m, left, right, strict: right.is_some_and(|r| left < r) })
}

/// `|∂_ℓ EM(n,k,t+2,t+1)|` against `|∂_ℓ L_m EM(n,k,t,t)|` with
/// `m = |EM(n,k,t+2,t+1)|`, for each `n` in `lo..=hi`.
pub fn scan_fact_1_7(k: u32, t: u32, ell: u32, lo: u32, hi: u32) -> Result<Scan> {
    if !(t >= 1 && ell >= 1 && ell < k && t < k) {
        return Err(Error::Domain(format!("scan needs 1 <= t < k and 1 <= ell < k, got k={k} t={t} ell={ell}")));
    }
    let lo = lo.max(k + 1).max(t + 2);
    let rows = (lo..=hi)
        .map(|n| compare_row(n, FamilySpec::Em { n, k, s: t + 2, t: t + 1 }, SegmentKind::Em { s: t, t }, k, ell))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scan::from_rows(rows))
}

/// `|∂ EM(n,k,2s+1,2)|` against `|∂ L_m EM(n,k,s,1)|` with
/// `m = |EM(n,k,2s+1,2)|`, for each `n` in `lo..=hi`.
pub fn scan_fact_matching(k: u32, s: u32, lo: u32, hi: u32) -> Result<Scan> {
    if !(k >= 2 && s >= 1) {
        return Err(Error::Domain(format!("scan needs k >= 2 and s >= 1, got k={k} s={s}")));
    }
    let lo = lo.max(2 * s + 1).max(k + 1);
    let rows = (lo..=hi)
        .map(|n| compare_row(n, FamilySpec::Em { n, k, s: 2 * s + 1, t: 2 }, SegmentKind::Em { s, t: 1 }, k, 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scan::from_rows(rows))
}

/// What a shadow bound check compares against.
struct BoundCheck<'a> {
    n: u32,
    k: u32,
    ell: u32,
    constraint: Constraint,
    /// Sizes strictly above this are in scope.
    threshold: u128,
    /// Colex order of the layer whose prefixes are the extremal families.
    layer: Vec<KSet>,
    /// `|∂_ℓ|` of every prefix of `layer`.
    profile: Vec<u64>,
    /// Real-parameter form of the bound, if the statement has one.
    real: Option<(RealForm, &'a (dyn Fn(f64) -> f64 + Sync))>,
}

#[derive(Default)]
struct Tally {
    compared: u64,
    violations: u64,
    real_checked: u64,
    real_violations: u64,
    min_margin: Option<i128>,
}

impl BoundCheck<'_> {
    fn new(n: u32, k: u32, ell: u32, constraint: Constraint, threshold: u128, layer: FamilySpec) -> Result<Self> {
        let layer = layer.build()?.members().to_vec();
        let profile = prefix_shadow_profile(&layer, ell);
        Ok(BoundCheck { n, k, ell, constraint, threshold, layer, profile, real: None })
    }

    fn real_bound(&self, m: usize) -> Option<f64> {
        let (form, bound) = self.real?;
        solve_real_size(m as u128, self.k, form).ok().map(bound)
    }

    /// Compares one family; returns whether it violates either bound.
    fn judge(&self, f: &Family, shadow: u64, tally: &mut Tally) -> bool {
        let m = f.len();
        if (m as u128) <= self.threshold || m >= self.profile.len() {
            return false;
        }
        tally.compared += 1;
        let seg = self.profile[m];
        let margin = shadow as i128 - seg as i128;
        tally.min_margin = Some(tally.min_margin.map_or(margin, |v| v.min(margin)));
        let mut bad = shadow < seg;
        if let Some(b) = self.real_bound(m) {
            tally.real_checked += 1;
            if (shadow as f64) < b - REAL_SLACK * b.abs().max(1.0) {
                tally.real_violations += 1;
                bad = true;
            }
        }
        if shadow < seg {
            tally.violations += 1;
        }
        bad
    }

    fn finish(&self, report: &mut VerificationReport, tally: &Tally) {
        report
            .quantity("compared", tally.compared)
            .quantity("violations", tally.violations)
            .quantity("real_bound_checked", tally.real_checked)
            .quantity("real_bound_violations", tally.real_violations);
        if let Some(mm) = tally.min_margin {
            report.quantity("min_margin", mm);
        }
        if tally.compared == 0 {
            report.report_only("no family above the threshold was examined; the check is vacuous here");
        }
    }

    /// Exact search for each size above the threshold, seeded with the
    /// segment; stops at the first size no admissible family reaches.
    fn run_search(&self, report: &mut VerificationReport, mode: Mode, opts: &SearchOptions) -> Result<()> {
        let mut tally = Tally::default();
        let mut nodes = 0u64;
        let total = binom(self.n as i64, self.k as i64)? as usize;
        let start = usize::try_from(self.threshold + 1).unwrap_or(usize::MAX);
        for m in start..=total {
            let seg = (m < self.profile.len()).then(|| Family::new(self.n, self.k, self.layer[..m].iter().copied()));
            let seg = seg.transpose()?;
            let problem = Problem { n: self.n, k: self.k, m, ell: self.ell, constraint: self.constraint };
            let r = match min_shadow(&problem, mode, opts, seg.as_ref()) {
                Ok(r) => r,
                Err(Error::BudgetExceeded { budget }) => {
                    report.quantity("budget_exceeded", "true");
                    report.report_only(format!("node cap {budget} reached at m={m}; sizes from {m} on are unchecked"));
                    break;
                }
                Err(e) => return Err(e),
            };
            nodes += r.nodes;
            let (Some(value), Some(w)) = (r.value, r.witness) else {
                report.quantity("largest_admissible", m - 1);
                break;
            };
            if seg.is_none() {
                report.note(format!("a family of size {m} exceeds the extremal layer"));
                report.example(&w);
                report.quantity("largest_admissible", format!(">= {m}"));
                continue;
            }
            let seg_value = self.profile[m];
            let real = self.real_bound(m);
            report.row([
                ("m", m.to_string()),
                ("min_shadow", value.to_string()),
                ("segment", seg_value.to_string()),
                ("real_bound", real.map_or("-".into(), |b| format!("{b:.6}"))),
            ]);
            if self.judge(&w, value, &mut tally) {
                report.fail(&w);
            }
        }
        report.quantity("search_nodes", nodes);
        self.finish(report, &tally);
        Ok(())
    }

    /// Seeded sampling: each trial draws a target size above the threshold
    /// when possible, builds a random admissible family and shift-closes it.
    fn run_random(
        &self,
        report: &mut VerificationReport,
        seed: u64,
        trials: u64,
        cap: usize,
        opts: &SearchOptions,
    ) -> Result<()> {
        let lo = usize::try_from(self.threshold + 1).unwrap_or(usize::MAX);
        let outcomes: Vec<Result<(Family, u64)>> = opts.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    let target = if cap >= lo { rng.gen_range(lo..=cap) } else { rng.gen_range(1..=cap.max(1)) };
                    let f = sample_family(&mut rng, self.n, self.k, &self.constraint, target)?;
                    let sh = ell_shadow(&f, self.ell)?.len() as u64;
                    Ok((f, sh))
                })
                .collect()
        });
        let mut tally = Tally::default();
        let mut largest = 0usize;
        let mut below_threshold_smaller = 0u64;
        let mut broken = 0u64;
        for o in outcomes {
            let (f, sh) = o?;
            largest = largest.max(f.len());
            if !self.constraint.holds(&f) {
                broken += 1;
                report.fail(&f);
                continue;
            }
            if (f.len() as u128) <= self.threshold && f.len() < self.profile.len() && sh < self.profile[f.len()] {
                below_threshold_smaller += 1;
            }
            if self.judge(&f, sh, &mut tally) {
                report.fail(&f);
            }
        }
        report
            .quantity("trials", trials)
            .quantity("largest_sampled", largest)
            .quantity("constraint_broken", broken)
            .quantity("below_threshold_smaller_shadow", below_threshold_smaller);
        self.finish(report, &tally);
        Ok(())
    }
}

fn run_mode(
    check: &BoundCheck<'_>,
    report: &mut VerificationReport,
    mode: Mode,
    cap: usize,
    opts: &SearchOptions,
) -> Result<()> {
    match mode {
        Mode::Randomized { seed, trials } => check.run_random(report, seed, trials, cap, opts),
        _ => check.run_search(report, mode, opts),
    }
}

/// Exact (or sampled) minimum `ℓ`-shadow for every size against the colex
/// segment of the complete layer.
pub fn check_kruskal_katona(n: u32, k: u32, ell: u32, mode: Mode, opts: &SearchOptions) -> Result<VerificationReport> {
    if !(k >= 1 && ell >= 1 && ell <= k && k <= n) {
        return Err(Error::Domain(format!("needs 1 <= ell <= k <= n, got n={n} k={k} ell={ell}")));
    }
    let mut report = VerificationReport::new("kk", &mode, opts.budget);
    report.param("n", n).param("k", k).param("ell", ell);
    let layer: Vec<KSet> = Family::complete(n, k)?.members().to_vec();
    let profile = prefix_shadow_profile(&layer, ell);
    let mut mismatches = 0u64;
    let mut nodes = 0u64;
    for m in 0..=layer.len() {
        let problem = Problem { n, k, m, ell, constraint: Constraint::None };
        let r = match mode {
            Mode::Randomized { seed, trials } => {
                min_shadow(&problem, Mode::Randomized { seed: seed.wrapping_add(m as u64), trials }, opts, None)
            }
            _ => min_shadow(&problem, mode, opts, None),
        };
        let r = match r {
            Ok(r) => r,
            Err(Error::BudgetExceeded { budget }) => {
                report.quantity("budget_exceeded", "true");
                report.report_only(format!("node cap {budget} reached at m={m}"));
                break;
            }
            Err(e) => return Err(e),
        };
        nodes += r.nodes;
        let Some(value) = r.value else { continue };
        let seg = profile[m];
        report.row([("m", m.to_string()), ("min_shadow", value.to_string()), ("segment", seg.to_string())]);
        let bad = match mode {
            Mode::Randomized { .. } => value < seg,
            _ => value != seg,
        };
        if bad {
            mismatches += 1;
            match &r.witness {
                Some(w) if value < seg => {
                    report.fail(w);
                }
                _ => {
                    report.fail(&Family::new(n, k, layer[..m].iter().copied())?);
                }
            }
        }
    }
    report.quantity("mismatches", mismatches).quantity("search_nodes", nodes);
    Ok(report)
}

/// Intersecting families above `m(n,k)` against `L_m EKR(n,k)`, plus the
/// size-`3n-8` family `EM(n,3,3,2)` for `k = 3`.
pub fn check_theorem_1_3(n: u32, k: u32, ell: u32, mode: Mode, opts: &SearchOptions) -> Result<VerificationReport> {
    if !(k >= 3 && n > 2 * k && ell >= 1 && ell < k) {
        return Err(Error::Domain(format!("needs n > 2k >= 6 and 1 <= ell < k, got n={n} k={k} ell={ell}")));
    }
    let thr = threshold(Theorem::T13, n, k, None)?;
    let mut report = VerificationReport::new("t13", &mode, opts.budget);
    report.param("n", n).param("k", k).param("ell", ell).quantity("threshold", thr.value);
    let bound = move |x: f64| gbinom(x, (k - ell) as i64);
    let mut check = BoundCheck::new(n, k, ell, Constraint::TIntersecting(1), thr.value, FamilySpec::Ekr { n, k })?;
    check.real = Some((RealForm::Star, &bound));
    run_mode(&check, &mut report, mode, check.layer.len(), opts)?;
    if k == 3 {
        let row = compare_row(n, FamilySpec::Em { n, k, s: 3, t: 2 }, SegmentKind::Em { s: 1, t: 1 }, k, ell)?;
        report
            .quantity("near_miss_m", row.m)
            .quantity("near_miss_shadow", row.left)
            .quantity("near_miss_segment", row.right.map_or("-".into(), |v| v.to_string()))
            .quantity("near_miss_strict", row.strict);
        report.example(&FamilySpec::Em { n, k, s: 3, t: 2 }.build()?);
        if !row.strict && ell == 1 {
            report.report_only(format!("EM({n},3,3,2) does not undercut the segment at n={n}"));
        }
    }
    Ok(report)
}

/// `t`-intersecting families above `m(n,k,t)` against `L_m EM(n,k,t,t)`,
/// with the tightness construction `EM(n,k,t+2,t+1)` at `n` and over a scan.
pub fn check_theorem_1_6(
    n: u32,
    k: u32,
    t: u32,
    ell: u32,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<VerificationReport> {
    if !(t >= 1 && k >= 3 && ell >= 1 && ell < k) {
        return Err(Error::Domain(format!("needs t >= 1, k >= 3 and 1 <= ell < k, got k={k} t={t} ell={ell}")));
    }
    let thr = threshold(Theorem::T16, n, k, Some(t))?;
    let mut report = VerificationReport::new("t16", &mode, opts.budget);
    report.param("n", n).param("k", k).param("t", t).param("ell", ell).quantity("threshold", thr.value);
    let bound = move |x: f64| {
        let lo = t.saturating_sub(ell) as i64;
        (lo..=(k - ell) as i64).map(|i| gbinom(t as f64, i) * gbinom(x - t as f64, (k - ell) as i64 - i)).sum()
    };
    let mut check =
        BoundCheck::new(n, k, ell, Constraint::TIntersecting(t), thr.value, FamilySpec::Em { n, k, s: t, t })?;
    check.real = Some((RealForm::TStar { t }, &bound));
    run_mode(&check, &mut report, mode, check.layer.len(), opts)?;
    let here = compare_row(n, FamilySpec::Em { n, k, s: t + 2, t: t + 1 }, SegmentKind::Em { s: t, t }, k, ell)?;
    report
        .quantity("tightness_m", here.m)
        .quantity("tightness_shadow", here.left)
        .quantity("tightness_segment", here.right.map_or("-".into(), |v| v.to_string()))
        .quantity("tightness_strict", here.strict);
    scan_fact_1_7(k, t, ell, k + t + 2, FACT_SCAN_MAX.max(n))?.record(&mut report, "tightness_scan");
    if ell > t {
        report.note("the tightness construction is only claimed for ell <= t");
    }
    Ok(report)
}

/// Families with `ν <= s` above `c(k,s) C(n,k-2)` against `L_m EM(n,k,s,1)`,
/// with the construction `EM(n,k,2s+1,2)` at `n` and over a scan.
pub fn check_theorem_1_11(n: u32, k: u32, s: u32, mode: Mode, opts: &SearchOptions) -> Result<VerificationReport> {
    let thr = threshold(Theorem::T111, n, k, Some(s))?;
    if n < k {
        return Err(Error::Domain(format!("needs n >= k, got n={n} k={k}")));
    }
    let mut report = VerificationReport::new("t111", &mode, opts.budget);
    report.param("n", n).param("k", k).param("s", s).quantity("threshold", thr.value);
    report.note("the threshold drops the o(1) term of an asymptotic statement");
    let bound = move |x: f64| gbinom(x, (k - 1) as i64);
    let mut check =
        BoundCheck::new(n, k, 1, Constraint::MatchingAtMost(s), thr.value, FamilySpec::Em { n, k, s, t: 1 })?;
    check.real = Some((RealForm::Matching { s }, &bound));
    let nu = matching_number(&FamilySpec::Em { n, k, s, t: 1 }.build()?);
    report.quantity("segment_matching_number", nu);
    if nu > s as usize {
        report.report_only("the comparison layer itself has too large a matching");
    }
    run_mode(&check, &mut report, mode, check.layer.len(), opts)?;
    if 2 * s < n {
        let here = compare_row(n, FamilySpec::Em { n, k, s: 2 * s + 1, t: 2 }, SegmentKind::Em { s, t: 1 }, k, 1)?;
        report
            .quantity("tightness_m", here.m)
            .quantity("tightness_shadow", here.left)
            .quantity("tightness_segment", here.right.map_or("-".into(), |v| v.to_string()))
            .quantity("tightness_strict", here.strict);
    }
    scan_fact_matching(k, s, k * (s + 1), MATCHING_SCAN_MAX.max(n))?.record(&mut report, "tightness_scan");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    #[test]
    fn fact_scan_examples() {
        let scan = scan_fact_1_7(3, 1, 1, 8, 12).unwrap();
        let at10 = scan.rows.iter().find(|r| r.n == 10).unwrap();
        assert_eq!((at10.m, at10.left, at10.right), (22, 24, Some(30)));
        assert!(scan.holds_from.unwrap() <= 10);
        let same = scan_fact_matching(3, 1, 10, 10).unwrap();
        assert_eq!(same.rows[0].left, 24);
        assert_eq!(same.rows[0].right, Some(30));
    }

    #[test]
    fn holds_from_tracks_the_tail() {
        let row = |n, strict| ScanRow { n, m: 0, left: 0, right: None, strict };
        let s = Scan::from_rows(vec![row(1, true), row(2, false), row(3, true), row(4, true)]);
        assert_eq!((s.least, s.holds_from), (Some(1), Some(3)));
        let s = Scan::from_rows(vec![row(1, true), row(2, false)]);
        assert_eq!(s.holds_from, None);
    }

    #[test]
    fn intersecting_small_cases() {
        let opts = SearchOptions::default();
        for ell in 1..=2 {
            let r = check_theorem_1_3(7, 3, ell, Mode::Shifted, &opts).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_text());
            assert_eq!(r.quantities["compared"], "2");
            assert_eq!(r.quantities["largest_admissible"], "15");
        }
        let r = check_theorem_1_3(10, 3, 1, Mode::Shifted, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.quantities["near_miss_shadow"], "24");
        assert_eq!(r.quantities["near_miss_segment"], "30");
        assert!(r.witness.is_some());
    }

    #[test]
    fn kk_exhaustive() {
        let r = check_kruskal_katona(6, 3, 1, Mode::Exhaustive, &SearchOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.rows.len(), 21);
    }

    #[test]
    fn budget_surfaces_as_report_only() {
        let tiny = SearchOptions { budget: 2, jobs: 1 };
        let r = check_kruskal_katona(6, 3, 1, Mode::Exhaustive, &tiny).unwrap();
        assert_eq!(r.verdict, Verdict::ReportOnly);
        assert_eq!(r.quantities["budget_exceeded"], "true");
    }

    #[test]
    fn matching_segments_stay_small() {
        let em = FamilySpec::Em { n: 12, k: 3, s: 2, t: 1 }.build().unwrap();
        for m in 0..=em.len() {
            assert!(matching_number(&em.prefix(m).unwrap()) <= 2);
        }
    }
}
