use crate::error::{Error, Result};

/// Generalised binomial `y (y-1) ... (y-r+1) / r!`; zero for `r < 0`.
pub fn gbinom(y: f64, r: i64) -> f64 {
    if r < 0 {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (y - i as f64) / (i + 1) as f64)
}

/// A size expressed as a function of a real parameter `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealForm {
    /// `C(x,k)`.
    Full,
    /// `C(x-1,k-1)`.
    Star,
    /// `C(x-t,k-t)`.
    TStar { t: u32 },
    /// `C(x,k) - C(x-s,k)`.
    Matching { s: u32 },
    /// `C(x,k) - Σ_{j<t} C(s,j) C(x-s,k-j)`.
    Em { s: u32, t: u32 },
    /// `C(x,k) - C(x-s,k) - C(x-s-t,k-1)`.
    Hm { s: u32, t: u32 },
}

impl RealForm {
    pub fn value(&self, x: f64, k: u32) -> f64 {
        let k = k as i64;
        match *self {
            RealForm::Full => gbinom(x, k),
            RealForm::Star => gbinom(x - 1.0, k - 1),
            RealForm::TStar { t } => gbinom(x - t as f64, k - t as i64),
            RealForm::Matching { s } => gbinom(x, k) - gbinom(x - s as f64, k),
            RealForm::Em { s, t } => {
                gbinom(x, k) - (0..t as i64).map(|j| gbinom(s as f64, j) * gbinom(x - s as f64, k - j)).sum::<f64>()
            }
            RealForm::Hm { s, t } => gbinom(x, k) - gbinom(x - s as f64, k) - gbinom(x - (s + t) as f64, k - 1),
        }
    }

    /// Left end of the interval on which the form is increasing: each form
    /// is a nonnegative combination of `C(x-c, r)`, increasing once `x-c >= r-1`.
    fn start(&self, k: u32) -> f64 {
        let k = k as f64;
        let tail = match *self {
            RealForm::Full | RealForm::Star | RealForm::TStar { .. } => 0.0,
            RealForm::Matching { s } => s as f64 + k - 2.0,
            RealForm::Em { s, t } => s as f64 + k - t as f64 - 1.0,
            RealForm::Hm { s, t } => (s + t) as f64 + k - 2.0,
        };
        tail.max(k)
    }

    fn check(&self, k: u32) -> Result<()> {
        let ok = match *self {
            RealForm::Full => k >= 1,
            RealForm::Star => k >= 2,
            RealForm::TStar { t } => t < k,
            RealForm::Matching { s } => s >= 1 && k >= 2,
            RealForm::Em { s, t } => t < k && t <= s,
            RealForm::Hm { s, t } => s >= 1 && k >= 2 && (s >= 2 || t >= 1),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self:?} is constant in x for k={k}")))
        }
    }
}

/// The real `x` with `form(x) = m` on the increasing branch, to within `1e-9`.
pub fn solve_real_size(m: u128, k: u32, form: RealForm) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("no monotone branch reaches size 0".into()));
    }
    form.check(k)?;
    let target = m as f64;
    let f = |x: f64| form.value(x, k);
    let mut lo = form.start(k);
    if f(lo) > target {
        return Err(Error::Domain(format!("size {m} lies below the increasing branch of {form:?}")));
    }
    let mut hi = lo + 1.0;
    while f(hi) < target {
        lo = hi;
        hi = lo + 2.0 * (hi - form.start(k)).max(1.0);
        if !hi.is_finite() {
            return Err(Error::Overflow("real size".into()));
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let x = solve_real_size(84, 3, RealForm::Full).unwrap();
        assert!((x - 9.0).abs() < 1e-9);
        let x = solve_real_size(22, 3, RealForm::Matching { s: 1 }).unwrap();
        let exact = 1.0 + (1.0 + 177f64.sqrt()) / 2.0;
        assert!((x - exact).abs() < 1e-9, "{x} vs {exact}");
        let x = solve_real_size(22, 3, RealForm::Em { s: 1, t: 1 }).unwrap();
        assert!((x - exact).abs() < 1e-9);
        for t in 1..4 {
            let x = solve_real_size(1, 5, RealForm::TStar { t }).unwrap();
            assert!((x - 5.0).abs() < 1e-9);
        }
        assert!(solve_real_size(0, 3, RealForm::Full).is_err());
        assert!(solve_real_size(5, 3, RealForm::Em { s: 3, t: 3 }).is_err());
    }

    #[test]
    fn integer_points_recovered() {
        let forms = [
            RealForm::Full,
            RealForm::Star,
            RealForm::TStar { t: 2 },
            RealForm::Matching { s: 2 },
            RealForm::Em { s: 3, t: 2 },
            RealForm::Hm { s: 2, t: 1 },
        ];
        for form in forms {
            for x in 12..40 {
                let m = form.value(x as f64, 4).round() as u128;
                let got = solve_real_size(m, 4, form).unwrap();
                assert!((got - x as f64).abs() < 1e-9, "{form:?} x={x} got {got}");
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(gbinom(5.0, 2), 10.0);
        assert_eq!(gbinom(2.0, 3), 0.0);
        assert_eq!(gbinom(-1.0, 2), 1.0);
        assert_eq!(gbinom(3.5, 0), 1.0);
        assert_eq!(gbinom(3.5, -1), 0.0);
    }
}
