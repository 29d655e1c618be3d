//! Plain-text family format.
//!
//! ```text
//! # optional comments
//! n=6 k=3
//! 1 2 3
//! 1 2 4
//! ```
//!
//! Members are strictly increasing, space-separated; `#` starts a comment and
//! blank lines are skipped.

use std::fmt;
use std::str::FromStr;

use super::{Family, KSet};
use crate::error::{Error, Result};

impl Family {
    pub fn parse_text(src: &str) -> Result<Family> {
        let mut header: Option<(u32, u32)> = None;
        let mut members = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((n, k)) = header else {
                header = Some(parse_header(line).map_err(err)?);
                continue;
            };
            let mut elems = Vec::with_capacity(k as usize);
            for tok in line.split_whitespace() {
                let e: u32 = tok.parse().map_err(|_| err(format!("not an integer: {tok:?}")))?;
                if e < 1 || e > n {
                    return Err(err(format!("element {e} outside 1..={n}")));
                }
                if elems.last().is_some_and(|&p| p >= e) {
                    return Err(err("elements must be strictly increasing".into()));
                }
                elems.push(e);
            }
            if elems.len() != k as usize {
                return Err(err(format!("expected {k} elements, found {}", elems.len())));
            }
            members.push(KSet::from_elems(elems).map_err(|e| err(e.to_string()))?);
        }
        let (n, k) = header.ok_or(Error::Parse { line: 0, msg: "missing `n=<n> k=<k>` header".into() })?;
        Family::new(n, k, members).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    }

    /// The text form, header first, one member per line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_header(line: &str) -> std::result::Result<(u32, u32), String> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| format!("bad header token {tok:?}"))?;
        let val: u32 = val.parse().map_err(|_| format!("bad value in {tok:?}"))?;
        match key {
            "n" => n = Some(val),
            "k" => k = Some(val),
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) if n <= super::MAX_N && k <= n => Ok((n, k)),
        (Some(n), Some(k)) => Err(format!("need k <= n <= {}, got n={n} k={k}", super::MAX_N)),
        _ => Err("header must give both n and k".into()),
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} k={}", self.n(), self.k())?;
        for a in self {
            let line: Vec<String> = a.elems().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::parse_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "# triangle\nn=4 k=2\n\n1 2\n2 3 # edge\n1 3\n";
        let f: Family = src.parse().unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_text(), "n=4 k=2\n1 2\n1 3\n2 3\n");
        assert_eq!(f.to_text().parse::<Family>().unwrap(), f);
        let empty: Family = "n=5 k=0\n".parse().unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("n=4 k=2\n1 2\n3 3\n", 3),
            ("n=4 k=2\n1 5\n", 2),
            ("n=4 k=2\n1 2 3\n", 2),
            ("n=4\n", 1),
            ("n=4 k=2\n2 x\n", 2),
            ("\n\nn=4 k=9\n", 3),
        ];
        for (src, line) in cases {
            match Family::parse_text(src) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
                other => panic!("{src:?} gave {other:?}"),
            }
        }
        assert!(Family::parse_text("# nothing\n").is_err());
    }
}
