use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::Mode;
use crate::setfamily::Family;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "REPORT-ONLY")]
    ReportOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ReportOnly => "REPORT-ONLY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeInfo {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<String>,
    pub budget: String,
}

/// Outcome of a check. All integers are exact decimal strings; maps are
/// ordered so the serialised form is byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub mode: ModeInfo,
    pub quantities: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<BTreeMap<String, String>>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: &str, mode: &Mode, budget: u64) -> Self {
        let (seed, trials) = match *mode {
            Mode::Randomized { seed, trials } => (Some(seed.to_string()), Some(trials.to_string())),
            _ => (None, None),
        };
        VerificationReport {
            schema: SCHEMA_VERSION,
            check: check.to_string(),
            params: BTreeMap::new(),
            mode: ModeInfo { name: mode.name(), seed, trials, budget: budget.to_string() },
            quantities: BTreeMap::new(),
            rows: Vec::new(),
            verdict: Verdict::Pass,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn quantity(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.quantities.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row<K: ToString, V: ToString>(&mut self, cells: impl IntoIterator<Item = (K, V)>) -> &mut Self {
        self.rows.push(cells.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Marks the report failed; the first witness recorded is kept.
    pub fn fail(&mut self, witness: &Family) -> &mut Self {
        self.verdict = Verdict::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness.to_text());
        }
        self
    }

    /// Downgrades a passing report; a failure stays a failure.
    pub fn report_only(&mut self, why: impl Into<String>) -> &mut Self {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::ReportOnly;
        }
        self.notes.push(why.into());
        self
    }

    /// Attaches an illustrative family without changing the verdict.
    pub fn example(&mut self, family: &Family) -> &mut Self {
        if self.witness.is_none() {
            self.witness = Some(family.to_text());
        }
        self
    }

    /// FAIL carries a witness and a randomized run carries its seed.
    pub fn is_well_formed(&self) -> bool {
        (self.verdict != Verdict::Fail || self.witness.is_some())
            && (self.mode.name != "randomized" || self.mode.seed.is_some())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One line per quantity, then rows, then notes.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}", self.check, self.verdict);
        for (k, v) in &self.params {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        for (k, v) in &self.quantities {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("  | {}\n", cells.join(" ")));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str("  witness:\n");
            for line in w.lines() {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out
    }

    /// Rows as CSV with the union of row keys as header.
    pub fn to_csv(&self) -> String {
        let mut keys: Vec<&String> = self.rows.iter().flat_map(|r| r.keys()).collect();
        keys.sort();
        keys.dedup();
        if keys.is_empty() {
            let mut out = String::from("quantity,value\n");
            for (k, v) in &self.quantities {
                out.push_str(&format!("{k},{v}\n"));
            }
            return out;
        }
        let mut out = keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = keys.iter().map(|k| row.get(*k).map(String::as_str).unwrap_or("")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = VerificationReport::new("kk", &Mode::Randomized { seed: 7, trials: 3 }, 100);
        r.param("n", 6).quantity("violations", 0u128).row([("m", "1"), ("shadow", "3")]);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["verdict"], "PASS");
        assert_eq!(json["mode"]["seed"], "7");
        assert_eq!(json["quantities"]["violations"], "0");
        assert!(json.get("witness").is_none());
        assert!(r.is_well_formed());
        let f = Family::complete(3, 2).unwrap();
        r.fail(&f).report_only("ignored for failed reports");
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.as_deref(), Some("n=3 k=2\n1 2\n1 3\n2 3\n"));
        assert!(r.to_csv().starts_with("m,shadow\n"));
    }
}
