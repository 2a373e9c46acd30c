//! Verification reports and their JSON / CSV / text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::tolerance::ToleranceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// Short name of the property being verified.
    pub anchor: String,
    pub values: BTreeMap<String, Value>,
    pub tol: Option<f64>,
    pub verdict: Outcome,
    /// Why a check was skipped or failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// JSON has no infinities; non-finite numbers are written as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(x.to_string())
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

impl CheckRecord {
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            values: BTreeMap::new(),
            tol: None,
            verdict: Outcome::Skipped,
            reason: None,
        }
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn number(self, key: &str, x: f64) -> Self {
        self.value(key, num(x))
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn pass_if(mut self, ok: bool) -> Self {
        self.verdict = if ok { Outcome::Pass } else { Outcome::Fail };
        self
    }

    pub fn fail(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Outcome::Fail;
        self.reason = Some(reason.into());
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Outcome::Skipped;
        self.reason = Some(reason.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub source: String,
    pub b_mode: String,
    pub n: usize,
    pub nc: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: ToleranceProfile,
    pub version: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub environment: Environment,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (json, csv, text)")),
        }
    }
}

impl VerificationReport {
    pub fn new(environment: Environment, checks: Vec<CheckRecord>) -> Self {
        let mut report = Self {
            environment,
            summary: Summary::default(),
            checks,
        };
        report.recount();
        report
    }

    pub fn recount(&mut self) {
        let count = |o| self.checks.iter().filter(|c| c.verdict == o).count();
        self.summary = Summary {
            total: self.checks.len(),
            pass: count(Outcome::Pass),
            fail: count(Outcome::Fail),
            skipped: count(Outcome::Skipped),
        };
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per check; `values` is embedded as compact JSON.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check_id", "anchor", "verdict", "tol", "reason", "values"])?;
        for c in &self.checks {
            w.write_record([
                c.check_id.as_str(),
                c.anchor.as_str(),
                c.verdict.as_str(),
                &c.tol.map(|t| format!("{t:e}")).unwrap_or_default(),
                c.reason.as_deref().unwrap_or(""),
                &serde_json::to_string(&c.values)?,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let env = &self.environment;
        let mut s = String::new();
        let _ = writeln!(s, "verification report: {}", env.source);
        let _ = writeln!(
            s,
            "n = {}, n_c = {}, (nu1, nu2) = ({}, {}), B mode = {}, seed = {}, trials = {}",
            env.n, env.nc, env.nu1, env.nu2, env.b_mode, env.seed, env.trials
        );
        let _ = writeln!(s);
        for c in &self.checks {
            let tol = c.tol.map(|t| format!(" tol={t:.0e}")).unwrap_or_default();
            let _ = writeln!(s, "[{:<7}] {} ({}){}", c.verdict.as_str().to_uppercase(), c.check_id, c.anchor, tol);
            if let Some(r) = &c.reason {
                let _ = writeln!(s, "          {r}");
            }
            for (k, v) in &c.values {
                let _ = writeln!(s, "          {k} = {v}");
            }
        }
        let m = &self.summary;
        let _ = writeln!(s);
        let _ = writeln!(s, "{} checks: {} pass, {} fail, {} skipped", m.total, m.pass, m.fail, m.skipped);
        s
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

pub fn emit_report(report: &VerificationReport, format: Format, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(report.render(format)?.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Environment {
        Environment {
            source: "test".into(),
            b_mode: "identity".into(),
            n: 3,
            nc: 1,
            nu1: 1,
            nu2: 1,
            seed: 1,
            trials: 0,
            tolerances: ToleranceProfile::default(),
            version: "0".into(),
        }
    }

    #[test]
    fn empty_report_renders_valid_files() {
        let r = VerificationReport::new(env(), vec![]);
        assert_eq!(r.summary.total, 0);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert_eq!(VerificationReport::from_json(&r.to_json().unwrap()).unwrap(), r);
        assert!(r.to_text().contains("0 checks"));
    }

    #[test]
    fn records_round_trip_with_non_finite_values() {
        let checks = vec![
            CheckRecord::new("a", "x").number("v", 0.25).tol(1e-10).pass_if(true),
            CheckRecord::new("b", "y").number("inf", f64::INFINITY).value("list", nums(&[1.0, 2.0])).fail("bad"),
            CheckRecord::new("c", "z").skip("n/a"),
        ];
        let r = VerificationReport::new(env(), checks);
        assert_eq!(r.summary, Summary { total: 3, pass: 1, fail: 1, skipped: 1 });
        assert!(!r.all_passed());
        let back = VerificationReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.check("b").unwrap().values["inf"], Value::from("inf"));
        let text = r.to_csv().unwrap();
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rdr.records().count(), 3);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
        assert_eq!("txt".parse::<Format>().unwrap(), Format::Text);
        assert!("xml".parse::<Format>().is_err());
    }
}
