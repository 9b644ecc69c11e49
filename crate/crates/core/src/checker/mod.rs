//! Named identity suites with structured, deterministic reports.

mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::fock::{FockElement, TPoly};
use crate::par::Strategy;

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 16] = [
    "leibniz",
    "mxi-ez",
    "g-fusion",
    "regularity",
    "fermion-values",
    "fermion",
    "gl-infinity",
    "central",
    "boson-field",
    "flavors",
    "naturality",
    "iterated-laurent",
    "bf-oracle",
    "bf-consistency",
    "additive",
    "laurent-bracket",
];

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    /// Overrides the suite's own index window.
    pub window: Option<i64>,
    /// Grades `ℓ` of the basis battery, inclusive.
    pub grades: (i64, i64),
    /// Highest `t_k` an input may use.
    pub tmax: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for Config {
    fn default() -> Self {
        Config { window: None, grades: (-3, 3), tmax: 8, seed: 20240613, strategy: Strategy::default() }
    }
}

/// Largest total `t`-degree in the battery.
pub const BATTERY_DEGREE: u32 = 3;

impl Config {
    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.window {
            if !(0..=40).contains(&w) {
                return Err(Error::BadConfig(format!("window {w} outside 0..=40")));
            }
        }
        if self.grades.0 > self.grades.1 {
            return Err(Error::BadConfig(format!("empty grade range {}..{}", self.grades.0, self.grades.1)));
        }
        if self.grades.0 < -12 || self.grades.1 > 12 {
            return Err(Error::BadConfig("grades must lie in -12..12".into()));
        }
        if self.tmax == 0 || self.tmax > 40 {
            return Err(Error::BadConfig(format!("tmax {} outside 1..=40", self.tmax)));
        }
        Ok(())
    }

    pub fn window_or(&self, default: i64) -> i64 {
        self.window.unwrap_or(default)
    }

    /// `T^ℓ · m` for `ℓ` in the grade range and `m` a monic monomial of degree
    /// at most three in `t_1..t_{min(3, tmax)}`.
    pub fn battery(&self) -> Vec<FockElement<Q>> {
        let vars = self.tmax.min(3);
        let mut monos: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..vars {
            let mut next = Vec::new();
            for m in &monos {
                let used: u32 = m.iter().sum();
                for e in 0..=(BATTERY_DEGREE - used) {
                    let mut x = m.clone();
                    x.push(e);
                    next.push(x);
                }
            }
            monos = next;
        }
        let mut out = Vec::new();
        for l in self.grades.0..=self.grades.1 {
            for m in &monos {
                let mut e = m.clone();
                while e.last() == Some(&0) {
                    e.pop();
                }
                out.push(FockElement::graded(l, TPoly::monomial(e, Q::from_integer(1.into()))));
            }
        }
        out
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("window".into(), self.window.map_or("default".into(), |w| w.to_string()));
        m.insert("grades".into(), format!("{}..{}", self.grades.0, self.grades.1));
        m.insert("tmax".into(), self.tmax.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("strategy".into(), format!("{:?}", self.strategy).to_lowercase());
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    /// What the identity says, in words.
    pub anchor: String,
    pub inputs: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Record {
    /// Passing iff `witness` is `None`.
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, inputs: impl Into<String>, witness: Option<String>) -> Self {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        Record { id: id.into(), anchor: anchor.into(), inputs: inputs.into(), status, witness }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    /// Computed quantities worth keeping, e.g. case counts or constants.
    pub notes: BTreeMap<String, String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.passed()).count()
    }

    /// One JSON object per record, then a summary object.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("records serialize"));
            s.push('\n');
        }
        let summary = serde_json::json!({
            "suite": self.suite,
            "config": self.config,
            "notes": self.notes,
            "records": self.records.len(),
            "failures": self.failures(),
            "passed": self.passed(),
        });
        s.push_str(&summary.to_string());
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = write!(s, "{} {}  [{}]", if r.passed() { "PASS" } else { "FAIL" }, r.id, r.inputs);
            if let Some(w) = &r.witness {
                let _ = write!(s, "\n     witness: {w}");
            }
            s.push('\n');
        }
        for (k, v) in &self.notes {
            let _ = writeln!(s, "note {k} = {v}");
        }
        let _ = writeln!(
            s,
            "suite {}: {} records, {} failed, {}",
            self.suite,
            self.records.len(),
            self.failures(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }
}

/// Run one named suite.
pub fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport> {
    cfg.validate()?;
    let (mut records, notes) = match name {
        "leibniz" => suites::leibniz(cfg)?,
        "mxi-ez" => suites::mxi_ez(cfg)?,
        "g-fusion" => suites::g_fusion(cfg)?,
        "regularity" => suites::regularity(cfg)?,
        "fermion-values" => suites::fermion_values(cfg)?,
        "fermion" => suites::fermion(cfg)?,
        "gl-infinity" => suites::gl_infinity(cfg)?,
        "central" => suites::central(cfg)?,
        "boson-field" => suites::boson_field(cfg)?,
        "flavors" => suites::flavors(cfg)?,
        "naturality" => suites::naturality(cfg)?,
        "iterated-laurent" => suites::iterated(cfg)?,
        "bf-oracle" => suites::bf_oracle(cfg)?,
        "bf-consistency" => suites::bf_consistency(cfg)?,
        "additive" => suites::additive(cfg)?,
        "laurent-bracket" => suites::laurent_bracket(cfg)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SuiteReport { suite: name.to_string(), config: cfg.echo(), records, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_shape() {
        let b = Config::default().battery();
        assert_eq!(b.len(), 7 * 20);
        let small = Config { tmax: 1, grades: (0, 0), ..Config::default() }.battery();
        assert_eq!(small.len(), 4);
    }

    #[test]
    fn unknown_and_bad() {
        assert!(matches!(run_suite("nope", &Config::default()), Err(Error::UnknownSuite(_))));
        let bad = Config { grades: (2, 1), ..Config::default() };
        assert!(matches!(run_suite("leibniz", &bad), Err(Error::BadConfig(_))));
    }

    #[test]
    fn cheap_suites_pass_and_repeat() {
        for s in ["leibniz", "fermion-values", "iterated-laurent"] {
            let a = run_suite(s, &Config::default()).unwrap();
            assert!(a.passed(), "{}", a.to_text());
            let b = run_suite(s, &Config::default()).unwrap();
            assert_eq!(a.to_json_lines(), b.to_json_lines());
        }
    }
}
