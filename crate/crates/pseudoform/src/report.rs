//! Deterministic verification reports.
//!
//! A report is the machine-readable outcome of one verification suite: a
//! list of checks, each carrying an identifier, a digest of the inputs that
//! produced it, the measured value (a residual, a mismatch count, or a
//! detected sign), and its tolerance. The JSON form is deterministic for a
//! fixed configuration — wall-clock runtime appears only in the text
//! rendering.

use std::hash::Hasher;

use serde::{Deserialize, Serialize};

/// One verification check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub digest: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// A residual-style check: passes when the value is finite and at most
    /// the tolerance.
    pub fn measure(id: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check {
            id: id.into(),
            digest: String::new(),
            value,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        }
    }

    /// A sign-style check: records the detected sign as the value and passes
    /// when it equals the expected sign.
    pub fn sign(id: impl Into<String>, detected: i8, expected: i8) -> Check {
        Check {
            id: id.into(),
            digest: String::new(),
            value: f64::from(detected),
            tolerance: f64::from(expected),
            pass: detected == expected,
        }
    }

    /// A requirement that a measurement exceed a floor (used when failing to
    /// see a signal is the failure).
    pub fn exceeds(id: impl Into<String>, value: f64, floor: f64) -> Check {
        Check {
            id: id.into(),
            digest: String::new(),
            value,
            tolerance: floor,
            pass: value.is_finite() && value > floor,
        }
    }
}

/// The outcome of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

fn fnv1a_hex(text: &str) -> String {
    let mut hasher = fnv::FnvHasher::default();
    hasher.write(text.as_bytes());
    format!("{:016x}", hasher.finish())
}

impl Report {
    /// Assembles a report: checks are sorted by identifier, each digest is
    /// the FNV-1a hash of the suite, configuration, and check identifier,
    /// and the suite passes iff every check passes.
    pub fn new(
        suite: impl Into<String>,
        config: impl Into<String>,
        mut checks: Vec<Check>,
        runtime_seconds: f64,
    ) -> Report {
        let suite = suite.into();
        let config = config.into();
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        for check in &mut checks {
            check.digest = fnv1a_hex(&format!("{suite}|{config}|{}", check.id));
        }
        let pass = checks.iter().all(|c| c.pass);
        Report {
            suite,
            config,
            checks,
            pass,
            runtime_seconds,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// The human rendering: one line per check plus a summary.
    pub fn render_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = format!("suite: {}\nconfig: {}\n", self.suite, self.config);
        for check in &self.checks {
            let verdict = if check.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{verdict}] {:width$}  value {:>12.5e}  tolerance {:>10.3e}\n",
                check.id, check.value, check.tolerance
            ));
        }
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "result: {verdict} ({} checks in {:.2}s)\n",
            self.checks.len(),
            self.runtime_seconds
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_sorted_and_digested() {
        let report = Report::new(
            "algebra",
            "seed=1",
            vec![
                Check::measure("b/second", 0.0, 1.0),
                Check::measure("a/first", 0.0, 1.0),
            ],
            0.1,
        );
        assert_eq!(report.checks[0].id, "a/first");
        assert_eq!(report.checks[1].id, "b/second");
        assert_eq!(report.checks[0].digest.len(), 16);
        assert!(report.pass);
    }

    #[test]
    fn digests_are_deterministic_and_input_sensitive() {
        let a = Report::new("s", "seed=1", vec![Check::measure("x", 0.0, 1.0)], 0.0);
        let b = Report::new("s", "seed=1", vec![Check::measure("x", 0.5, 1.0)], 9.0);
        let c = Report::new("s", "seed=2", vec![Check::measure("x", 0.0, 1.0)], 0.0);
        assert_eq!(a.checks[0].digest, b.checks[0].digest);
        assert_ne!(a.checks[0].digest, c.checks[0].digest);
    }

    #[test]
    fn failing_check_fails_the_suite() {
        let report = Report::new(
            "s",
            "",
            vec![
                Check::measure("ok", 0.0, 1.0),
                Check::measure("bad", 2.0, 1.0),
            ],
            0.0,
        );
        assert!(!report.pass);
        assert!(report.render_text().contains("[FAIL] bad"));
    }

    #[test]
    fn non_finite_values_fail() {
        assert!(!Check::measure("nan", f64::NAN, 1.0).pass);
        assert!(!Check::measure("inf", f64::INFINITY, f64::INFINITY).pass);
    }

    #[test]
    fn sign_and_exceeds_semantics() {
        assert!(Check::sign("s", -1, -1).pass);
        assert!(!Check::sign("s", 1, -1).pass);
        assert!(Check::exceeds("d", 0.5, 0.1).pass);
        assert!(!Check::exceeds("d", 0.05, 0.1).pass);
    }

    #[test]
    fn json_round_trips() {
        let report = Report::new(
            "maxwell",
            "field=plane-wave",
            vec![Check::measure("maxwell/4d/field-strength", 1e-12, 1e-6)],
            1.5,
        );
        let json = report.to_json().unwrap();
        let back = Report::from_json(&json).unwrap();
        // Runtime is excluded from the stable schema.
        assert_eq!(back.runtime_seconds, 0.0);
        assert_eq!(back.suite, report.suite);
        assert_eq!(back.checks, report.checks);
        assert_eq!(back.pass, report.pass);
        assert!(!json.contains("runtime"));
    }
}
