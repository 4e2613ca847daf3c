//! Pass/fail reports shared by the law checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One law checked over a number of instances. Only the first counterexample
/// is kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub law: String,
    pub passed: bool,
    pub instances: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(law: impl Into<String>) -> Self {
        Check {
            law: law.into(),
            passed: true,
            instances: 0,
            failures: 0,
            counterexample: None,
        }
    }

    /// Records one instance; `detail` is only rendered when it failed.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.instances += 1;
        } else {
            self.fail(detail());
        }
    }

    pub fn fail(&mut self, counterexample: String) {
        self.instances += 1;
        self.failures += 1;
        self.passed = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    pub fn absorb(&mut self, other: Check) {
        self.instances += other.instances;
        self.failures += other.failures;
        self.passed &= other.passed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, law: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }

    /// Adds `check`, merging it into an existing entry with the same law.
    pub fn push(&mut self, check: Check) {
        match self.checks.iter_mut().find(|c| c.law == check.law) {
            Some(existing) => existing.absorb(check),
            None => self.checks.push(check),
        }
    }

    /// Appends another report's checks, prefixed with its title.
    pub fn extend(&mut self, other: Report) {
        for mut c in other.checks {
            c.law = format!("{}: {}", other.title, c.law);
            self.push(c);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "  [{status}] {} ({} instances", c.law, c.instances)?;
            if c.failures > 0 {
                write!(f, ", {} failing", c.failures)?;
            }
            writeln!(f, ")")?;
            if let Some(cx) = &c.counterexample {
                writeln!(f, "         counterexample: {cx}")?;
            }
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "  => {verdict}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_render() {
        let mut r = Report::new("demo");
        let mut c = Check::new("law");
        c.record(true, || unreachable!());
        c.record(false, || "x".into());
        c.record(false, || "y".into());
        r.push(c);
        let check = r.check("law").unwrap();
        assert_eq!((check.instances, check.failures), (3, 2));
        assert_eq!(check.counterexample.as_deref(), Some("x"));
        assert!(!r.passed());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_string().contains("[FAIL] law (3 instances, 2 failing)"));
    }
}
