//! Pass/fail reports shared by the structural checks.

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub id: String,
    /// The identity being checked, as a formula.
    pub anchor: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            lines: Vec::new(),
        }
    }

    /// Records a check; `witness` is `None` when it passed.
    pub fn check(&mut self, id: &str, anchor: &str, witness: Option<String>) {
        self.lines.push(CheckLine {
            id: id.into(),
            anchor: anchor.into(),
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.passed)
    }

    pub fn line(&self, id: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.id == id)
    }

    /// The checks in a report are guaranteed to pass on valid input, so a
    /// failing line is surfaced as [`Error::TheoremViolation`].
    pub fn into_result(self) -> Result<Report, Error> {
        match self.first_failure() {
            Some(l) => Err(Error::TheoremViolation(format!(
                "{}: {} fails at {}",
                self.title,
                l.anchor,
                l.witness.as_deref().unwrap_or("?")
            ))),
            None => Ok(self),
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("### {}\n\n| condition | formula | result | witness |\n|---|---|---|---|\n", self.title);
        for l in &self.lines {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                l.id,
                l.anchor.replace('|', "\\|"),
                if l.passed { "pass" } else { "FAIL" },
                l.witness.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_and_failure() {
        let mut r = Report::new("demo");
        r.check("one", "x = x", None);
        r.check("two", "|x| = 1", Some("x=0".into()));
        assert!(!r.all_passed());
        let md = r.to_markdown();
        assert!(md.contains("| two | \\|x\\| = 1 | FAIL | x=0 |"));
        assert!(matches!(r.into_result(), Err(Error::TheoremViolation(_))));
    }
}
