//! Line-oriented PASS/FAIL reports.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub pass: bool,
    pub property: String,
    /// Closure name, closure pair `A,B`, or `-`.
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, pass: bool, property: &str, subject: &str, detail: impl Into<String>) {
        let subject = if subject.is_empty() { "-" } else { subject };
        self.lines.push(Line {
            pass,
            property: property.to_string(),
            subject: subject.to_string(),
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// `PASS property subject detail`, one per line.
    pub fn machine(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let verdict = if l.pass { "PASS" } else { "FAIL" };
            let _ = write!(s, "{verdict} {} {}", l.property, l.subject);
            if !l.detail.is_empty() {
                let _ = write!(s, " {}", l.detail);
            }
            s.push('\n');
        }
        s
    }

    /// Aligned columns under a timestamped header.
    pub fn human(&self, title: &str, stamp: &str, color: bool) -> String {
        let wp = self.lines.iter().map(|l| l.property.len()).max().unwrap_or(0).max(8);
        let ws = self.lines.iter().map(|l| l.subject.len()).max().unwrap_or(0).max(7);
        let mut s = String::new();
        let _ = writeln!(s, "{title}  ({stamp})");
        let _ = writeln!(s, "{:<6}{:<wp$}  {:<ws$}  detail", "", "property", "subject");
        for l in &self.lines {
            let verdict = match (l.pass, color) {
                (true, true) => "\x1b[32mPASS\x1b[0m",
                (false, true) => "\x1b[31mFAIL\x1b[0m",
                (true, false) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(s, "{verdict}  {:<wp$}  {:<ws$}  {}", l.property, l.subject, l.detail);
        }
        let failed = self.lines.iter().filter(|l| !l.pass).count();
        let _ = writeln!(s, "{} checks, {} failed", self.lines.len(), failed);
        s
    }
}
