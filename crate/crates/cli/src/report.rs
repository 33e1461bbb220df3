//! Structured-text reports: a header, `[section]` blocks of `key = value`
//! lines and a final verdict.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

pub struct Report {
    text: String,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# isospec report");
        let _ = writeln!(text, "command = {command}");
        let _ = writeln!(text, "seed = {seed}");
        Self { text }
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        let _ = writeln!(self.text, "\n[{name}]");
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    /// Appends preformatted lines (indented by two spaces).
    pub fn block(&mut self, body: &str) -> &mut Self {
        for line in body.lines() {
            let _ = writeln!(self.text, "  {line}");
        }
        self
    }

    pub fn finish(mut self, verdict: Verdict) -> String {
        let _ = writeln!(self.text, "\nverdict = {}", verdict.as_str());
        self.text
    }
}

/// Scientific notation with a fixed number of digits, so reports are
/// stable under reformatting.
pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}
