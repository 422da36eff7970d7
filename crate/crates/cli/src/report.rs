//! Reports in two shapes: prose for people and `key = value` lines for
//! scripts. Keys are frozen; see the README for the list.

use std::fmt::Display;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

/// How a command ended, before being turned into an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A mathematical negative: an axiom fails, a group is not an HHG, a
    /// certificate or trace fails.
    Negative,
    /// The input does not meet a hypothesis; the report says which.
    Refused,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Negative => 2,
            Outcome::Refused => 1,
        }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    text: Vec<String>,
    fields: Vec<(String, String)>,
    raw: bool,
}

impl Report {
    pub fn new(command: &str, checks: &str) -> Self {
        let mut r = Report::default();
        r.field("command", command);
        r.field("checks", checks);
        r
    }

    /// Text output is only the lines, for output meant to be saved as a file.
    pub fn raw(&mut self) -> &mut Self {
        self.raw = true;
        self
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.text.push(s.into());
        self
    }

    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    /// A field that also gets its own text line.
    pub fn both(&mut self, key: &str, label: &str, value: impl Display) -> &mut Self {
        let v = value.to_string();
        self.line(format!("{label}: {v}"));
        self.field(key, v)
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                if let Some((_, checks)) = self.fields.iter().find(|(k, _)| k == "checks").filter(|_| !self.raw) {
                    out.push_str(&format!("checks: {checks}\n"));
                }
                for l in &self.text {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Format::Kv => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k} = {}\n", v.replace('\n', "\\n")));
                }
            }
        }
        out
    }
}
