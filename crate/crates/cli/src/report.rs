//! Reports: an ordered list of stages plus a verdict, rendered either as
//! aligned plain-text tables or as JSON.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Flagged,
    Failed,
    Error,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Flagged => "flagged",
            Status::Failed => "failed",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Stage {
    pub fn new(name: &str, status: Status, payload: Value, text: Vec<String>) -> Self {
        Stage {
            name: name.to_string(),
            status,
            payload,
            text,
        }
    }
}

/// Process exit codes.
pub mod exit {
    pub const DECIDED: i32 = 0;
    pub const INCONCLUSIVE: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub stages: Vec<Stage>,
    pub verdict: String,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            stages: Vec::new(),
            verdict: String::new(),
            exit_code: exit::DECIDED,
        }
    }

    pub fn push(&mut self, stage: Stage) {
        self.stages.push(stage);
    }

    pub fn finish(mut self, verdict: impl Into<String>, exit_code: i32) -> Self {
        self.verdict = verdict.into();
        self.exit_code = exit_code;
        self
    }

    /// Appends an error stage naming where the problem lies and closes the
    /// report.
    pub fn fail(mut self, stage: &str, path: &str, message: &str, exit_code: i32) -> Self {
        self.push(Stage::new(
            stage,
            Status::Error,
            serde_json::json!({ "path": path, "message": message }),
            vec![format!("at {path}: {message}")],
        ));
        let verdict = if exit_code == exit::CONFIG_ERROR {
            "CONFIG_ERROR"
        } else {
            "INTERNAL_ERROR"
        };
        self.finish(verdict, exit_code)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_machine(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("skewpoisson {} ({})\n", self.command, self.version);
        for stage in &self.stages {
            out.push_str(&format!("\n== {} [{}]\n", stage.name, stage.status.tag()));
            for line in &stage.text {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str(&format!("\nverdict: {}\n", self.verdict));
        out
    }
}

/// Left-aligned columns separated by two spaces, with a dashed rule under
/// the header.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> Vec<String> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(headers.to_vec())];
    out.push(line(
        widths
            .iter()
            .map(|&w| "-".repeat(w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    for row in rows {
        out.push(line(row.iter().map(String::as_str).collect()));
    }
    out
}
