use std::fmt::Write as _;

use apsieve_core::classifier::{Elimination, TypeReport, Verdict};
use apsieve_core::psimod::ClassCondition;
use apsieve_core::{SpaceType, Window};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

/// One row of a report.
#[derive(Debug, Clone, Serialize)]
pub struct TypeEntry {
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub cohomology_degrees: Vec<u32>,
    pub verdict: String,
    pub reason: Option<String>,
    pub certificate: Option<Elimination>,
    pub window: Option<Window>,
    pub valuations: Option<Vec<ClassCondition>>,
    pub case: Option<u8>,
    pub corroborating: Vec<String>,
}

impl TypeEntry {
    pub fn from_report(r: &TypeReport) -> Self {
        let (verdict, reason, certificate) = match &r.verdict {
            Verdict::Survives => ("survives", None, None),
            Verdict::QuasiRegular => ("quasi-regular", None, None),
            Verdict::Eliminated(e) => ("eliminated", Some(format!("{:?}", e.stage())), Some(e.clone())),
        };
        let psi = r.psi_certificate();
        TypeEntry {
            space: r.space.clone(),
            cohomology_degrees: r.space.cohomology_degrees(),
            verdict: verdict.into(),
            reason,
            certificate,
            window: psi.map(|c| c.window),
            valuations: psi.map(|c| c.report.classes.clone()),
            case: r.case.map(|c| c.number()),
            corroborating: r.corroborating.iter().map(|e| e.summary()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub types: Vec<TypeEntry>,
    pub psi_uncertified: Vec<SpaceType>,
    pub discrepancies: Vec<String>,
    /// Command-specific payload.
    pub data: Value,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, config: &RunConfig) -> Self {
        ReportDocument {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            types: Vec::new(),
            psi_uncertified: Vec::new(),
            discrepancies: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn sort_types(&mut self) {
        self.types.sort_by(|a, b| a.space.halves().cmp(b.space.halves()));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} {}\n", self.tool, self.command);
        let _ = writeln!(out, "version {}; p = {}, rank = {}, max half-degree = {}, window policy = {:?}, oracle = {}\n",
            self.version, self.config.p, self.config.rank, self.config.max_half_degree,
            self.config.window_policy, self.config.oracle);
        if !self.types.is_empty() {
            out.push_str("| type | degrees | verdict | reason | window | also |\n");
            out.push_str("|---|---|---|---|---|---|\n");
            for t in &self.types {
                let degrees: Vec<String> = t.cohomology_degrees.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    t.space,
                    degrees.join(", "),
                    t.verdict,
                    t.reason.as_deref().unwrap_or(""),
                    t.window.map(|w| w.to_string()).unwrap_or_default(),
                    t.corroborating.join("; ")
                );
            }
            out.push('\n');
        }
        if !self.data.is_null() {
            out.push_str("## Data\n\n```json\n");
            out.push_str(&serde_json::to_string_pretty(&self.data).expect("data serializes"));
            out.push_str("\n```\n\n");
        }
        out.push_str("## psi_uncertified\n\n");
        if self.psi_uncertified.is_empty() {
            out.push_str("none\n\n");
        }
        for t in &self.psi_uncertified {
            let _ = writeln!(out, "- {t}");
        }
        out.push_str("\n## Discrepancies\n\n");
        if self.discrepancies.is_empty() {
            out.push_str("none\n");
        }
        for d in &self.discrepancies {
            let _ = writeln!(out, "- {d}");
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            crate::config::OutputFormat::Json => self.to_json(),
            crate::config::OutputFormat::Markdown => self.to_markdown(),
        }
    }
}
