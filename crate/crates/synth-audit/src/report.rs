//! Experiment reports: human-readable tables plus a machine section.
//!
//! The report body is a pure function of the experiment output; timestamps
//! and other wall-clock metadata live in header comment lines above the body
//! marker, so reruns with the same seed produce byte-identical bodies. The
//! machine section embeds the full payload as JSON, making reports
//! self-contained for plot regeneration.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::attack::{AttackKind, ExperimentOutcome, MethodSummary, SweepPoint};
use crate::error::{Error, Result};
use crate::selection::SelectionMethod;

pub const BODY_MARKER: &str = "=== report ===";
const MACHINE_MARKER: &str = "## machine";

/// One AUC entry: a (method, record, attack, sweep-value) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEntry {
    pub method: SelectionMethod,
    pub attack: AttackKind,
    /// Swept parameter value, when the report belongs to a sweep.
    pub value: Option<f64>,
    pub target_row: usize,
    pub auc: f64,
    pub scores: Vec<f64>,
    pub labels: Vec<u8>,
}

/// Group statistics for one (method, attack, value) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupStat {
    pub method: SelectionMethod,
    pub attack: AttackKind,
    pub value: Option<f64>,
    pub mean_auc: f64,
    pub std_auc: f64,
    pub n_records: usize,
}

/// Full report payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// `attack`, `sweep:epsilon`, `sweep:k`, or `sweep:metric`.
    pub title: String,
    /// Resolved configuration, master seed included.
    pub config_echo: serde_json::Value,
    pub entries: Vec<ReportEntry>,
    pub groups: Vec<GroupStat>,
}

fn entries_of(outcome: &ExperimentOutcome, value: Option<f64>) -> Vec<ReportEntry> {
    outcome
        .results
        .iter()
        .map(|r| ReportEntry {
            method: r.method,
            attack: r.attack,
            value,
            target_row: r.target_row,
            auc: r.outcome.auc,
            scores: r.outcome.scores.clone(),
            labels: r.outcome.labels.clone(),
        })
        .collect()
}

fn groups_of(summaries: &[MethodSummary], value: Option<f64>) -> Vec<GroupStat> {
    summaries
        .iter()
        .map(|s| GroupStat {
            method: s.method,
            attack: s.attack,
            value,
            mean_auc: s.mean_auc,
            std_auc: s.std_auc,
            n_records: s.n_records,
        })
        .collect()
}

impl ExperimentReport {
    pub fn from_outcome(config_echo: serde_json::Value, outcome: &ExperimentOutcome) -> Self {
        Self {
            title: "attack".into(),
            config_echo,
            entries: entries_of(outcome, None),
            groups: groups_of(&outcome.summaries, None),
        }
    }

    pub fn from_sweep(
        kind: &str,
        config_echo: serde_json::Value,
        points: &[SweepPoint],
    ) -> Self {
        let mut entries = Vec::new();
        let mut groups = Vec::new();
        for point in points {
            entries.extend(entries_of(&point.outcome, Some(point.value)));
            groups.extend(groups_of(&point.outcome.summaries, Some(point.value)));
        }
        Self {
            title: format!("sweep:{kind}"),
            config_echo,
            entries,
            groups,
        }
    }

    /// Deterministic report body: config echo, per-record table, group table,
    /// machine JSON. No timestamps.
    pub fn render_body(&self) -> String {
        let mut out = String::new();
        out.push_str(BODY_MARKER);
        out.push('\n');
        out.push_str(&format!("experiment: {}\n\n", self.title));

        out.push_str("## config\n");
        out.push_str(
            &serde_json::to_string_pretty(&self.config_echo).expect("config echo serializes"),
        );
        out.push_str("\n\n");

        out.push_str("## results\n");
        out.push_str("method\tattack\tvalue\ttarget_row\tauc\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.method.name(),
                e.attack.name(),
                fmt_value(e.value),
                e.target_row,
                e.auc
            ));
        }
        out.push('\n');

        out.push_str("## summary\n");
        out.push_str("method\tattack\tvalue\tmean_auc\tstd_auc\tn\n");
        for g in &self.groups {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                g.method.name(),
                g.attack.name(),
                fmt_value(g.value),
                g.mean_auc,
                g.std_auc,
                g.n_records
            ));
        }
        out.push('\n');

        out.push_str(MACHINE_MARKER);
        out.push('\n');
        out.push_str(&serde_json::to_string(self).expect("report serializes"));
        out.push('\n');
        out
    }

    /// Header (wall-clock metadata allowed) plus body.
    pub fn render(&self, header_note: &str) -> String {
        let mut out = String::new();
        out.push_str("# synth-audit report\n");
        if !header_note.is_empty() {
            for line in header_note.lines() {
                out.push_str(&format!("# {line}\n"));
            }
        }
        out.push_str(&self.render_body());
        out
    }

    pub fn write(&self, path: &Path, header_note: &str) -> Result<()> {
        std::fs::write(path, self.render(header_note))?;
        Ok(())
    }

    /// Body portion of rendered report text (everything from the marker on).
    pub fn body_of(text: &str) -> Option<&str> {
        text.find(BODY_MARKER).map(|i| &text[i..])
    }

    /// Re-read a report from its machine section.
    pub fn parse(text: &str) -> Result<Self> {
        let at = text
            .find(MACHINE_MARKER)
            .ok_or_else(|| Error::InvalidConfig("report has no machine section".into()))?;
        let json = text[at + MACHINE_MARKER.len()..].trim();
        serde_json::from_str(json)
            .map_err(|e| Error::InvalidConfig(format!("bad machine section: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|_| Error::MissingFile(path.display().to_string()))?;
        Self::parse(&text)
    }

    /// Recompute group statistics from entries; used to verify report
    /// integrity.
    pub fn recomputed_groups(&self) -> Vec<GroupStat> {
        let mut keys: Vec<(SelectionMethod, AttackKind, Option<f64>)> = Vec::new();
        for e in &self.entries {
            let key = (e.method, e.attack, e.value);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.into_iter()
            .map(|(method, attack, value)| {
                let aucs: Vec<f64> = self
                    .entries
                    .iter()
                    .filter(|e| e.method == method && e.attack == attack && e.value == value)
                    .map(|e| e.auc)
                    .collect();
                let n = aucs.len() as f64;
                let mean = aucs.iter().sum::<f64>() / n;
                let var = aucs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
                GroupStat {
                    method,
                    attack,
                    value,
                    mean_auc: mean,
                    std_auc: var.sqrt(),
                    n_records: aucs.len(),
                }
            })
            .collect()
    }
}

fn fmt_value(v: Option<f64>) -> String {
    match v {
        None => "-".into(),
        Some(x) if x.is_infinite() => "inf".into(),
        Some(x) => format!("{x}"),
    }
}
