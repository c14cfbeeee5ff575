use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use super::report::{SuiteSummary, Verdict, VerificationReport};
use crate::numerics::format_sci;
use crate::Result;

/// Serialized form of a [`VerificationReport`]. Numbers are decimal strings
/// in scientific notation so no precision is lost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportRecord {
    pub identity_id: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs_value: String,
    pub rhs_candidates: Vec<CandidateRecord>,
    pub diagnostics: DiagnosticsRecord,
    pub tolerance_used: String,
    /// Wall-clock seconds, present only when timings are enabled.
    pub elapsed: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateRecord {
    pub label: String,
    pub value: String,
    pub absolute_deviation: String,
    pub relative_deviation: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticsRecord {
    pub terms_used: u64,
    pub last_term_magnitude: String,
    pub tail_bound: String,
    pub converged: bool,
}

impl From<&VerificationReport> for ReportRecord {
    fn from(r: &VerificationReport) -> Self {
        let d = r.digits;
        ReportRecord {
            identity_id: r.identity_id.clone(),
            parameters: r.parameters.clone(),
            lhs_value: r.lhs_value.render(d),
            rhs_candidates: r
                .rhs_candidates
                .iter()
                .map(|c| CandidateRecord {
                    label: c.label.clone(),
                    value: c.value.render(d),
                    absolute_deviation: format_sci(&c.absolute_deviation, d),
                    relative_deviation: format_sci(&c.relative_deviation, d),
                    verdict: c.verdict,
                })
                .collect(),
            diagnostics: DiagnosticsRecord {
                terms_used: r.diagnostics.terms_used,
                last_term_magnitude: format_sci(&r.diagnostics.last_term_magnitude, d),
                tail_bound: format_sci(&r.diagnostics.tail_bound, d),
                converged: r.diagnostics.converged,
            },
            tolerance_used: format_sci(&r.tolerance_used, d),
            elapsed: r.elapsed.map(|e| e.as_secs_f64()),
            notes: r.notes.clone(),
        }
    }
}

/// One compact JSON object.
pub fn report_json(r: &VerificationReport) -> String {
    serde_json::to_string(&ReportRecord::from(r)).expect("report records always serialize")
}

pub fn parse_report_json(line: &str) -> Result<ReportRecord> {
    serde_json::from_str(line).map_err(|e| crate::Error::InvalidParameter(format!("malformed report: {e}")))
}

fn short(x: &rug::Float) -> String {
    format_sci(x, 3)
}

fn param_line(r: &VerificationReport) -> String {
    r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Human-readable block for one report.
pub fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let status = if r.is_verified() { "verified" } else { "NOT VERIFIED" };
    let _ = writeln!(out, "{}  {}  [{}]", r.identity_id, param_line(r), status);
    let _ = writeln!(out, "  lhs        {}", r.lhs_value.render(r.digits));
    let d = &r.diagnostics;
    let _ = write!(
        out,
        "  terms {}  last |term| {}  tail <= {}  tolerance {}  {}",
        d.terms_used,
        short(&d.last_term_magnitude),
        short(&d.tail_bound),
        short(&r.tolerance_used),
        if d.converged { "converged" } else { "not converged" }
    );
    if let Some(e) = r.elapsed {
        let _ = write!(out, "  {:.3}s", e.as_secs_f64());
    }
    out.push('\n');

    let rows: Vec<[String; 5]> = r
        .rhs_candidates
        .iter()
        .map(|c| {
            [
                c.label.clone(),
                c.value.render(r.digits),
                short(&c.absolute_deviation),
                short(&c.relative_deviation),
                c.verdict.to_string(),
            ]
        })
        .collect();
    let header = ["candidate", "value", "abs dev", "rel dev", "verdict"].map(String::from);
    let mut width = [0usize; 5];
    for row in std::iter::once(&header).chain(&rows) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}

pub fn summary_text(s: &SuiteSummary) -> String {
    let mut out = format!(
        "{} reports, {} verified; candidates: {} exact, {} match, {} match-up-to-sign, {} mismatch; {} not converged\n",
        s.reports, s.verified, s.exact, s.matched, s.match_up_to_sign, s.mismatch, s.non_converged
    );
    if !s.failing_identities.is_empty() {
        let _ = writeln!(out, "failing: {}", s.failing_identities.join(", "));
    }
    out
}

pub fn summary_json(s: &SuiteSummary) -> String {
    #[derive(Serialize)]
    struct Wrapped<'a> {
        summary: &'a SuiteSummary,
    }
    serde_json::to_string(&Wrapped { summary: s }).expect("summaries always serialize")
}

pub fn render_report(r: &VerificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => report_text(r),
        OutputFormat::Json => report_json(r) + "\n",
    }
}

/// All reports followed by the summary.
pub fn render_suite(reports: &[VerificationReport], summary: &SuiteSummary, format: OutputFormat) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&render_report(r, format));
        if format == OutputFormat::Text {
            out.push('\n');
        }
    }
    match format {
        OutputFormat::Text => out.push_str(&summary_text(summary)),
        OutputFormat::Json => {
            out.push_str(&summary_json(summary));
            out.push('\n');
        }
    }
    out
}

/// One line per candidate of each report: which printed forms hold.
pub fn errata_table(reports: &[VerificationReport]) -> String {
    let mut rows = vec![["identity".to_string(), "parameters".into(), "candidate".into(), "verdict".into(), "rel dev".into()]];
    for r in reports {
        for c in &r.rhs_candidates {
            rows.push([r.identity_id.clone(), param_line(r), c.label.clone(), c.verdict.to_string(), short(&c.relative_deviation)]);
        }
    }
    let mut width = [0usize; 5];
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    let mut seen = Vec::new();
    for r in reports {
        for n in &r.notes {
            if !seen.contains(&n) {
                seen.push(n);
                let _ = writeln!(out, "{}: {n}", r.identity_id);
            }
        }
    }
    out
}
