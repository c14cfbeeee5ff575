use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::exactcomb::ExactVerdict;
use crate::numerics::{format_sci, HpReal, SummationDiagnostics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Exact,
    Match,
    MatchUpToSign,
    Mismatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Exact => "exact",
            Verdict::Match => "match",
            Verdict::MatchUpToSign => "match-up-to-sign",
            Verdict::Mismatch => "mismatch",
        }
    }

    pub fn is_match(self) -> bool {
        self != Verdict::Mismatch
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<ExactVerdict> for Verdict {
    fn from(v: ExactVerdict) -> Self {
        match v {
            ExactVerdict::Exact => Verdict::Exact,
            ExactVerdict::UpToSign => Verdict::MatchUpToSign,
            ExactVerdict::Mismatch => Verdict::Mismatch,
        }
    }
}

/// A side of an identity: a rational from exact arithmetic or a real.
#[derive(Clone, Debug, PartialEq)]
pub enum ReportValue {
    Exact(Rational),
    Real(HpReal),
}

impl ReportValue {
    pub fn render(&self, digits: u32) -> String {
        match self {
            ReportValue::Exact(q) => q.to_string(),
            ReportValue::Real(x) => format_sci(x, digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ReportValue::Exact(q) => q.to_f64(),
            ReportValue::Real(x) => x.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhsCandidate {
    pub label: String,
    pub value: ReportValue,
    pub absolute_deviation: HpReal,
    pub relative_deviation: HpReal,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity_id: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs_value: ReportValue,
    pub rhs_candidates: Vec<RhsCandidate>,
    pub diagnostics: SummationDiagnostics,
    pub tolerance_used: HpReal,
    pub elapsed: Option<Duration>,
    /// Digits used when rendering numbers.
    pub digits: u32,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Converged with at least one supporting candidate.
    pub fn is_verified(&self) -> bool {
        self.diagnostics.converged && self.rhs_candidates.iter().any(|c| c.verdict.is_match())
    }

    pub fn candidate(&self, label: &str) -> Option<&RhsCandidate> {
        self.rhs_candidates.iter().find(|c| c.label == label)
    }

    /// Labels of the candidates that agree with the left side.
    pub fn matching(&self) -> Vec<&str> {
        self.rhs_candidates.iter().filter(|c| c.verdict.is_match()).map(|c| c.label.as_str()).collect()
    }
}

/// Exact candidate with zero deviations when it agrees.
pub fn exact_candidate(label: &str, lhs: &Rational, value: Rational, verdict: Verdict, bits: u32) -> RhsCandidate {
    let diff = Rational::from(lhs - &value).abs();
    let abs = Float::with_val(bits, &diff);
    let rel = if value == 0 {
        abs.clone()
    } else {
        Float::with_val(bits, &diff / Rational::from(value.abs_ref()))
    };
    RhsCandidate { label: label.to_string(), value: ReportValue::Exact(value), absolute_deviation: abs, relative_deviation: rel, verdict }
}

/// Numeric comparison: a match when `|L - R| <= tolerance |R| + allowance`,
/// where `allowance` is the sum of the tail bounds of both sides; the same
/// test against `-R` gives a sign match.
pub fn numeric_candidate(label: &str, lhs: &HpReal, value: HpReal, tolerance: &HpReal, allowance: &HpReal) -> RhsCandidate {
    let bits = lhs.prec().max(value.prec());
    let abs = Float::with_val(bits, lhs - &value).abs();
    let scale = Float::with_val(bits, value.abs_ref());
    let rel = if scale.is_zero() { abs.clone() } else { Float::with_val(bits, &abs / &scale) };
    let limit = Float::with_val(bits, tolerance * &scale) + allowance;
    let verdict = if abs <= limit {
        Verdict::Match
    } else if Float::with_val(bits, lhs + &value).abs() <= limit {
        Verdict::MatchUpToSign
    } else {
        Verdict::Mismatch
    };
    RhsCandidate {
        label: label.to_string(),
        value: ReportValue::Real(value),
        absolute_deviation: abs,
        relative_deviation: rel,
        verdict,
    }
}

/// Counts over a set of reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteSummary {
    pub reports: usize,
    pub verified: usize,
    pub exact: usize,
    #[serde(rename = "match")]
    pub matched: usize,
    pub match_up_to_sign: usize,
    pub mismatch: usize,
    pub non_converged: usize,
    /// Identities with some report that is not verified.
    pub failing_identities: Vec<String>,
}

impl SuiteSummary {
    pub fn from_reports(reports: &[VerificationReport]) -> Self {
        let mut s = SuiteSummary { reports: reports.len(), ..Default::default() };
        for r in reports {
            for c in &r.rhs_candidates {
                match c.verdict {
                    Verdict::Exact => s.exact += 1,
                    Verdict::Match => s.matched += 1,
                    Verdict::MatchUpToSign => s.match_up_to_sign += 1,
                    Verdict::Mismatch => s.mismatch += 1,
                }
            }
            if !r.diagnostics.converged {
                s.non_converged += 1;
            }
            if r.is_verified() {
                s.verified += 1;
            } else if !s.failing_identities.contains(&r.identity_id) {
                s.failing_identities.push(r.identity_id.clone());
            }
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.failing_identities.is_empty() {
            0
        } else {
            1
        }
    }
}
