use std::collections::BTreeMap;

use super::config::{RunConfig, DEFAULT_K_BOUND, DEFAULT_TOLERANCE};
use super::registry::{params, run_identity};
use super::report::{SuiteSummary, VerificationReport};
use crate::exec::map_slice;
use crate::Result;

/// One grid point with the tolerance and series bound its criterion states.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteEntry {
    pub identity: &'static str,
    pub params: BTreeMap<String, String>,
    pub tolerance: Option<f64>,
    pub k_bound: Option<u64>,
}

impl SuiteEntry {
    fn new(identity: &'static str, params: BTreeMap<String, String>) -> Self {
        SuiteEntry { identity, params, tolerance: None, k_bound: None }
    }

    fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    fn k_bound(mut self, k: u64) -> Self {
        self.k_bound = Some(k);
        self
    }

    /// The entry's settings replace only values still at their defaults, so
    /// an explicit tolerance or kBound always wins.
    pub fn config_for(&self, base: &RunConfig) -> RunConfig {
        let mut c = base.clone();
        if let Some(t) = self.tolerance {
            if base.tolerance == DEFAULT_TOLERANCE {
                c.tolerance = t;
            }
        }
        if let Some(k) = self.k_bound {
            if base.k_bound == DEFAULT_K_BOUND {
                c.k_bound = k;
            }
        }
        c
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn abc(id: &'static str, a: impl ToString, b: impl ToString, c: impl ToString) -> SuiteEntry {
    SuiteEntry::new(id, params([("a", &s(a)), ("b", &s(b)), ("c", &s(c))]))
}

/// Real `(a, b, c)` with `1 + a/2 - b - c >= 0.3`.
pub const HYPER_GRID: &[(&str, &str, &str)] = &[
    ("0.5", "0.1", "-0.4"),
    ("0.5", "0.1", "0.2"),
    ("0.5", "0.35", "-0.4"),
    ("0.5", "0.35", "0.2"),
    ("1", "0.1", "-0.4"),
    ("1", "0.1", "0.2"),
    ("1", "0.35", "-0.4"),
    ("1", "0.35", "0.2"),
    ("1.75", "0.1", "-0.4"),
    ("1.75", "0.1", "0.2"),
    ("1.75", "0.35", "-0.4"),
    ("1.75", "0.35", "0.2"),
    ("2.5", "0.1", "-0.4"),
    ("2.5", "0.1", "0.2"),
    ("2.5", "0.35", "-0.4"),
    ("2.5", "0.35", "0.2"),
    ("3.2", "0.1", "-0.4"),
    ("3.2", "0.1", "0.2"),
    ("3.2", "0.35", "-0.4"),
    ("3.2", "0.35", "0.2"),
    ("1", "0.6", "0.6"),
    ("2.5", "-0.7", "1.2"),
];

/// `(q, a, b, c)` with `|q sqrt(a) / (b c)| <= 0.5`.
pub const Q_GRID: &[(&str, &str, &str, &str)] = &[
    ("0.1", "0.04", "0.3", "0.5"),
    ("0.2", "0.09", "0.6", "0.75"),
    ("0.3", "0.25", "0.8", "0.9"),
    ("0.5", "0.16", "0.7", "0.6"),
    ("0.05", "0.5", "0.2", "0.4"),
    ("0.4", "0.01", "0.3", "0.3"),
    ("0.7", "0.36", "1.5", "1.2"),
    ("0.9", "0.81", "2", "1.5"),
    ("0.25", "1.44", "1.1", "0.9"),
    ("0.6", "2.25", "-1.5", "-2"),
    ("0.15", "0.64", "0.5", "-0.8"),
];

/// `(num, den, gamma)` for the telescoping check.
pub const TELESCOPE_GRID: &[(&str, &str, &str)] = &[
    ("3", "5", "1"),
    ("5", "3", "1"),
    ("6,6,2,2", "7,5,3,3", "1.5"),
    ("4,2,7", "3,5,5", "1.25"),
    ("8,3", "3,8", "1.1"),
    ("2,9,4", "6,2,3", "1.3"),
];

pub const COROLLARY_TOLERANCE: f64 = 1e-6;
pub const RESTRICTED_TOLERANCE: f64 = 1e-8;
pub const HYPER_TOLERANCE: f64 = 1e-9;
/// Series bound for the `(a - 3) gamma` family, whose tail decays like `K^-1`.
pub const SLOW_SERIES_K_BOUND: u64 = 10_000_000;

fn corollary(case: u8, a: u32, gamma: &str, m: Option<u64>) -> SuiteEntry {
    let id = match case {
        1 => "d-corollary-1",
        2 => "d-corollary-2",
        3 => "d-corollary-3",
        _ => "d-corollary-4",
    };
    let mut p = params([("a", &s(a)), ("gamma", gamma)]);
    if let Some(m) = m {
        p.insert("m".into(), s(m));
    }
    let e = SuiteEntry::new(id, p);
    match case {
        2 => e.tolerance(RESTRICTED_TOLERANCE),
        3 => e.tolerance(COROLLARY_TOLERANCE).k_bound(SLOW_SERIES_K_BOUND),
        _ => e.tolerance(COROLLARY_TOLERANCE),
    }
}

/// The full verification grid.
pub fn suite_grid() -> Vec<SuiteEntry> {
    let mut g = Vec::new();
    for a in 0..=40 {
        g.push(SuiteEntry::new("dixon-classical", params([("a", &s(a))])));
    }
    for a in 0..=10 {
        for b in 0..=10 {
            for c in 0..=10 {
                g.push(abc("dixon-general", a, b, c));
            }
        }
    }
    for a in 0..=8 {
        for b in 0..=8 {
            for c in 0..=8 {
                g.push(abc("dixon-terminating", a, b, c));
            }
        }
    }
    for &(a, b, c) in HYPER_GRID {
        g.push(abc("dixon-3f2", a, b, c).tolerance(HYPER_TOLERANCE));
    }
    for &(q, a, b, c) in Q_GRID {
        g.push(SuiteEntry::new("q-dixon", params([("q", q), ("a", a), ("b", b), ("c", c)])));
    }
    for (a, gamma) in [(3, "1.5"), (4, "1.0"), (5, "1.0")] {
        g.push(corollary(1, a, gamma, None));
    }
    for m in [2, 6] {
        g.push(corollary(2, 3, "1.5", Some(m)));
    }
    g.push(corollary(3, 5, "1.0", None));
    for m in [2, 6] {
        g.push(corollary(4, 5, "1.0", Some(m)));
    }
    for a in [2, 3] {
        for gamma in ["1.0", "1.5", "2.0"] {
            for n in 1..=3 {
                g.push(SuiteEntry::new("zeta-poch-euler", params([("a", &s(a)), ("gamma", gamma), ("n", &s(n))])));
            }
        }
    }
    for &(num, den, gamma) in TELESCOPE_GRID {
        g.push(SuiteEntry::new("telescope-consistency", params([("num", num), ("den", den), ("gamma", gamma)])));
    }
    g
}

/// Identities whose printed forms are known to disagree with the numbers.
pub fn errata_grid() -> Vec<SuiteEntry> {
    vec![
        abc("dixon-terminating", 1, 1, 1),
        abc("dixon-terminating", 3, 2, 4),
        abc("dixon-3f2", "1", "0.35", "0.2").tolerance(HYPER_TOLERANCE),
        SuiteEntry::new("q-dixon", params([("q", "0.1"), ("a", "0.04"), ("b", "0.3"), ("c", "0.5")])),
        corollary(1, 3, "1.5", None),
        corollary(2, 3, "1.5", Some(2)),
        corollary(3, 5, "1.0", None),
        corollary(4, 5, "1.0", Some(2)),
    ]
}

/// Reports in grid order plus their summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRun {
    pub reports: Vec<VerificationReport>,
    /// Grid entries that could not be evaluated at all, as `(identity, message)`.
    pub errors: Vec<(String, String)>,
    pub summary: SuiteSummary,
}

impl SuiteRun {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

/// Runs `entries`, concurrently when the configuration allows.
pub fn run_entries(entries: &[SuiteEntry], config: &RunConfig) -> Result<SuiteRun> {
    config.validate()?;
    let results = map_slice(entries, config.execution, |e| run_identity(e.identity, &e.params, &e.config_for(config)));
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (e, r) in entries.iter().zip(results) {
        match r {
            Ok(rep) => reports.push(rep),
            Err(err) => errors.push((e.identity.to_string(), err.to_string())),
        }
    }
    let mut summary = SuiteSummary::from_reports(&reports);
    for (id, _) in &errors {
        if !summary.failing_identities.contains(id) {
            summary.failing_identities.push(id.clone());
        }
    }
    Ok(SuiteRun { reports, errors, summary })
}

pub fn run_suite(config: &RunConfig) -> Result<SuiteRun> {
    run_entries(&suite_grid(), config)
}

pub fn run_errata(config: &RunConfig) -> Result<SuiteRun> {
    run_entries(&errata_grid(), config)
}
