use std::collections::BTreeMap;
use std::time::Instant;

use rug::{Float, Integer};

use super::config::RunConfig;
use super::report::{exact_candidate, numeric_candidate, ReportValue, RhsCandidate, VerificationReport};
use crate::dseries::{
    corollary_case, dseries_sum, evaluate_zeta_factors, telescope, zeta_poch_euler, zeta_poch_finite,
    zeta_product_ratio_numeric, CandidateForm, DSeriesSpec, ZetaProductSpec,
};
use crate::exactcomb::{verify_combinatorial, CombinatorialKind};
use crate::hyper::{dixon_gamma_rhs, well_poised_3f2_lhs, F32Params};
use crate::numerics::{format_sci, HpReal, Precision, SummationDiagnostics};
use crate::qseries::{printed_defect, q_dixon_lhs, q_dixon_rhs, QDixonParams, RhsForm};
use crate::{Error, Result};

/// Registered identity ids.
pub const IDENTITIES: &[&str] = &[
    "dixon-classical",
    "dixon-general",
    "dixon-terminating",
    "dixon-3f2",
    "q-dixon",
    "d-corollary-1",
    "d-corollary-2",
    "d-corollary-3",
    "d-corollary-4",
    "zeta-poch-euler",
    "telescope-consistency",
];

/// Depth used by `telescope-consistency` unless a `depth` parameter is given.
pub const DEFAULT_TELESCOPE_DEPTH: u64 = 60;

/// Typed access to a parameter map; every key must be consumed.
struct Params<'a> {
    map: &'a BTreeMap<String, String>,
    allowed: &'static [&'static str],
}

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, String>, allowed: &'static [&'static str]) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "unexpected parameter `{k}` (accepted: {})",
                allowed.join(", ")
            )));
        }
        Ok(Params { map, allowed })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        debug_assert!(self.allowed.contains(&key));
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}`")))
    }

    fn int(&self, key: &str) -> Result<Integer> {
        let s = self.raw(key)?;
        Integer::from_str_radix(s, 10)
            .map_err(|_| Error::InvalidParameter(format!("{key}: `{s}` is not an integer")))
    }

    fn uint(&self, key: &str) -> Result<u64> {
        let s = self.raw(key)?;
        s.parse().map_err(|_| Error::InvalidParameter(format!("{key}: `{s}` is not a non-negative integer")))
    }

    fn opt_uint(&self, key: &str) -> Result<Option<u64>> {
        if self.map.contains_key(key) {
            self.uint(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn real(&self, key: &str, prec: &Precision) -> Result<HpReal> {
        prec.parse(self.raw(key)?)
    }

    fn list(&self, key: &str) -> Result<Vec<i64>> {
        let s = self.raw(key)?;
        s.split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter(format!("{key}: `{s}` is not a comma-separated integer list")))
    }
}

/// Value and diagnostics of a side that may have failed to converge.
struct Side {
    value: HpReal,
    diag: SummationDiagnostics,
}

impl Side {
    fn from_result(r: Result<(HpReal, SummationDiagnostics)>) -> Result<Self> {
        match r {
            Ok((value, diag)) => Ok(Side { value, diag }),
            Err(Error::NonConvergence { partial, diagnostics, .. }) => {
                Ok(Side { value: *partial, diag: *diagnostics })
            }
            Err(e) => Err(e),
        }
    }

    /// Tail bound usable as match allowance: only a converged side earns one.
    fn allowance(&self, prec: &Precision) -> HpReal {
        if self.diag.converged {
            self.diag.tail_bound.clone()
        } else {
            prec.zero()
        }
    }
}

struct Builder {
    id: String,
    parameters: BTreeMap<String, String>,
    digits: u32,
    notes: Vec<String>,
}

impl Builder {
    fn finish(
        self,
        lhs: ReportValue,
        candidates: Vec<RhsCandidate>,
        diagnostics: SummationDiagnostics,
        tolerance: HpReal,
    ) -> VerificationReport {
        assert!(!candidates.is_empty(), "every identity registers a candidate");
        VerificationReport {
            identity_id: self.id,
            parameters: self.parameters,
            lhs_value: lhs,
            rhs_candidates: candidates,
            diagnostics,
            tolerance_used: tolerance,
            elapsed: None,
            digits: self.digits,
            notes: self.notes,
        }
    }
}

/// Evaluates the left side once and every registered right-hand candidate.
/// A mismatch is a result; only unknown ids and invalid parameters are errors.
pub fn run_identity(id: &str, params: &BTreeMap<String, String>, config: &RunConfig) -> Result<VerificationReport> {
    if !IDENTITIES.contains(&id) {
        return Err(Error::UnknownIdentity(id.to_string()));
    }
    config.validate()?;
    let prec = config.precision()?;
    let start = Instant::now();
    let b = Builder { id: id.to_string(), parameters: params.clone(), digits: config.digits, notes: Vec::new() };
    let mut report = match id {
        "dixon-classical" => combinatorial(b, CombinatorialKind::Classical, &Params::new(params, &["a"])?, &prec)?,
        "dixon-general" => combinatorial(b, CombinatorialKind::General, &Params::new(params, &["a", "b", "c"])?, &prec)?,
        "dixon-terminating" => {
            combinatorial(b, CombinatorialKind::Terminating, &Params::new(params, &["a", "b", "c"])?, &prec)?
        }
        "dixon-3f2" => hypergeometric(b, &Params::new(params, &["a", "b", "c"])?, config, &prec)?,
        "q-dixon" => q_dixon(b, &Params::new(params, &["q", "a", "b", "c"])?, config, &prec)?,
        "zeta-poch-euler" => euler(b, &Params::new(params, &["a", "gamma", "n"])?, config, &prec)?,
        "telescope-consistency" => {
            telescoping(b, &Params::new(params, &["num", "den", "gamma", "depth"])?, config, &prec)?
        }
        _ => {
            let case = id.trim_start_matches("d-corollary-").parse::<u8>().expect("registered id");
            corollary(b, case, &Params::new(params, &["a", "gamma", "m"])?, config, &prec)?
        }
    };
    let exact_only = report.rhs_candidates.iter().all(|c| matches!(c.value, ReportValue::Exact(_)));
    if !exact_only && !config.tolerance_attainable() {
        report.diagnostics.converged = false;
        report.notes.push(format!(
            "tolerance {:e} is below 1e{}, the attainable level at {} digits",
            config.tolerance,
            5 - config.digits as i64,
            config.digits
        ));
    }
    if config.timings {
        report.elapsed = Some(start.elapsed());
    }
    Ok(report)
}

fn combinatorial(b: Builder, kind: CombinatorialKind, p: &Params, prec: &Precision) -> Result<VerificationReport> {
    let values = match kind {
        CombinatorialKind::Classical => vec![p.int("a")?],
        _ => vec![p.int("a")?, p.int("b")?, p.int("c")?],
    };
    let check = verify_combinatorial(kind, &values)?;
    let mut b = b;
    if kind == CombinatorialKind::Terminating {
        b.notes.push(
            "the regularized terminating 3F2 form carries an extra (-1)^a; with it the sign convention is s0 = +1 for every a"
                .into(),
        );
    }
    let candidates = check
        .candidates
        .into_iter()
        .map(|c| exact_candidate(c.label, &check.lhs, c.value, c.verdict.into(), prec.bits()))
        .collect();
    let diag = SummationDiagnostics::exact(check.terms, &prec.zero());
    Ok(b.finish(ReportValue::Exact(check.lhs), candidates, diag, prec.zero()))
}

fn hypergeometric(mut b: Builder, p: &Params, config: &RunConfig, prec: &Precision) -> Result<VerificationReport> {
    let fp = F32Params::new(p.real("a", prec)?, p.real("b", prec)?, p.real("c", prec)?)?;
    let tol = tolerance_real(config, prec);
    let rhs = dixon_gamma_rhs(&fp, prec)?;
    let target = Float::with_val(prec.bits(), rhs.abs_ref()) * &tol;
    let lhs = Side::from_result(well_poised_3f2_lhs(&fp, &target, config.term_budget, prec))?;
    b.notes.push(format!(
        "convergence requires 1 + a/2 - b - c > 0 (here {}); the printed condition omits the a/2 term",
        format_sci(&fp.margin(), 6)
    ));
    let c = numeric_candidate("gamma-ratio", &lhs.value, rhs, &tol, &lhs.allowance(prec));
    Ok(b.finish(ReportValue::Real(lhs.value), vec![c], lhs.diag, tol))
}

fn q_dixon(mut b: Builder, p: &Params, config: &RunConfig, prec: &Precision) -> Result<VerificationReport> {
    let qp = QDixonParams::new(p.real("q", prec)?, p.real("a", prec)?, p.real("b", prec)?, p.real("c", prec)?)?;
    let tol = tolerance_real(config, prec);
    let fine = Float::with_val(prec.bits(), prec.unit_roundoff() * 1e-3);
    let standard = q_dixon_rhs(&qp, RhsForm::Standard, &fine)?;
    let printed = q_dixon_rhs(&qp, RhsForm::Printed, &fine)?;
    let target = Float::with_val(prec.bits(), standard.abs_ref()) * &tol;
    let lhs = Side::from_result(q_dixon_lhs(&qp, &target, config.term_budget, prec))?;
    b.notes.push(format!(
        "printed form / standard form = (aq/c; q)_inf = {}",
        format_sci(&printed_defect(&qp, &fine)?, 12)
    ));
    let allow = lhs.allowance(prec);
    let candidates = vec![
        numeric_candidate("standard-form", &lhs.value, standard, &tol, &allow),
        numeric_candidate("printed-form", &lhs.value, printed, &tol, &allow),
    ];
    Ok(b.finish(ReportValue::Real(lhs.value), candidates, lhs.diag, tol))
}

fn euler(mut b: Builder, p: &Params, config: &RunConfig, prec: &Precision) -> Result<VerificationReport> {
    let a = p.int("a")?.to_i64().ok_or_else(|| Error::InvalidParameter("a is too large".into()))?;
    let gamma = p.real("gamma", prec)?;
    let n = p.uint("n")?;
    let tol = tolerance_real(config, prec);
    let finite = zeta_poch_finite(a, &gamma, n, prec)?;
    let (product, bound) = zeta_poch_euler(a, &gamma, n, config.prime_bound, config.execution, prec)?;
    b.parameters.insert("primeBound".into(), config.prime_bound.to_string());
    b.notes.push(format!("Euler product tail bound {}", format_sci(&bound, 6)));
    let c = numeric_candidate("euler-product", &finite, product, &tol, &bound);
    let diag = SummationDiagnostics::exact(n, &prec.zero());
    Ok(b.finish(ReportValue::Real(finite), vec![c], diag, tol))
}

fn telescoping(b: Builder, p: &Params, config: &RunConfig, prec: &Precision) -> Result<VerificationReport> {
    let spec = ZetaProductSpec::new(p.list("num")?, p.list("den")?, p.real("gamma", prec)?);
    let depth = p.opt_uint("depth")?.unwrap_or(DEFAULT_TELESCOPE_DEPTH);
    let tol = tolerance_real(config, prec);
    let factors = telescope(&spec)?;
    let closed = evaluate_zeta_factors(&factors, &spec.gamma, prec)?;
    let (numeric, bound) = zeta_product_ratio_numeric(&spec, depth, prec)?;
    let diag = SummationDiagnostics {
        terms_used: depth,
        last_term_magnitude: prec.zero(),
        tail_bound: bound.clone(),
        converged: true,
    };
    let c = numeric_candidate("telescoped", &numeric, closed, &tol, &bound);
    Ok(b.finish(ReportValue::Real(numeric), vec![c], diag, tol))
}

fn corollary(mut b: Builder, case: u8, p: &Params, config: &RunConfig, prec: &Precision) -> Result<VerificationReport> {
    let a = p.uint("a")?;
    let a = u32::try_from(a).map_err(|_| Error::InvalidParameter("a is too large".into()))?;
    let gamma = p.real("gamma", prec)?;
    let m = p.opt_uint("m")?;
    if case % 2 == 1 && m.is_some() {
        return Err(Error::InvalidParameter(format!("d-corollary-{case} takes no m")));
    }
    let cc = corollary_case(case, a, &gamma, m, prec)?;
    let tol = tolerance_real(config, prec);
    b.parameters.insert("kBound".into(), config.k_bound.to_string());
    let sum = |spec: &DSeriesSpec| Side::from_result(dseries_sum(spec, &tol, config.k_bound, config.execution, prec));
    let lhs = sum(&cc.lhs)?;
    let lhs_allow = lhs.allowance(prec);
    let mut candidates = Vec::new();
    for cand in &cc.candidates {
        match &cand.form {
            CandidateForm::Value(v) => {
                candidates.push(numeric_candidate(cand.label, &lhs.value, v.clone(), &tol, &lhs_allow))
            }
            CandidateForm::Series(spec) => {
                let side = sum(spec)?;
                if !side.diag.converged {
                    b.notes.push(format!("{} did not converge ({})", cand.label, side.diag));
                }
                let allow = Float::with_val(prec.bits(), &lhs_allow + side.allowance(prec));
                candidates.push(numeric_candidate(cand.label, &lhs.value, side.value, &tol, &allow));
            }
        }
    }
    b.notes.push(
        "left side uses sigma_{-2g}(a+1;k) and sigma_{-g}(a+1;k) in place of the printed sigma_{-2g}(2;k) and sigma_{-g}(2;k), which makes the summand well poised; the printed summand is reported as printed-term-series"
            .into(),
    );
    if let Some(m) = m {
        b.notes.push(format!(
            "left side runs over k with rad(k) | rad({m}), k = 1 included; strict-Sm-series is the sum over rad(k) = rad({m}) only"
        ));
        b.notes.push("inferred-J follows the printed orientation; inferred-J-inverted is its reciprocal".into());
    } else {
        let bc = if case == 1 { 1 } else { 2 };
        b.notes.push(format!(
            "the general zeta-product ratio at b = c = {bc} telescopes to the printed-simplified form; middle-form is the printed intermediate expression"
        ));
    }
    Ok(b.finish(ReportValue::Real(lhs.value), candidates, lhs.diag, tol))
}

/// Convenience for callers building parameter maps.
/// The configured tolerance read from its shortest decimal form, so `1e-10`
/// reports as `1e-10` rather than its binary neighbour.
fn tolerance_real(config: &RunConfig, prec: &Precision) -> HpReal {
    prec.parse(&format!("{:e}", config.tolerance)).unwrap_or_else(|_| prec.real(config.tolerance))
}

pub fn params<const N: usize>(pairs: [(&str, &str); N]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}
