//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dixon_core::dseries::{
    evaluate_zeta_factors, sigma_neg, sigma_poch, telescope, zeta_poch_euler, zeta_poch_finite,
    zeta_product_ratio_numeric, ZetaProductSpec,
};
use dixon_core::exactcomb::{dixon_classical_lhs, dixon_general_lhs, terminating_3f2};
use dixon_core::harness::{
    render_suite, run_identity, run_suite, suite_grid, OutputFormat, RunConfig, VerificationReport,
    Verdict, HYPER_GRID, Q_GRID,
};
use dixon_core::hyper::{dixon_gamma_rhs, well_poised_3f2_lhs, F32Params};
use dixon_core::qseries::{printed_defect, q_dixon_lhs, q_dixon_rhs, q_pochhammer, QDixonParams, RhsForm};
use dixon_core::{Execution, HpReal, Precision};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Float, Integer};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn prec() -> Precision {
    Precision::default()
}

fn rel(a: &HpReal, b: &HpReal) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    (d / Float::with_val(a.prec(), b.abs_ref())).to_f64()
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit {
        Ok(())
    } else {
        Err(format!("{what} took {:.2} s, limit {limit} s", elapsed.as_secs_f64()))
    }
}

fn classical() -> Outcome {
    let t = Instant::now();
    for a in 0..=40u32 {
        let want = factorial(3 * a) / factorial(a).pow(3);
        let got = dixon_classical_lhs(&Integer::from(a)).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("a = {a}: {got} != {want}"));
        }
    }
    within(t.elapsed(), 1.0, "a = 0..40")?;
    Ok(format!("41 values exact in {:.3} s", t.elapsed().as_secs_f64()))
}

fn multinomial(a: u32, b: u32, c: u32) -> Integer {
    factorial(a + b + c) / (factorial(a) * factorial(b) * factorial(c))
}

fn general() -> Outcome {
    let t = Instant::now();
    for a in 0..=10 {
        for b in 0..=10 {
            for c in 0..=10 {
                let got = dixon_general_lhs(&a.into(), &b.into(), &c.into()).map_err(|e| e.to_string())?;
                if got != multinomial(a, b, c) {
                    return Err(format!("({a},{b},{c}) differs"));
                }
            }
        }
    }
    within(t.elapsed(), 5.0, "the 11^3 grid")?;
    Ok(format!("1331 triples exact in {:.3} s", t.elapsed().as_secs_f64()))
}

fn terminating() -> Outcome {
    let mut s0 = None;
    for a in 0..=8 {
        for b in 0..=8 {
            for c in 0..=8 {
                let v = terminating_3f2(&a.into(), &b.into(), &c.into()).map_err(|e| e.to_string())?;
                if v.clone().abs() != multinomial(a, b, c) {
                    return Err(format!("|F({a},{b},{c})| = {} differs from the multinomial", v.abs()));
                }
                let s = if a % 2 == 0 { 1 } else { -1 } * if v < 0 { -1 } else { 1 };
                if *s0.get_or_insert(s) != s {
                    return Err(format!("sign convention breaks at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(format!("729 triples, sign (-1)^a * s0 with s0 = {:+}", s0.unwrap()))
}

fn gamma_form() -> Outcome {
    let p = prec();
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for &(a, b, c) in HYPER_GRID {
        let x = F32Params::new(p.parse(a).unwrap(), p.parse(b).unwrap(), p.parse(c).unwrap()).map_err(|e| e.to_string())?;
        if x.margin().to_f64() < 0.3 - 1e-12 {
            return Err(format!("grid point ({a},{b},{c}) has margin below 0.3"));
        }
        let (l, d) = well_poised_3f2_lhs(&x, &p.pow10(-12), 1_000_000, &p).map_err(|e| e.to_string())?;
        let r = dixon_gamma_rhs(&x, &p).map_err(|e| e.to_string())?;
        let dev = rel(&l, &r);
        if !d.converged || dev > 1e-9 {
            return Err(format!("({a},{b},{c}): relative deviation {dev:e}"));
        }
        worst = worst.max(dev);
    }
    within(t.elapsed(), 10.0, "the real grid")?;
    Ok(format!("{} triples, worst relative deviation {worst:.2e}, {:.2} s", HYPER_GRID.len(), t.elapsed().as_secs_f64()))
}

fn q_dixon() -> Outcome {
    let p = prec();
    let tol = p.pow10(-25);
    let (mut worst, mut worst_defect): (f64, f64) = (0.0, 0.0);
    for &(q, a, b, c) in Q_GRID {
        let x = QDixonParams::new(p.parse(q).unwrap(), p.parse(a).unwrap(), p.parse(b).unwrap(), p.parse(c).unwrap())
            .map_err(|e| e.to_string())?;
        if x.argument().to_f64().abs() > 0.5 {
            return Err(format!("grid point q={q} a={a} b={b} c={c} has |z| > 0.5"));
        }
        let (l, _) = q_dixon_lhs(&x, &p.pow10(-20), 1_000_000, &p).map_err(|e| e.to_string())?;
        let standard = q_dixon_rhs(&x, RhsForm::Standard, &tol).map_err(|e| e.to_string())?;
        let printed = q_dixon_rhs(&x, RhsForm::Printed, &tol).map_err(|e| e.to_string())?;
        let defect = printed_defect(&x, &tol).map_err(|e| e.to_string())?;
        let dev = rel(&l, &standard);
        let ratio = Float::with_val(p.bits(), &printed / &l);
        let dd = rel(&ratio, &defect);
        if dev > 1e-10 || dd > 1e-8 {
            return Err(format!("q={q} a={a} b={b} c={c}: standard {dev:e}, printed/series vs (aq/c;q)_inf {dd:e}"));
        }
        worst = worst.max(dev);
        worst_defect = worst_defect.max(dd);
    }
    Ok(format!(
        "{} sets, standard form worst {worst:.2e}; printed / series = (aq/c;q)_inf to {worst_defect:.2e}",
        Q_GRID.len()
    ))
}

fn euler_product() -> Outcome {
    let p = prec();
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for a in [2i64, 3] {
        for g in ["1.0", "1.5", "2.0"] {
            for n in 1..=3 {
                let gamma = p.parse(g).unwrap();
                let f = zeta_poch_finite(a, &gamma, n, &p).map_err(|e| e.to_string())?;
                let (e, bound) =
                    zeta_poch_euler(a, &gamma, n, 100_000, Execution::Parallel, &p).map_err(|e| e.to_string())?;
                let d = Float::with_val(p.bits(), &f - &e).abs();
                worst = worst.max(d.to_f64());
                if d > bound {
                    failures.push(format!("({a},{g},{n}) deviation {:.2e} exceeds its bound {:.2e}", d.to_f64(), bound.to_f64()));
                } else if d > 1e-8 {
                    failures.push(format!("({a},{g},{n}) deviation {:.2e} > 1e-8", d.to_f64()));
                }
            }
        }
    }
    within(t.elapsed(), 20.0, "the Euler grid")?;
    if failures.is_empty() {
        Ok(format!("18 points within bound and 1e-8, worst {worst:.2e}"))
    } else {
        Err(failures.join("; "))
    }
}

fn corollary_report(id: &str, a: &str, gamma: &str, m: Option<&str>) -> Result<(VerificationReport, Duration), String> {
    let entry = suite_grid()
        .into_iter()
        .find(|e| e.identity == id && e.params["a"] == a && e.params["gamma"] == gamma && m.is_none_or(|m| e.params["m"] == m))
        .ok_or_else(|| format!("{id} a={a} gamma={gamma} is not on the grid"))?;
    let config = entry.config_for(&RunConfig::default());
    let t = Instant::now();
    let r = run_identity(id, &entry.params, &config).map_err(|e| e.to_string())?;
    Ok((r, t.elapsed()))
}

fn tol_is(r: &VerificationReport, t: f64) -> bool {
    (r.tolerance_used.to_f64() / t - 1.0).abs() < 1e-12
}

fn describe(r: &VerificationReport) -> String {
    let flagged: Vec<&str> =
        r.rhs_candidates.iter().filter(|c| c.verdict == Verdict::Mismatch).map(|c| c.label.as_str()).collect();
    format!("matches {}; flags {}", r.matching().join(", "), flagged.join(", "))
}

fn case_one() -> Outcome {
    let mut lines = Vec::new();
    for (a, g) in [("3", "1.5"), ("4", "1.0"), ("5", "1.0")] {
        let (r, t) = corollary_report("d-corollary-1", a, g, None)?;
        within(t, 60.0, &format!("a={a} gamma={g}"))?;
        if !tol_is(&r, 1e-6) || r.parameters["kBound"] != "200000" {
            return Err(format!("a={a}: ran at tolerance {} kBound {}", r.tolerance_used.to_f64(), r.parameters["kBound"]));
        }
        if !r.diagnostics.converged || r.matching().len() != 1 {
            return Err(format!("a={a} gamma={g}: converged {} with matches {:?}", r.diagnostics.converged, r.matching()));
        }
        lines.push(format!("(a={a}, g={g}) {} in {:.1} s", describe(&r), t.as_secs_f64()));
    }
    Ok(lines.join(" | "))
}

fn case_two() -> Outcome {
    let mut lines = Vec::new();
    for m in ["2", "6"] {
        let (r, t) = corollary_report("d-corollary-2", "3", "1.5", Some(m))?;
        within(t, 5.0, &format!("m={m}"))?;
        if !tol_is(&r, 1e-8) {
            return Err(format!("m={m}: ran at tolerance {}", r.tolerance_used.to_f64()));
        }
        let hit = ["printed-sigma-ratio", "inferred-J"]
            .iter()
            .any(|l| r.candidate(l).is_some_and(|c| c.verdict.is_match()));
        if !r.diagnostics.converged || !hit {
            return Err(format!("m={m}: matches {:?}", r.matching()));
        }
        lines.push(format!("(m={m}) {} in {:.2} s", describe(&r), t.as_secs_f64()));
    }
    Ok(lines.join(" | "))
}

fn cases_three_four() -> Outcome {
    let mut lines = Vec::new();
    let runs = [("d-corollary-3", None), ("d-corollary-4", Some("2")), ("d-corollary-4", Some("6"))];
    for (id, m) in runs {
        let (r, t) = corollary_report(id, "5", "1.0", m)?;
        if !tol_is(&r, 1e-6) {
            return Err(format!("{id}: ran at tolerance {}", r.tolerance_used.to_f64()));
        }
        if !r.diagnostics.converged || r.matching().is_empty() {
            return Err(format!("{id} m={m:?}: converged {} with matches {:?}", r.diagnostics.converged, r.matching()));
        }
        let tag = m.map_or(format!("kBound={}", r.parameters["kBound"]), |m| format!("m={m}"));
        lines.push(format!("({id} {tag}) matches {} in {:.1} s", r.matching().join(", "), t.as_secs_f64()));
    }
    Ok(lines.join(" | "))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn properties_and_determinism() -> Outcome {
    let p = prec();
    let mut rng = StdRng::seed_from_u64(0x5eed_d1c0);

    let mut pairs = 0;
    while pairs < 50 {
        let (m, n) = (rng.gen_range(1..3000u64), rng.gen_range(1..3000u64));
        if gcd(m, n) != 1 {
            continue;
        }
        pairs += 1;
        let g = p.real(rng.gen_range(0.3..3.0));
        let whole = sigma_neg(&g, m * n).map_err(|e| e.to_string())?;
        let parts = sigma_neg(&g, m).unwrap() * sigma_neg(&g, n).unwrap();
        if rel(&whole, &parts) > 1e-13 {
            return Err(format!("sigma multiplicativity fails at ({m},{n})"));
        }
    }

    for q in (2u64..=97).filter(|&q| (2..q).all(|d| q % d != 0)) {
        for a in 1..=6u32 {
            let g = p.real(1.25);
            let x = Float::with_val(p.bits(), Float::with_val(p.bits(), q).ln() * -g.clone()).exp();
            let want = Float::with_val(p.bits(), 1u32 - Float::with_val(p.bits(), (&x).pow(a)))
                / Float::with_val(p.bits(), 1u32 - &x);
            if rel(&sigma_poch(&g, a, q).unwrap(), &want) > 1e-13 {
                return Err(format!("prime bracket fails at p={q}, a={a}"));
            }
        }
    }

    for _ in 0..100 {
        let x = p.real(rng.gen_range(-2.0..2.0));
        let q = p.real(rng.gen_range(-0.99..0.99));
        let (m, n) = (rng.gen_range(0..40u32), rng.gen_range(0..40u32));
        let whole = q_pochhammer(&x, &q, u64::from(m + n));
        let shifted = Float::with_val(p.bits(), &x * Float::with_val(p.bits(), (&q).pow(m)));
        let parts = q_pochhammer(&x, &q, m.into()) * q_pochhammer(&shifted, &q, n.into());
        if !whole.is_zero() && rel(&parts, &whole) > 1e-13 {
            return Err("q-Pochhammer splicing fails".into());
        }
    }

    for _ in 0..20 {
        let len = rng.gen_range(1..4);
        let num: Vec<i64> = (0..len).map(|_| rng.gen_range(1..9)).collect();
        let den: Vec<i64> = (0..len).map(|_| rng.gen_range(1..9)).collect();
        let spec = ZetaProductSpec::new(num.clone(), den.clone(), p.real(rng.gen_range(1.1..2.5)));
        let exact = evaluate_zeta_factors(&telescope(&spec).unwrap(), &spec.gamma, &p).map_err(|e| e.to_string())?;
        let (v, bound) = zeta_product_ratio_numeric(&spec, 80, &p).map_err(|e| e.to_string())?;
        let slack = Float::with_val(p.bits(), exact.abs_ref()) * 1e-25;
        if Float::with_val(p.bits(), &exact - &v).abs() > bound + slack {
            return Err(format!("telescope disagrees for {num:?}/{den:?}"));
        }
    }

    let config = RunConfig { format: OutputFormat::Json, ..RunConfig::default() };
    let mut outputs = Vec::new();
    let mut times = Vec::new();
    for _ in 0..2 {
        let t = Instant::now();
        let run = run_suite(&config).map_err(|e| e.to_string())?;
        times.push(t.elapsed());
        if run.exit_code() != 0 {
            return Err(format!("suite reports failing identities {:?}", run.summary.failing_identities));
        }
        outputs.push(render_suite(&run.reports, &run.summary, OutputFormat::Json));
    }
    if outputs[0] != outputs[1] {
        return Err("two full-suite runs differ".into());
    }
    for t in &times {
        within(*t, 120.0, "the full suite")?;
    }
    Ok(format!(
        "property checks pass; two full-suite runs byte-identical ({} bytes), {:.1} s and {:.1} s",
        outputs[0].len(),
        times[0].as_secs_f64(),
        times[1].as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("exact classical Dixon", classical),
        ("exact general Dixon", general),
        ("terminating form and sign convention", terminating),
        ("gamma-form Dixon at 1e-9", gamma_form),
        ("q-Dixon standard form and printed defect", q_dixon),
        ("Euler product within bound and 1e-8", euler_product),
        ("D-corollary case 1", case_one),
        ("D-corollary case 2", case_two),
        ("D-corollary cases 3 and 4", cases_three_four),
        ("property suites and determinism", properties_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
