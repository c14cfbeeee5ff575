//! The q-Dixon sum: truncated 4phi3 series against infinite q-Pochhammer
//! products, including the right-hand side exactly as printed.

use rug::Float;

use crate::error::domain;
use crate::numerics::{non_converged_error, BlockedSum, HpReal, Precision, SummationDiagnostics};
use crate::Result;

/// Largest accepted `|z|` for the series argument.
pub const MAX_ARGUMENT: f64 = 1.0 - 1e-6;

/// `(x; q)_n`; `1` for `n = 0`.
pub fn q_pochhammer(x: &HpReal, q: &HpReal, n: u64) -> HpReal {
    let bits = x.prec().max(q.prec());
    let mut acc = Float::with_val(bits, 1);
    let mut xq = Float::with_val(bits, x);
    for _ in 0..n {
        acc *= Float::with_val(bits, 1u32 - &xq);
        xq *= q;
    }
    acc
}

/// `(x; q)_inf`, stopping at the first `J` with `|x| q^J / (1-q) <= tolerance`.
pub fn q_pochhammer_inf(x: &HpReal, q: &HpReal, tolerance: &HpReal) -> Result<HpReal> {
    if *q <= 0 || *q >= 1 {
        return Err(domain(format!("q-Pochhammer needs 0 < q < 1, got {}", q.to_f64())));
    }
    let bits = x.prec().max(q.prec());
    let scale = Float::with_val(bits, 1u32 - q).recip();
    let mut acc = Float::with_val(bits, 1);
    let mut xq = Float::with_val(bits, x);
    loop {
        let bound = Float::with_val(bits, xq.abs_ref()) * &scale;
        if bound <= *tolerance {
            return Ok(acc);
        }
        acc *= Float::with_val(bits, 1u32 - &xq);
        xq *= q;
    }
}

/// Parameters of the q-Dixon sum on the real slice `a > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QDixonParams {
    pub q: HpReal,
    pub a: HpReal,
    pub b: HpReal,
    pub c: HpReal,
    pub sqrt_a: HpReal,
}

impl QDixonParams {
    pub fn new(q: HpReal, a: HpReal, b: HpReal, c: HpReal) -> Result<Self> {
        if q <= 0 || q >= 1 {
            return Err(domain(format!("q must lie in (0, 1), got {}", q.to_f64())));
        }
        if a <= 0 {
            return Err(domain(format!("a must be positive so sqrt(a) is real, got {}", a.to_f64())));
        }
        if b.is_zero() || c.is_zero() {
            return Err(domain("b and c must be nonzero"));
        }
        let sqrt_a = Float::with_val(a.prec(), a.sqrt_ref());
        let p = QDixonParams { q, a, b, c, sqrt_a };
        let z = p.argument();
        if z.clone().abs() >= MAX_ARGUMENT {
            return Err(domain(format!(
                "|q sqrt(a) / (b c)| = {} must be below {MAX_ARGUMENT}",
                z.to_f64().abs()
            )));
        }
        Ok(p)
    }

    fn bits(&self) -> u32 {
        self.q.prec()
    }

    /// `z = q sqrt(a) / (b c)`.
    pub fn argument(&self) -> HpReal {
        let bits = self.bits();
        Float::with_val(bits, &self.q * &self.sqrt_a) / Float::with_val(bits, &self.b * &self.c)
    }

    /// Numerator bases `a, -q sqrt(a), b, c`.
    pub fn upper(&self) -> [HpReal; 4] {
        let bits = self.bits();
        [
            self.a.clone(),
            -Float::with_val(bits, &self.q * &self.sqrt_a),
            self.b.clone(),
            self.c.clone(),
        ]
    }

    /// Denominator bases `q, -sqrt(a), aq/b, aq/c` (the first is the `(q;q)_n`).
    pub fn lower(&self) -> [HpReal; 4] {
        let bits = self.bits();
        let aq = Float::with_val(bits, &self.a * &self.q);
        [
            self.q.clone(),
            -self.sqrt_a.clone(),
            Float::with_val(bits, &aq / &self.b),
            Float::with_val(bits, &aq / &self.c),
        ]
    }
}

/// Which right-hand side of the q-Dixon sum to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsForm {
    /// Four numerator and three denominator infinite products, as printed.
    Printed,
    /// The balanced form with `(aq/c; q)_inf` added to the denominator.
    Standard,
}

/// The 4phi3 series by term-ratio recurrence.
///
/// After term `n` every later ratio is bounded by
/// `|z| prod(1 + |u| q^n) / ((1 - q^(n+1)) prod(1 - |l| q^n))`, which gives a
/// geometric bound on the remaining terms once it drops below one.
pub fn q_dixon_lhs(
    p: &QDixonParams,
    tolerance: &HpReal,
    budget: u64,
    prec: &Precision,
) -> Result<(HpReal, SummationDiagnostics)> {
    let bits = prec.bits();
    let z = p.argument();
    let upper = p.upper();
    let lower = p.lower();
    let z_abs = z.clone().abs();
    let tiny = Float::with_val(bits, prec.unit_roundoff().square());

    let mut acc = BlockedSum::new(prec);
    let mut term = Float::with_val(bits, 1);
    let mut qn = Float::with_val(bits, 1);
    let mut bound = Float::with_val(bits, rug::float::Special::Infinity);
    for n in 0..budget {
        acc.push(&term);
        if term.is_zero() {
            return Ok((acc.total(), SummationDiagnostics::exact(n + 1, &term)));
        }
        // ratio t_{n+1}/t_n
        let mut num = z.clone();
        let mut den = Float::with_val(bits, 1);
        for u in &upper {
            num *= Float::with_val(bits, 1u32 - Float::with_val(bits, u * &qn));
        }
        for l in &lower {
            let f = Float::with_val(bits, 1u32 - Float::with_val(bits, l * &qn));
            if f.clone().abs() <= tiny {
                return Err(domain(format!("denominator factor vanishes at n = {n}")));
            }
            den *= f;
        }
        // geometric bound on everything after this term
        let mut rho = z_abs.clone();
        let mut ok = true;
        for u in &upper {
            rho *= Float::with_val(bits, Float::with_val(bits, u.abs_ref()) * &qn) + 1u32;
        }
        for l in &lower {
            let f = Float::with_val(bits, 1u32 - Float::with_val(bits, l.abs_ref()) * &qn);
            if f <= 0 {
                ok = false;
                break;
            }
            rho /= f;
        }
        if ok && rho < 1 {
            let r = Float::with_val(bits, 1u32 - &rho);
            bound = Float::with_val(bits, term.abs_ref()) * &rho / r;
            if bound <= *tolerance {
                let diag = SummationDiagnostics {
                    terms_used: n + 1,
                    last_term_magnitude: term.abs(),
                    tail_bound: bound,
                    converged: true,
                };
                return Ok((acc.total(), diag));
            }
        }
        term = term * num / den;
        qn *= &p.q;
    }
    Err(non_converged_error("q-Dixon series", acc.total(), budget, term, bound))
}

/// Right side as a ratio of infinite products.
pub fn q_dixon_rhs(p: &QDixonParams, form: RhsForm, tolerance: &HpReal) -> Result<HpReal> {
    let bits = p.bits();
    let aq = Float::with_val(bits, &p.a * &p.q);
    let bc = Float::with_val(bits, &p.b * &p.c);
    let q_sqrt = Float::with_val(bits, &p.q * &p.sqrt_a);
    let num = [
        aq.clone(),
        Float::with_val(bits, &aq / &bc),
        Float::with_val(bits, &q_sqrt / &p.b),
        Float::with_val(bits, &q_sqrt / &p.c),
    ];
    let mut den = vec![
        Float::with_val(bits, &aq / &p.b),
        q_sqrt.clone(),
        Float::with_val(bits, &q_sqrt / &bc),
    ];
    if form == RhsForm::Standard {
        den.push(Float::with_val(bits, &aq / &p.c));
    }
    let mut acc = Float::with_val(bits, 1);
    for x in &num {
        acc *= q_pochhammer_inf(x, &p.q, tolerance)?;
    }
    for x in &den {
        let f = q_pochhammer_inf(x, &p.q, tolerance)?;
        if f.is_zero() {
            return Err(domain("a denominator product vanishes"));
        }
        acc /= f;
    }
    Ok(acc)
}

/// The factor by which the printed right side exceeds the balanced one.
pub fn printed_defect(p: &QDixonParams, tolerance: &HpReal) -> Result<HpReal> {
    let aq_c = Float::with_val(p.bits(), &p.a * &p.q) / &p.c;
    q_pochhammer_inf(&aq_c, &p.q, tolerance)
}
