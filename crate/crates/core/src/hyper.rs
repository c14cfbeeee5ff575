//! Dixon's theorem for the well-poised 3F2 at unit argument: truncated series
//! on the left, Gamma-function ratio on the right.

use rug::ops::Pow;
use rug::Float;

use crate::error::domain;
use crate::numerics::{
    bernoulli, bernoulli_polynomial, power_tail_sum, BlockedSum, HpReal, Precision,
    SummationDiagnostics,
};
use crate::{Error, Result};

/// The series must have at least this convergence margin before the engine
/// attempts it.
pub const MIN_SERIES_MARGIN: f64 = 0.2;

/// Parameters of `3F2(a, b, c; 1+a-b, 1+a-c; 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct F32Params {
    pub a: HpReal,
    pub b: HpReal,
    pub c: HpReal,
}

fn is_nonpositive_integer(x: &Float) -> bool {
    *x <= 0 && x.is_integer()
}

impl F32Params {
    /// Checks the convergence margin and that no lower parameter is a
    /// non-positive integer.
    pub fn new(a: HpReal, b: HpReal, c: HpReal) -> Result<Self> {
        let p = F32Params { a, b, c };
        let m = p.margin();
        if m <= 0 {
            return Err(domain(format!(
                "convergence margin 1 + a/2 - b - c = {} must be positive",
                m.to_f64()
            )));
        }
        for (name, d) in [("1+a-b", p.lower_b()), ("1+a-c", p.lower_c())] {
            if is_nonpositive_integer(&d) {
                return Err(domain(format!("lower parameter {name} = {} is a non-positive integer", d.to_f64())));
            }
        }
        Ok(p)
    }

    fn bits(&self) -> u32 {
        self.a.prec().max(self.b.prec()).max(self.c.prec())
    }

    /// `1 + a/2 - b - c`.
    pub fn margin(&self) -> HpReal {
        let bits = self.bits();
        let half = Float::with_val(bits, &self.a / 2u32);
        Float::with_val(bits, half + 1u32) - &self.b - &self.c
    }

    fn lower_b(&self) -> HpReal {
        Float::with_val(self.bits(), &self.a - &self.b) + 1u32
    }

    fn lower_c(&self) -> HpReal {
        Float::with_val(self.bits(), &self.a - &self.c) + 1u32
    }

    /// Numerator and denominator Gamma arguments of the closed form.
    pub fn gamma_arguments(&self) -> ([HpReal; 4], [HpReal; 4]) {
        let bits = self.bits();
        let one = Float::with_val(bits, 1);
        let half = Float::with_val(bits, &self.a / 2u32) + 1u32;
        let bc = Float::with_val(bits, &self.b + &self.c);
        let num = [
            half.clone(),
            Float::with_val(bits, &half - &bc),
            self.lower_b(),
            self.lower_c(),
        ];
        let full = Float::with_val(bits, &self.a + &one);
        let den = [
            full.clone(),
            Float::with_val(bits, &full - &bc),
            Float::with_val(bits, &half - &self.b),
            Float::with_val(bits, &half - &self.c),
        ];
        (num, den)
    }
}

/// `ln Gamma(x)` for real `x > 0`.
///
/// Shifts `x` up past `0.12 * bits`, applies the Stirling series there and
/// divides the shift back out with one logarithm.
pub fn log_gamma(x: &HpReal, prec: &Precision) -> Result<HpReal> {
    if *x <= 0 {
        return Err(domain(format!("log_gamma needs x > 0, got {}", x.to_f64())));
    }
    let wbits = prec.bits() + 32;
    let x0 = f64::from(wbits) * 0.12 + 4.0;
    let mut z = Float::with_val(wbits, x);
    let mut shift = Float::with_val(wbits, 1);
    while z < x0 {
        shift *= &z;
        z += 1u32;
    }
    let eps = Float::with_val(wbits, Float::i_exp(1, -(wbits as i32)));
    let ln_z = Float::with_val(wbits, z.ln_ref());
    let mut acc = Float::with_val(wbits, &z - 0.5f64) * &ln_z;
    acc -= &z;
    let two_pi = Float::with_val(wbits, rug::float::Constant::Pi) * 2u32;
    acc += two_pi.ln() / 2u32;
    let inv_z2 = Float::with_val(wbits, z.clone().square().recip());
    let mut power = Float::with_val(wbits, z.recip_ref());
    let mut prev = Float::with_val(wbits, rug::float::Special::Infinity);
    for k in 1..200usize {
        let b = bernoulli(2 * k);
        let coef = Float::with_val(wbits, b) / ((2 * k * (2 * k - 1)) as u32);
        let term = coef * &power;
        let mag = term.clone().abs();
        acc += &term;
        if mag <= eps || mag > prev {
            break;
        }
        prev = mag;
        power *= &inv_z2;
    }
    acc -= shift.ln();
    Ok(Float::with_val(prec.bits(), acc))
}

/// Right side: `exp` of the signed sum of eight `ln Gamma` values.
pub fn dixon_gamma_rhs(p: &F32Params, prec: &Precision) -> Result<HpReal> {
    let (num, den) = p.gamma_arguments();
    for x in num.iter().chain(den.iter()) {
        if *x <= 0 {
            return Err(domain(format!("Gamma argument {} is not positive", x.to_f64())));
        }
    }
    let bits = prec.bits() + 32;
    let wide = Precision::new(prec.digits() + 10)?;
    let mut log = Float::new(bits);
    for x in &num {
        log += log_gamma(x, &wide)?;
    }
    for x in &den {
        log -= log_gamma(x, &wide)?;
    }
    Ok(Float::with_val(prec.bits(), log.exp()))
}

/// Left side: the truncated 3F2 series plus an asymptotic tail.
///
/// Terms come from the ratio
/// `t_{n+1}/t_n = (a+n)(b+n)(c+n) / ((1+a-b+n)(1+a-c+n)(n+1))`. A series
/// with a non-positive integer numerator parameter terminates and is summed
/// exactly. Otherwise the first `N` terms are summed directly and the rest are
/// replaced by the expansion of the term as
/// `K n^(-1-2m) (1 + e_1/n + e_2/n^2 + ...)`, obtained from the Stirling
/// series of the Gamma ratio behind the term, with each power summed by
/// Euler-Maclaurin. The reported tail bound is the size of the first neglected
/// expansion contribution plus the roundoff of the direct part.
pub fn well_poised_3f2_lhs(
    p: &F32Params,
    tolerance: &HpReal,
    budget: u64,
    prec: &Precision,
) -> Result<(HpReal, SummationDiagnostics)> {
    let m = p.margin();
    if m.to_f64() < MIN_SERIES_MARGIN {
        return Err(domain(format!(
            "convergence margin {:.6} is below the engine minimum {MIN_SERIES_MARGIN}",
            m.to_f64()
        )));
    }
    let bits = prec.bits();
    let upper = [p.a.clone(), p.b.clone(), p.c.clone()];
    let lower = [p.lower_b(), p.lower_c(), Float::with_val(bits, 1)];
    let terminating = upper.iter().any(is_nonpositive_integer);

    let largest = upper.iter().chain(lower.iter()).map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let cutoff = (4.0 * largest).ceil() as u64 + f64::from(bits) as u64 + 64;

    let mut acc = BlockedSum::new(prec);
    let mut term = Float::with_val(bits, 1);
    let mut n = 0u64;
    loop {
        if term.is_zero() {
            return Ok((acc.total(), SummationDiagnostics::exact(n, &term)));
        }
        if !terminating && n == cutoff {
            break;
        }
        if n == budget {
            let diag = SummationDiagnostics {
                terms_used: n.max(1),
                last_term_magnitude: term.clone().abs(),
                tail_bound: Float::with_val(bits, rug::float::Special::Infinity),
                converged: false,
            };
            return Err(Error::NonConvergence {
                context: "well-poised 3F2".into(),
                partial: Box::new(acc.total()),
                diagnostics: Box::new(diag),
            });
        }
        acc.push(&term);
        let mut num = Float::with_val(bits, 1);
        let mut den = Float::with_val(bits, 1);
        for u in &upper {
            num *= Float::with_val(bits, u + n);
        }
        for l in &lower {
            den *= Float::with_val(bits, l + n);
        }
        term = term * num / den;
        n += 1;
    }

    let direct = acc.total();
    let (tail, err) = asymptotic_tail(&term, n, &upper, &lower, prec)?;
    let roundoff = Float::with_val(bits, direct.clone().abs() * prec.unit_roundoff()) * n;
    let bound = err + roundoff;
    let diag = SummationDiagnostics {
        terms_used: n + 1,
        last_term_magnitude: term.abs(),
        converged: bound <= *tolerance,
        tail_bound: bound,
    };
    Ok((direct + tail, diag))
}

/// `sum_{k >= n} t_k` given `t_n`, and an estimate of its error.
fn asymptotic_tail(
    t_n: &HpReal,
    n: u64,
    upper: &[HpReal],
    lower: &[HpReal],
    prec: &Precision,
) -> Result<(HpReal, HpReal)> {
    const MAX_ORDER: usize = 60;
    let bits = prec.bits();
    let mut rho = Float::new(bits);
    for l in lower {
        rho += l;
    }
    for u in upper {
        rho -= u;
    }
    // log of the Gamma ratio: sum_k d_k n^-k
    let mut d = vec![Float::new(bits)];
    for k in 1..=MAX_ORDER {
        let mut s = Float::new(bits);
        for u in upper {
            s += bernoulli_polynomial(k + 1, u);
        }
        for l in lower {
            s -= bernoulli_polynomial(k + 1, l);
        }
        s /= (k * (k + 1)) as u32;
        if k % 2 == 0 {
            s = -s;
        }
        d.push(s);
    }
    // exp series coefficients: j e_j = sum_k k d_k e_{j-k}
    let mut e = vec![Float::with_val(bits, 1)];
    for j in 1..=MAX_ORDER {
        let mut s = Float::new(bits);
        for k in 1..=j {
            s += Float::with_val(bits, &d[k] * &e[j - k]) * k as u32;
        }
        e.push(s / j as u32);
    }

    let nf = Float::with_val(bits, n);
    let inv_n = Float::with_val(bits, nf.recip_ref());
    let eps = prec.unit_roundoff();
    let tiny = Float::with_val(bits, &eps * &eps);
    // sum_j e_j n^-j and sum_j e_j H(rho + j, n), truncated when both settle
    let mut shape = Float::new(bits);
    let mut series = Float::new(bits);
    let mut inv_pow = Float::with_val(bits, 1);
    let mut last = Float::with_val(bits, rug::float::Special::Infinity);
    let mut last_shape = last.clone();
    for (j, ej) in e.iter().enumerate() {
        let s = Float::with_val(bits, &rho + j as u32);
        let h = power_tail_sum(&s, n, &tiny, prec)?;
        let contrib = Float::with_val(bits, ej * &h);
        let shape_term = Float::with_val(bits, ej * &inv_pow);
        shape += &shape_term;
        series += &contrib;
        last = contrib.abs();
        last_shape = shape_term.abs();
        let settled = Float::with_val(bits, &series * &eps).abs();
        if j > 2 && last <= settled {
            break;
        }
        inv_pow *= &inv_n;
    }
    // K = t_n n^rho / shape
    let n_rho = Float::with_val(bits, (&nf).pow(&rho));
    let k = Float::with_val(bits, t_n * n_rho) / &shape;
    let tail = Float::with_val(bits, &k * &series);
    let rel = Float::with_val(bits, &last_shape / &shape).abs();
    let err = Float::with_val(bits, &k * &last).abs() * 2u32 + Float::with_val(bits, &tail * rel).abs() * 2u32;
    Ok((tail, err))
}
