use rug::ops::Pow;
use rug::{Float, Integer};

use super::bernoulli::bernoulli_table;
use super::{HpReal, Precision};
use crate::error::domain;
use crate::Result;

/// Smallest accepted zeta argument is `1 + ZETA_MARGIN`.
pub const ZETA_MARGIN: f64 = 1e-6;

const MAX_CORRECTIONS: usize = 400;

/// `sum_{k >= n} k^(-s)` for real `s > 1` and `n >= 1` by Euler-Maclaurin at
/// `n`. Correction terms are added until one falls below `abs_tol`; if the
/// asymptotic corrections start growing first, `n` was too small and a domain
/// error is returned.
pub fn power_tail_sum(s: &HpReal, n: u64, abs_tol: &HpReal, prec: &Precision) -> Result<HpReal> {
    if *s <= 1 {
        return Err(domain(format!("power tail sum needs s > 1, got {}", s.to_f64())));
    }
    if n == 0 {
        return Err(domain("power tail sum starts at n >= 1"));
    }
    let bits = prec.bits();
    let nf = Float::with_val(bits, n);
    let n_pow = Float::with_val(bits, (&nf).pow(-s.clone()));
    let s1 = Float::with_val(bits, s - 1u32);
    // n^(1-s)/(s-1) + n^(-s)/2
    let mut acc = Float::with_val(bits, &n_pow * &nf) / &s1;
    acc += Float::with_val(bits, &n_pow / 2u32);

    let inv_n2 = Float::with_val(bits, nf.clone().square().recip());
    // rising = s (s+1) ... (s+2j-2), power = n^(-s-2j+1)
    let mut rising = s.clone();
    let mut power = Float::with_val(bits, &n_pow / &nf);
    let mut fact = Integer::from(2);
    let mut prev = Float::with_val(bits, rug::float::Special::Infinity);
    let table = bernoulli_table(2 * MAX_CORRECTIONS);
    for j in 1..=MAX_CORRECTIONS {
        let b = &table[2 * j];
        let coef = Float::with_val(bits, b / rug::Rational::from(&fact));
        let term = coef * &rising * &power;
        let mag = term.clone().abs();
        if mag <= *abs_tol {
            acc += term;
            return Ok(acc);
        }
        if mag > prev {
            return Err(domain(format!(
                "Euler-Maclaurin corrections diverge at n={n} for s={}",
                s.to_f64()
            )));
        }
        acc += term;
        prev = mag;
        rising *= Float::with_val(bits, s + (2 * j - 1) as u32);
        rising *= Float::with_val(bits, s + (2 * j) as u32);
        power *= &inv_n2;
        fact *= (2 * j + 1) as u32;
        fact *= (2 * j + 2) as u32;
    }
    Err(domain("Euler-Maclaurin correction budget exhausted"))
}

/// Riemann zeta at real `s > 1`.
///
/// Direct sum to `N-1` plus the Euler-Maclaurin tail at `N`. `N` starts near
/// `0.15 * bits` and doubles until the corrections reach full precision.
pub fn zeta(s: &HpReal, prec: &Precision) -> Result<HpReal> {
    if *s <= 1.0 + ZETA_MARGIN {
        return Err(domain(format!(
            "zeta needs s > 1 + {ZETA_MARGIN:e}, got {}",
            s.to_f64()
        )));
    }
    let bits = prec.bits();
    let tol = prec.unit_roundoff();
    let mut n = u64::from(bits * 3 / 20).max(10);
    loop {
        match power_tail_sum(s, n, &tol, prec) {
            Ok(tail) => {
                let mut acc = Float::with_val(bits, 1);
                for k in 2..n {
                    acc += Float::with_val(bits, Float::with_val(bits, k).pow(-s.clone()));
                }
                return Ok(acc + tail);
            }
            Err(_) if n < 1 << 20 => n *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Upper bound on `zeta(s) - 1` for `s >= 2`: `2^-s + 2^(1-s)/(s-1)`,
/// rounded upward. Monotone decreasing in `s`.
pub fn zeta_tail(s: &HpReal, prec: &Precision) -> Result<HpReal> {
    if *s < 2 {
        return Err(domain(format!("zeta tail bound needs s >= 2, got {}", s.to_f64())));
    }
    let bits = prec.bits();
    let two_pow = Float::with_val(bits, Float::with_val(bits, 2).pow(-s.clone()));
    let s1 = Float::with_val(bits, s - 1u32);
    let bound = Float::with_val(bits, &two_pow * 2u32) / s1 + two_pow;
    // a few ulps of headroom over the rounding in the lines above
    let slack = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
    Ok(bound * (slack + 1u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, rel: f64) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d <= Float::with_val(a.prec(), b.clone().abs() * rel)
    }

    #[test]
    fn closed_forms() {
        let p = Precision::default();
        let pi = p.pi();
        let z2 = zeta(&p.real(2), &p).unwrap();
        let z4 = zeta(&p.real(4), &p).unwrap();
        assert!(close(&z2, &Float::with_val(p.bits(), pi.clone().square() / 6u32), 1e-28));
        let pi4 = Float::with_val(p.bits(), pi.square().square() / 90u32);
        assert!(close(&z4, &pi4, 1e-28));
    }

    #[test]
    fn apery_constant() {
        let p = Precision::default();
        let z3 = zeta(&p.real(3), &p).unwrap();
        let expect = p.parse("1.2020569031595942853997381615114").unwrap();
        assert!(close(&z3, &expect, 1e-29));
    }

    #[test]
    fn domain() {
        let p = Precision::default();
        assert!(zeta(&p.real(1), &p).is_err());
        assert!(zeta(&p.real(1.0000001), &p).is_err());
        assert!(zeta(&p.real(1.001), &p).is_ok());
        assert!(zeta_tail(&p.real(1.9), &p).is_err());
    }

    #[test]
    fn near_pole_and_far_right() {
        let p = Precision::default();
        // zeta(s) ~ 1/(s-1) + euler gamma near the pole
        let z = zeta(&p.real(1.001), &p).unwrap();
        assert!((z.to_f64() - 1000.5772).abs() < 1e-3);
        let z = zeta(&p.real(120), &p).unwrap();
        let delta = Float::with_val(p.bits(), &z - 1u32);
        let two = Float::with_val(p.bits(), Float::i_exp(1, -120));
        assert!(close(&delta, &two, 1e-20));
    }

    #[test]
    fn tail_bound_examples() {
        let p = Precision::default();
        let z10 = zeta(&p.real(10), &p).unwrap() - 1u32;
        assert!(zeta_tail(&p.real(10), &p).unwrap() >= z10);
        assert!(zeta_tail(&p.real(200), &p).unwrap() < 1e-50);
        assert!(zeta_tail(&p.real(2), &p).unwrap() >= 0.6449);
    }
}
