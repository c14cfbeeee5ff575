use rug::ops::Pow;
use rug::Float;

use super::sieve::Sieve;
use crate::error::domain;
use crate::numerics::HpReal;
use crate::Result;

/// `p^(-beta)`, exact to rounding when `2 beta` is a small integer.
pub fn neg_power(p: u64, beta: &HpReal) -> HpReal {
    let bits = beta.prec();
    let twice = Float::with_val(bits, beta * 2u32);
    if twice.is_integer() && twice > 0 && twice < 4096 {
        let t = twice.to_u32_saturating().unwrap_or(0);
        let base = Float::with_val(bits, p);
        let mut v = Float::with_val(bits, (&base).pow(t / 2));
        if t % 2 == 1 {
            v *= base.sqrt();
        }
        return v.recip();
    }
    let lnp = Float::with_val(bits, p).ln();
    Float::with_val(bits, -(lnp * beta)).exp()
}

/// Local factor of `sigma_{-beta}(a; k)` at a prime `p` with `p^e || k`,
/// given `x = p^(-beta)`: the Gaussian binomial `[e + a - 1, a - 1]_x`.
pub fn sigma_poch_local(x: &HpReal, a: u32, e: u32) -> HpReal {
    let bits = x.prec();
    let lo = a.saturating_sub(1).min(e);
    let hi = a.saturating_sub(1).max(e);
    let mut num = Float::with_val(bits, 1);
    let mut den = Float::with_val(bits, 1);
    let mut xi = Float::with_val(bits, 1);
    let mut xh = Float::with_val(bits, x.pow(hi));
    for _ in 0..lo {
        xi *= x;
        xh *= x;
        num *= Float::with_val(bits, 1u32 - &xh);
        den *= Float::with_val(bits, 1u32 - &xi);
    }
    num / den
}

/// `sigma_{-beta}(p^e) = (1 - x^(e+1)) / (1 - x)` with `x = p^(-beta)`.
pub fn sigma_neg_local(x: &HpReal, e: u32) -> HpReal {
    let bits = x.prec();
    let top = Float::with_val(bits, 1u32 - Float::with_val(bits, x.pow(e + 1)));
    top / Float::with_val(bits, 1u32 - x)
}

fn check_gamma(gamma_eff: &HpReal) -> Result<()> {
    if *gamma_eff <= 0 {
        return Err(domain(format!("divisor sums need a positive exponent, got {}", gamma_eff.to_f64())));
    }
    Ok(())
}

/// `sum_{d | n} d^(-gamma_eff)`.
pub fn sigma_neg(gamma_eff: &HpReal, n: u64) -> Result<HpReal> {
    sigma_neg_with(Sieve::shared(), gamma_eff, n)
}

pub fn sigma_neg_with(sieve: &Sieve, gamma_eff: &HpReal, n: u64) -> Result<HpReal> {
    check_gamma(gamma_eff)?;
    let mut acc = Float::with_val(gamma_eff.prec(), 1);
    sieve.for_each_prime_power(n, |p, e| {
        acc *= sigma_neg_local(&neg_power(p, gamma_eff), e);
    })?;
    Ok(acc)
}

/// `sigma_{-gamma_eff}(a; k)`, the divisor-sum Pochhammer analogue, from the
/// factorization of `k` alone.
pub fn sigma_poch(gamma_eff: &HpReal, a: u32, k: u64) -> Result<HpReal> {
    sigma_poch_multi(gamma_eff, &[a], k)
}

/// `prod_i sigma_{-gamma_eff}(a_i; k)`.
pub fn sigma_poch_multi(gamma_eff: &HpReal, params: &[u32], k: u64) -> Result<HpReal> {
    check_gamma(gamma_eff)?;
    if let Some(bad) = params.iter().find(|&&a| a == 0) {
        return Err(domain(format!("Pochhammer parameter must be >= 1, got {bad}")));
    }
    let mut acc = Float::with_val(gamma_eff.prec(), 1);
    if params.iter().all(|&a| a == 1) {
        return Ok(acc);
    }
    Sieve::shared().for_each_prime_power(k, |p, e| {
        let x = neg_power(p, gamma_eff);
        for &a in params {
            acc *= sigma_poch_local(&x, a, e);
        }
    })?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Precision;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn neg_power_paths_agree() {
        let p = Precision::default();
        for beta in [1.0, 1.5, 2.0, 0.5, 3.5] {
            let fast = neg_power(7, &p.real(beta));
            let slow = Float::with_val(p.bits(), Float::with_val(p.bits(), 7).ln() * -p.real(beta)).exp();
            let d = Float::with_val(p.bits(), &fast - &slow) / &slow;
            assert!(d.abs() < 1e-32);
        }
        assert!(close(&neg_power(2, &p.real(0.3)), 2f64.powf(-0.3), 1e-15));
    }

    #[test]
    fn sigma_neg_examples() {
        let p = Precision::default();
        for g in [0.7, 1.0, 2.5] {
            assert_eq!(sigma_neg(&p.real(g), 1).unwrap(), 1);
        }
        assert!(close(&sigma_neg(&p.one(), 6).unwrap(), 2.0, 1e-15));
        assert!(close(&sigma_neg(&p.real(2), 4).unwrap(), 1.3125, 1e-15));
        assert!(sigma_neg(&p.zero(), 4).is_err());
    }

    #[test]
    fn sigma_poch_examples() {
        let p = Precision::default();
        let g = p.real(1.3);
        for k in [1, 2, 12, 360, 9_699_690] {
            assert_eq!(sigma_poch(&g, 1, k).unwrap(), 1);
        }
        for a in 1..6 {
            assert_eq!(sigma_poch(&g, a, 1).unwrap(), 1);
        }
        for k in [2, 12, 97, 360, 1001] {
            let two = sigma_poch(&g, 2, k).unwrap();
            let s = sigma_neg(&g, k).unwrap();
            assert!(close(&two, s.to_f64(), 1e-15));
        }
        assert!(close(&sigma_poch(&p.one(), 3, 2).unwrap(), 1.75, 1e-15));
    }

    #[test]
    fn multi_parameter_products() {
        let p = Precision::default();
        let g = p.one();
        assert_eq!(sigma_poch_multi(&g, &[1, 1, 1], 360).unwrap(), 1);
        let multi = sigma_poch_multi(&g, &[6, 1, 1], 6).unwrap();
        assert_eq!(multi, sigma_poch(&g, 6, 6).unwrap());
        assert!(close(&sigma_poch_multi(&g, &[2, 2], 6).unwrap(), 4.0, 1e-15));
        assert!(sigma_poch_multi(&g, &[0], 6).is_err());
    }

    #[test]
    fn local_factor_symmetry() {
        let p = Precision::default();
        let x = p.real(0.37);
        for a in 1..7 {
            for e in 0..7 {
                let u = sigma_poch_local(&x, a, e);
                let v = sigma_poch_local(&x, e + 1, a - 1);
                assert_eq!(u, v);
            }
        }
    }
}
