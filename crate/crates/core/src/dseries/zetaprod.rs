use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Float;

use super::sieve::Sieve;
use super::sigma::neg_power;
use crate::error::domain;
use crate::exec::Execution;
use crate::numerics::{ordered_product, zeta, zeta_tail, HpReal, Precision};
use crate::{Error, Result};

/// Integer parameter lists of a ratio `zeta(u_1, ..; gamma)_inf / zeta(v_1, ..; gamma)_inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaProductSpec {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    pub gamma: HpReal,
}

impl ZetaProductSpec {
    pub fn new(numerator: Vec<i64>, denominator: Vec<i64>, gamma: HpReal) -> Self {
        ZetaProductSpec { numerator, denominator, gamma }
    }

    /// Reciprocal ratio.
    pub fn inverted(&self) -> Self {
        ZetaProductSpec::new(self.denominator.clone(), self.numerator.clone(), self.gamma.clone())
    }

    fn check_region(&self) -> Result<()> {
        if self.gamma <= 0 {
            return Err(domain("gamma must be positive"));
        }
        for &u in self.numerator.iter().chain(&self.denominator) {
            if Float::with_val(self.gamma.prec(), &self.gamma * u) <= 1 {
                return Err(domain(format!(
                    "parameter {u} puts zeta({u} * {}) outside Re > 1",
                    self.gamma.to_f64()
                )));
            }
        }
        Ok(())
    }
}

/// `zeta(multiple * gamma)^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZetaFactor {
    pub multiple: i64,
    pub power: i64,
}

impl ZetaFactor {
    pub fn argument(&self, gamma: &HpReal) -> HpReal {
        Float::with_val(gamma.prec(), gamma * self.multiple)
    }
}

fn check_zeta_arg(s: &HpReal) -> Result<()> {
    if *s <= 1 {
        return Err(domain(format!("zeta argument {} is not > 1", s.to_f64())));
    }
    Ok(())
}

/// `zeta(a; gamma)_n = zeta(a gamma) zeta((a+1) gamma) ... zeta((a+n-1) gamma)`.
pub fn zeta_poch_finite(a: i64, gamma: &HpReal, n: u64, prec: &Precision) -> Result<HpReal> {
    let mut acc = prec.one();
    for k in 0..n {
        let s = Float::with_val(prec.bits(), gamma * (a + k as i64));
        check_zeta_arg(&s)?;
        acc *= zeta(&s, prec)?;
    }
    Ok(acc)
}

/// Euler product of `zeta(a; gamma)_n` over primes up to `prime_bound`, and
/// an upper bound on its distance to the full product.
///
/// With `s_j = (a+j) gamma` the omitted factors multiply to `exp(L)` where
/// `L <= sum_j P^(1-s_j) / ((s_j - 1)(1 - P^(-s_j)))`.
pub fn zeta_poch_euler(
    a: i64,
    gamma: &HpReal,
    n: u64,
    prime_bound: u64,
    exec: Execution,
    prec: &Precision,
) -> Result<(HpReal, HpReal)> {
    let bits = prec.bits();
    if n == 0 {
        return Ok((prec.one(), prec.zero()));
    }
    let betas: Vec<HpReal> = (0..n).map(|k| Float::with_val(bits, gamma * (a + k as i64))).collect();
    for s in &betas {
        check_zeta_arg(s)?;
    }
    let sieve = Sieve::covering(prime_bound);
    let primes = sieve.primes_up_to(prime_bound);
    let value = ordered_product(
        primes.len(),
        |i| {
            let p = u64::from(primes[i]);
            let mut local = Float::with_val(bits, 1);
            for s in &betas {
                local *= Float::with_val(bits, 1u32 - neg_power(p, s));
            }
            local.recip()
        },
        exec,
        prec,
    );
    let pb = Float::with_val(bits, prime_bound.max(1));
    let mut log_tail = prec.zero();
    for s in &betas {
        let s1 = Float::with_val(bits, s - 1u32);
        let p_s = neg_power(prime_bound.max(1), s);
        let lead = Float::with_val(bits, &p_s * &pb) / s1;
        log_tail += lead / Float::with_val(bits, 1u32 - &p_s);
    }
    let bound = Float::with_val(bits, &value * log_tail.exp_m1());
    Ok((value, bound))
}

/// Reduces `zeta(num; gamma)_inf / zeta(den; gamma)_inf` to finitely many zeta
/// values by pairing sorted parameters. Factors come back ordered by multiple
/// with zero powers removed.
pub fn telescope(spec: &ZetaProductSpec) -> Result<Vec<ZetaFactor>> {
    if spec.numerator.len() != spec.denominator.len() {
        return Err(Error::Pairing(format!(
            "{} numerator parameters against {} denominator parameters",
            spec.numerator.len(),
            spec.denominator.len()
        )));
    }
    let mut num = spec.numerator.clone();
    let mut den = spec.denominator.clone();
    num.sort_unstable();
    den.sort_unstable();
    let mut powers: BTreeMap<i64, i64> = BTreeMap::new();
    for (&u, &v) in num.iter().zip(&den) {
        if v >= u {
            for j in u..v {
                *powers.entry(j).or_default() += 1;
            }
        } else {
            for j in v..u {
                *powers.entry(j).or_default() -= 1;
            }
        }
    }
    Ok(powers
        .into_iter()
        .filter(|&(_, e)| e != 0)
        .map(|(multiple, power)| ZetaFactor { multiple, power })
        .collect())
}

/// `prod zeta(multiple gamma)^power`.
pub fn evaluate_zeta_factors(factors: &[ZetaFactor], gamma: &HpReal, prec: &Precision) -> Result<HpReal> {
    let mut num = prec.one();
    let mut den = prec.one();
    for f in factors {
        let z = zeta(&f.argument(gamma), prec)?;
        let zp = Float::with_val(prec.bits(), Pow::pow(&z, f.power.unsigned_abs() as u32));
        if f.power > 0 {
            num *= zp;
        } else {
            den *= zp;
        }
    }
    Ok(num / den)
}

/// The ratio of infinite zeta products truncated after `depth` shifts, with
/// a bound on the omitted part from `zeta(s) - 1 <= zeta_tail(s)`.
pub fn zeta_product_ratio_numeric(
    spec: &ZetaProductSpec,
    depth: u64,
    prec: &Precision,
) -> Result<(HpReal, HpReal)> {
    spec.check_region()?;
    let bits = prec.bits();
    let g = &spec.gamma;
    let mut num = prec.one();
    let mut den = prec.one();
    for j in 0..depth as i64 {
        for &u in &spec.numerator {
            num *= zeta(&Float::with_val(bits, g * (u + j)), prec)?;
        }
        for &v in &spec.denominator {
            den *= zeta(&Float::with_val(bits, g * (v + j)), prec)?;
        }
    }
    let value = num / den;
    // sum over j >= depth of zeta_tail((u+j) gamma) <= first / (1 - 2^-gamma)
    let ratio = Float::with_val(bits, 1u32 - neg_power(2, g));
    let mut log_tail = prec.zero();
    for &u in spec.numerator.iter().chain(&spec.denominator) {
        let s = Float::with_val(bits, g * (u + depth as i64));
        let first = if s >= 2 {
            zeta_tail(&s, prec)?
        } else {
            Float::with_val(bits, zeta(&s, prec)? - 1u32)
        };
        log_tail += first / &ratio;
    }
    if spec.numerator == spec.denominator {
        return Ok((value, prec.zero()));
    }
    let bound = Float::with_val(bits, value.abs_ref()) * log_tail.exp_m1();
    Ok((value, bound))
}

/// Depth at which `(p^(-u gamma); p^(-gamma))_depth` equals the infinite
/// product to working precision for every prime.
pub fn full_depth(gamma: &HpReal, prec: &Precision) -> u64 {
    let g = gamma.to_f64().max(1e-3);
    (f64::from(prec.bits()) / g).ceil() as u64 + 8
}

/// `prod_{p | m} prod_num 1/(p^(-u gamma); p^(-gamma))_depth` over the same
/// for the denominator: the Euler product restricted to the primes of `m`.
pub fn restricted_euler_product_j(
    spec: &ZetaProductSpec,
    m: u64,
    depth: u64,
    prec: &Precision,
) -> Result<HpReal> {
    if m < 2 {
        return Err(domain("restricted products need m >= 2"));
    }
    if spec.gamma <= 0 {
        return Err(domain("gamma must be positive"));
    }
    let bits = prec.bits();
    let f = super::sieve::factorize(m)?;
    let mut num = prec.one();
    let mut den = prec.one();
    for p in f.primes() {
        let x = neg_power(p, &spec.gamma);
        let poch = |u: i64| -> Result<HpReal> {
            if u < 1 {
                return Err(domain(format!("J parameter {u} must be positive")));
            }
            let mut xu = Float::with_val(bits, Pow::pow(&x, u as u32));
            let mut acc = Float::with_val(bits, 1);
            for _ in 0..depth {
                acc *= Float::with_val(bits, 1u32 - &xu);
                xu *= &x;
            }
            Ok(acc)
        };
        for &u in &spec.numerator {
            den *= poch(u)?;
        }
        for &v in &spec.denominator {
            num *= poch(v)?;
        }
    }
    Ok(num / den)
}
