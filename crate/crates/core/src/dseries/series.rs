use rug::{Assign, Float};

use super::sieve::{factorize, Sieve};
use super::sigma::neg_power;
use crate::error::domain;
use crate::exec::Execution;
use crate::numerics::{indexed_sum, non_converged_error, zeta, HpReal, Precision, SummationDiagnostics};
use crate::{Error, Result};

/// Required excess of `s gamma` over 1 for unrestricted series.
pub const CONVERGENCE_MARGIN: f64 = 0.05;

/// Largest integer the restricted enumerations will produce.
pub const SMOOTH_LIMIT: u64 = 1 << 62;

/// One `sigma_{-m gamma}(a; k)` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaFactor {
    pub gamma_multiple: u32,
    pub parameter: u32,
}

impl SigmaFactor {
    pub const fn new(gamma_multiple: u32, parameter: u32) -> Self {
        SigmaFactor { gamma_multiple, parameter }
    }
}

/// Which `k` a series runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    /// Every positive integer.
    All,
    /// `k` with `rad(k) = rad(m)`.
    SameRadical(u64),
    /// `k` with `rad(k) | rad(m)`, which adds `1` and the proper sub-radicals.
    RadicalDivides(u64),
}

impl Support {
    pub fn modulus(self) -> Option<u64> {
        match self {
            Support::All => None,
            Support::SameRadical(m) | Support::RadicalDivides(m) => Some(m),
        }
    }
}

/// `sum_k prod sigma(num; k) / prod sigma(den; k) / k^(s gamma)` over a support.
#[derive(Clone, Debug, PartialEq)]
pub struct DSeriesSpec {
    pub numerator: Vec<SigmaFactor>,
    pub denominator: Vec<SigmaFactor>,
    pub power_exponent: i64,
    pub gamma: HpReal,
    pub support: Support,
}

impl DSeriesSpec {
    /// Entries are well formed; says nothing about convergence.
    pub fn validate_terms(&self) -> Result<()> {
        if self.gamma <= 0 {
            return Err(domain("gamma must be positive"));
        }
        for f in self.numerator.iter().chain(&self.denominator) {
            if f.gamma_multiple == 0 || f.parameter == 0 {
                return Err(domain(format!("sigma factor {f:?} needs both entries >= 1")));
            }
        }
        Ok(())
    }

    /// Well formed and convergent on its support.
    pub fn validate(&self) -> Result<()> {
        self.validate_terms()?;
        let t = self.exponent().to_f64();
        match self.support {
            Support::All => {
                if t <= 1.0 + CONVERGENCE_MARGIN {
                    return Err(domain(format!(
                        "series needs s*gamma > {}, got {t}",
                        1.0 + CONVERGENCE_MARGIN
                    )));
                }
            }
            Support::SameRadical(m) | Support::RadicalDivides(m) => {
                if m < 2 {
                    return Err(domain("prime restriction needs m >= 2"));
                }
                if t <= 0.0 {
                    return Err(domain(format!("restricted series needs s*gamma > 0, got {t}")));
                }
            }
        }
        Ok(())
    }

    /// `s gamma`.
    pub fn exponent(&self) -> HpReal {
        Float::with_val(self.gamma.prec(), &self.gamma * self.power_exponent)
    }

    pub fn with_support(&self, support: Support) -> Self {
        DSeriesSpec { support, ..self.clone() }
    }

    fn multiples(&self) -> Vec<u32> {
        let mut m: Vec<u32> =
            self.numerator.iter().chain(&self.denominator).map(|f| f.gamma_multiple).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    /// Pairs `(gamma multiple, i)` such that every local factor of the sigma
    /// ratio at `p` is at most `prod 1 / (1 - p^(-i m gamma))`.
    ///
    /// Within a multiple, parameters are sorted descending and paired; a
    /// numerator `u` over a denominator `v < u` contributes `i` in `v..u`, and
    /// an unpaired numerator counts as `v = 1`.
    pub fn growth_exponents(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for m in self.multiples() {
            let mut num: Vec<u32> =
                self.numerator.iter().filter(|f| f.gamma_multiple == m).map(|f| f.parameter).collect();
            let mut den: Vec<u32> =
                self.denominator.iter().filter(|f| f.gamma_multiple == m).map(|f| f.parameter).collect();
            num.sort_unstable_by(|a, b| b.cmp(a));
            den.sort_unstable_by(|a, b| b.cmp(a));
            for (j, &u) in num.iter().enumerate() {
                let v = den.get(j).copied().unwrap_or(1);
                for i in v..u {
                    out.push((m, i));
                }
            }
        }
        out
    }
}

/// `k <= bound` with `rad(k) = rad(m)`, ascending.
pub fn enumerate_sm(m: u64, bound: u64) -> Result<Vec<u64>> {
    enumerate_support(m, bound, true)
}

/// `k <= bound` with `rad(k) | rad(m)`, ascending and starting at `1`.
pub fn enumerate_radical_closure(m: u64, bound: u64) -> Result<Vec<u64>> {
    enumerate_support(m, bound, false)
}

fn enumerate_support(m: u64, bound: u64, strict: bool) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(domain("S_m needs m >= 2"));
    }
    let primes: Vec<u64> = factorize(m)?.primes().collect();
    let bound = bound.min(SMOOTH_LIMIT);
    let mut out = Vec::new();
    fn walk(primes: &[u64], acc: u64, bound: u64, strict: bool, out: &mut Vec<u64>) {
        let Some((&p, rest)) = primes.split_first() else {
            out.push(acc);
            return;
        };
        let mut v = if strict { acc.checked_mul(p) } else { Some(acc) };
        while let Some(x) = v.filter(|&x| x <= bound) {
            walk(rest, x, bound, strict, out);
            v = x.checked_mul(p);
        }
    }
    walk(&primes, 1, bound, strict, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// `p^(-j gamma)` for every `j` a local factor up to exponent `e_max` needs.
struct PrimePowers {
    powers: Vec<HpReal>,
}

impl PrimePowers {
    fn new(spec: &DSeriesSpec, p: u64, e_max: u32) -> Self {
        let base = neg_power(p, &spec.gamma);
        let top = spec
            .numerator
            .iter()
            .chain(&spec.denominator)
            .map(|f| f.gamma_multiple * (f.parameter - 1 + e_max))
            .chain(std::iter::once(spec.power_exponent.unsigned_abs() as u32 * e_max))
            .max()
            .unwrap_or(0);
        let mut powers = Vec::with_capacity(top as usize + 1);
        powers.push(Float::with_val(base.prec(), 1));
        for j in 1..=top as usize {
            let next = Float::with_val(base.prec(), &powers[j - 1] * &base);
            powers.push(next);
        }
        PrimePowers { powers }
    }
}

/// The factor a term picks up from `p^e || k`, including `p^(-e s gamma)`.
///
/// Each sigma factor is the Gaussian binomial
/// `prod_{i=1}^{lo} (1 - x^(hi+i)) / (1 - x^i)` in `x = p^(-m gamma)` with
/// `{lo, hi} = {min, max}(a - 1, e)`.
fn local_term(spec: &DSeriesSpec, pw: &PrimePowers, e: u32) -> HpReal {
    let pws = &pw.powers;
    let bits = pws[0].prec();
    let mut num = Float::with_val(bits, 1);
    let mut den = Float::with_val(bits, 1);
    let mut tmp = Float::new(bits);
    let mut gauss = |top: &mut Float, bottom: &mut Float, f: &SigmaFactor| {
        let m = f.gamma_multiple as usize;
        let lo = (f.parameter - 1).min(e) as usize;
        let hi = (f.parameter - 1).max(e) as usize;
        for i in 1..=lo {
            tmp.assign(1u32 - &pws[m * (hi + i)]);
            *top *= &tmp;
            tmp.assign(1u32 - &pws[m * i]);
            *bottom *= &tmp;
        }
    };
    for f in &spec.numerator {
        gauss(&mut num, &mut den, f);
    }
    for f in &spec.denominator {
        gauss(&mut den, &mut num, f);
    }
    let s = spec.power_exponent * i64::from(e);
    if s >= 0 {
        num *= &pws[s as usize];
    } else {
        den *= &pws[s.unsigned_abs() as usize];
    }
    num / den
}

/// One summand at `k`.
pub fn dterm_value(spec: &DSeriesSpec, k: u64) -> Result<HpReal> {
    if k == 0 {
        return Err(domain("series index starts at 1"));
    }
    spec.validate_terms()?;
    let mut acc = Float::with_val(spec.gamma.prec(), 1);
    Sieve::shared().for_each_prime_power(k, |p, e| {
        let pw = PrimePowers::new(spec, p, e);
        acc *= local_term(spec, &pw, e);
    })?;
    Ok(acc)
}

/// Local factors `term(p^e)` for every prime power up to `bound`, as one
/// flat list with `slot[p] + e - 1` locating `p^e`.
struct LocalTable {
    values: Vec<HpReal>,
    slot: Vec<u32>,
}

impl LocalTable {
    fn new(spec: &DSeriesSpec, sieve: &Sieve, bound: u64, exec: Execution) -> Self {
        let rows = local_rows(spec, sieve, bound, exec);
        let mut slot = vec![u32::MAX; bound as usize + 1];
        let mut values = Vec::new();
        for (&p, row) in sieve.primes_up_to(bound).iter().zip(rows) {
            slot[p as usize] = values.len() as u32;
            values.extend(row);
        }
        LocalTable { values, slot }
    }

    fn get(&self, p: u64, e: u32) -> &HpReal {
        &self.values[self.slot[p as usize] as usize + e as usize - 1]
    }
}

fn local_rows(spec: &DSeriesSpec, sieve: &Sieve, bound: u64, exec: Execution) -> Vec<Vec<HpReal>> {
    let primes = sieve.primes_up_to(bound);
    crate::exec::map_slice(primes, exec, |&p| {
        let p = u64::from(p);
        let e_max = bound.ilog(p);
        let pw = PrimePowers::new(spec, p, e_max);
        let mut row = Vec::with_capacity(e_max as usize);
        let mut q = p;
        let mut e = 1;
        loop {
            row.push(local_term(spec, &pw, e));
            match q.checked_mul(p) {
                Some(next) if next <= bound => {
                    q = next;
                    e += 1;
                }
                _ => break,
            }
        }
        row
    })
}

/// Sums a series up to `k_bound` and bounds everything beyond.
///
/// The tolerance is relative to the partial sum: the result is converged when
/// `tail_bound <= tolerance * |sum|`, otherwise a non-convergence error
/// carries the partial sum and the bound.
pub fn dseries_sum(
    spec: &DSeriesSpec,
    tolerance: &HpReal,
    k_bound: u64,
    exec: Execution,
    prec: &Precision,
) -> Result<(HpReal, SummationDiagnostics)> {
    spec.validate()?;
    if k_bound == 0 {
        return Err(domain("kBound must be positive"));
    }
    let bits = prec.bits();
    let (sum, used, last, tail) = match spec.support {
        Support::All => {
            let sieve = Sieve::covering(k_bound);
            let table = LocalTable::new(spec, &sieve, k_bound, exec);
            let term = |i: usize| -> HpReal {
                let k = i as u64 + 1;
                let mut acc: Option<Float> = None;
                sieve
                    .for_each_prime_power(k, |p, e| match acc.as_mut() {
                        Some(a) => *a *= table.get(p, e),
                        None => acc = Some(table.get(p, e).clone()),
                    })
                    .expect("k within sieve");
                acc.unwrap_or_else(|| Float::with_val(bits, 1))
            };
            let sum = indexed_sum(k_bound as usize, term, exec, prec);
            let last = term(k_bound as usize - 1);
            let tail = unrestricted_tail(spec, k_bound, prec)?;
            (sum, k_bound, last, tail)
        }
        Support::SameRadical(m) | Support::RadicalDivides(m) => {
            let strict = matches!(spec.support, Support::SameRadical(_));
            let ks = enumerate_support(m, k_bound, strict)?;
            let powers: Vec<(u64, PrimePowers)> = factorize(m)?
                .primes()
                .map(|p| (p, PrimePowers::new(spec, p, SMOOTH_LIMIT.ilog(p))))
                .collect();
            let terms: Vec<HpReal> = ks.iter().map(|&k| restricted_term(spec, k, &powers)).collect();
            let sum = indexed_sum(terms.len(), |i| terms[i].clone(), Execution::Sequential, prec);
            let last = terms.last().cloned().unwrap_or_else(|| prec.zero());
            let tail = restricted_tail(spec, m, k_bound.min(SMOOTH_LIMIT), strict, prec)?;
            (sum, ks.len() as u64, last, tail)
        }
    };
    let scale = Float::with_val(bits, sum.abs_ref());
    if tail <= Float::with_val(bits, tolerance * &scale) {
        let diag = SummationDiagnostics {
            terms_used: used,
            last_term_magnitude: last.abs(),
            tail_bound: tail,
            converged: true,
        };
        Ok((sum, diag))
    } else {
        Err(non_converged_error("Dirichlet series", sum, used, last, tail))
    }
}

/// Terms of restricted series can exceed the sieve, so they are built from
/// the known primes of `m`.
fn restricted_term(spec: &DSeriesSpec, k: u64, powers: &[(u64, PrimePowers)]) -> HpReal {
    let mut acc = Float::with_val(spec.gamma.prec(), 1);
    let mut rest = k;
    for (p, pw) in powers {
        let mut e = 0;
        while rest.is_multiple_of(*p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            acc *= local_term(spec, pw, e);
        }
    }
    debug_assert_eq!(rest, 1);
    acc
}

/// Relative safety factor applied to bounds assembled in `f64`.
const BOUND_SLACK: f64 = 1.0 + 1e-9;

fn to_hp(x: f64, prec: &Precision) -> Result<HpReal> {
    if !x.is_finite() {
        return Err(Error::NonConvergence {
            context: "tail bound is not finite".into(),
            partial: Box::new(prec.zero()),
            diagnostics: Box::new(SummationDiagnostics {
                terms_used: 0,
                last_term_magnitude: prec.zero(),
                tail_bound: prec.real(f64::INFINITY),
                converged: false,
            }),
        });
    }
    Ok(prec.real(x * BOUND_SLACK))
}

/// `prod_p c_p` with `c_p = max(1, p^(-eps) / (1 - p^(-sigma)))`, which is 1
/// from the first prime where `p^eps (1 - p^(-sigma)) >= 1` on.
fn trade_constant(sigma: f64, eps: f64, primes: &[u32]) -> Option<f64> {
    let mut c = 1.0;
    for &p in primes {
        let p = f64::from(p);
        let r = p.powf(-eps) / (1.0 - p.powf(-sigma));
        if r <= 1.0 {
            return Some(c);
        }
        c *= r;
    }
    None
}

/// `sum_{k > K} f(k) k^(-t)` for the sigma ratio `f`.
///
/// Factors of the growth product with `i m gamma > 1` are bounded by
/// `zeta(i m gamma)` overall; the rest by `c(eps) k^eps` each. With `n` such
/// factors the tail is at most `C K^(1-t') / (t' - 1)`, `t' = t - n eps`,
/// minimised over a grid of `eps`.
pub fn unrestricted_tail(spec: &DSeriesSpec, k_bound: u64, prec: &Precision) -> Result<HpReal> {
    let g = spec.gamma.to_f64();
    let t = spec.exponent().to_f64();
    let mut big = 1.0f64;
    let mut small = Vec::new();
    for (m, i) in spec.growth_exponents() {
        let sigma = f64::from(m) * f64::from(i) * g;
        if sigma > 1.0 + 1e-9 {
            let z = zeta(&prec.real(sigma), prec)?.to_f64();
            big *= z;
        } else {
            small.push(sigma);
        }
    }
    let k = k_bound as f64;
    let n = small.len() as f64;
    let tail_at = |tp: f64, c: f64| c * k.powf(1.0 - tp) / (tp - 1.0);
    if small.is_empty() {
        return to_hp(tail_at(t, big), prec);
    }
    let primes = Sieve::shared().primes();
    let eps_max = (t - 1.0) / n;
    let mut best = f64::INFINITY;
    for step in 1..200 {
        let eps = eps_max * f64::from(step) / 200.0;
        let mut c = big;
        let mut ok = true;
        for &sigma in &small {
            match trade_constant(sigma, eps, primes) {
                Some(x) => c *= x,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = best.min(tail_at(t - n * eps, c));
        }
    }
    to_hp(best, prec)
}

/// Rankin bound for restricted series: for `k > K` and `0 < delta < t`,
/// `k^(-t) <= K^(-delta) k^(-(t - delta))`, and the resulting full sum
/// factors over the primes of `m` with each local factor at most `F_p`.
fn restricted_tail(spec: &DSeriesSpec, m: u64, k_bound: u64, strict: bool, prec: &Precision) -> Result<HpReal> {
    let g = spec.gamma.to_f64();
    let t = spec.exponent().to_f64();
    let growth = spec.growth_exponents();
    let primes: Vec<u64> = factorize(m)?.primes().collect();
    let k = k_bound as f64;
    let mut best = f64::INFINITY;
    for step in 1..200 {
        let delta = t * f64::from(step) / 200.0;
        let tau = t - delta;
        let mut total = k.powf(-delta);
        for &p in &primes {
            let pf = p as f64;
            let big_f: f64 = growth
                .iter()
                .map(|&(mm, i)| 1.0 / (1.0 - pf.powf(-f64::from(mm) * f64::from(i) * g)))
                .product();
            let geo = pf.powf(-tau) / (1.0 - pf.powf(-tau));
            total *= if strict { big_f * geo } else { 1.0 + big_f * geo };
        }
        best = best.min(total);
    }
    to_hp(best, prec)
}
