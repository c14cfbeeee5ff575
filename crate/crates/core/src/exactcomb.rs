//! Exact verification of the binomial-sum forms of Dixon's identity and of
//! the terminating well-poised 3F2 rewriting.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::domain;
use crate::Result;

pub type ExactInt = Integer;
pub type ExactRational = Rational;

fn small(n: &Integer, what: &str) -> Result<u32> {
    if n.is_negative() {
        return Err(domain(format!("{what} must be non-negative, got {n}")));
    }
    n.to_u32().ok_or_else(|| domain(format!("{what} = {n} is too large")))
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: &Integer, k: &Integer) -> Result<Integer> {
    let n = small(n, "binomial n")?;
    if k.is_negative() || *k > n {
        return Ok(Integer::new());
    }
    let k = k.to_u32().expect("k <= n fits u32");
    Ok(Integer::from(Integer::binomial_u(n, k)))
}

fn binom(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn args(vals: &[&Integer]) -> Result<Vec<i64>> {
    vals.iter().map(|v| small(v, "parameter").map(i64::from)).collect()
}

/// `sum_{k=-a}^{a} (-1)^k C(2a, k+a)^3`.
pub fn dixon_classical_lhs(a: &Integer) -> Result<Integer> {
    let a = i64::from(small(a, "a")?);
    let mut acc = Integer::new();
    for k in -a..=a {
        let c = binom(2 * a, k + a);
        let cube = c.pow(3u32);
        if k.rem_euclid(2) == 0 {
            acc += cube;
        } else {
            acc -= cube;
        }
    }
    Ok(acc)
}

/// `(3a)! / (a!)^3`.
pub fn dixon_classical_rhs(a: &Integer) -> Result<Integer> {
    let a = small(a, "a")?;
    let fa = factorial(a);
    let den = fa.pow(3u32);
    Ok(factorial(3 * a) / den)
}

/// `sum_{k=-a}^{a} (-1)^k C(a+b, a+k) C(b+c, b+k) C(c+a, c+k)`, summing over
/// the printed range even when `b` or `c` is smaller than `a`.
pub fn dixon_general_lhs(a: &Integer, b: &Integer, c: &Integer) -> Result<Integer> {
    let v = args(&[a, b, c])?;
    let (a, b, c) = (v[0], v[1], v[2]);
    let mut acc = Integer::new();
    for k in -a..=a {
        let t = binom(a + b, a + k) * binom(b + c, b + k) * binom(c + a, c + k);
        if k.rem_euclid(2) == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc)
}

/// Multinomial `(a+b+c)! / (a! b! c!)`.
pub fn dixon_general_rhs(a: &Integer, b: &Integer, c: &Integer) -> Result<Integer> {
    let v = args(&[a, b, c])?;
    let (a, b, c) = (v[0] as u32, v[1] as u32, v[2] as u32);
    let den = factorial(a) * factorial(b) * factorial(c);
    Ok(factorial(a + b + c) / den)
}

/// `C(b+c, b-a) C(c+a, c-a) 3F2(-2a, -a-b, -a-c; 1+b-a, 1+c-a; 1)` exactly,
/// with no sign correction.
///
/// When `b < a` or `c < a` the prefactor vanishes while a denominator
/// Pochhammer symbol hits zero; the product is then read in the regularized
/// sense, `1/((b-a)! (1+b-a)_n) = 1/(b-a+n)!`, which is zero until
/// `n >= a-b`. The series is summed from its first surviving term by the
/// exact term-ratio recurrence and stops when the `-2a` numerator parameter
/// terminates it.
pub fn terminating_3f2(a: &Integer, b: &Integer, c: &Integer) -> Result<Rational> {
    let v = args(&[a, b, c])?;
    let (a, b, c) = (v[0], v[1], v[2]);
    let start = 0.max(a - b).max(a - c);
    if start > 2 * a {
        return Ok(Rational::new());
    }
    // term at n = start, written as
    //   (b+c)!/(2a)! * (-2a)_n (-a-b)_n (-a-c)_n / ((b-a+n)! (c-a+n)! n!)
    let n0 = start;
    let num = factorial((b + c) as u32)
        * rising(-2 * a, n0)
        * rising(-a - b, n0)
        * rising(-a - c, n0);
    let den = factorial((2 * a) as u32)
        * factorial((b - a + n0) as u32)
        * factorial((c - a + n0) as u32)
        * factorial(n0 as u32);
    let mut term = Rational::from((num, den));
    let mut acc = term.clone();
    for n in n0..2 * a {
        // t_{n+1}/t_n = (n-2a)(n-a-b)(n-a-c) / ((n+1)(n+1+b-a)(n+1+c-a))
        let r = Rational::from((
            Integer::from(n - 2 * a) * (n - a - b) * (n - a - c),
            Integer::from(n + 1) * (n + 1 + b - a) * (n + 1 + c - a),
        ));
        term *= r;
        if term.is_zero() {
            break;
        }
        acc += &term;
    }
    Ok(acc)
}

// (x)_n for integer x
fn rising(x: i64, n: i64) -> Integer {
    let mut acc = Integer::from(1);
    for j in 0..n {
        acc *= x + j;
    }
    acc
}

/// Which printed identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombinatorialKind {
    Classical,
    General,
    Terminating,
}

/// Exact comparison outcome for one candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactVerdict {
    Exact,
    /// Equal after multiplying by `-1`.
    UpToSign,
    Mismatch,
}

pub fn compare_exact(lhs: &Rational, rhs: &Rational) -> ExactVerdict {
    if lhs == rhs {
        ExactVerdict::Exact
    } else if *lhs == Rational::from(-rhs) {
        ExactVerdict::UpToSign
    } else {
        ExactVerdict::Mismatch
    }
}

/// One exactly evaluated right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCandidate {
    pub label: &'static str,
    pub value: Rational,
    pub verdict: ExactVerdict,
}

/// Both sides of one combinatorial identity instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinatorialCheck {
    pub kind: CombinatorialKind,
    pub lhs: Rational,
    pub terms: u64,
    pub candidates: Vec<ExactCandidate>,
}

/// Evaluates the left side and every right-hand candidate of `kind` exactly.
///
/// `params` is `[a]` for the classical sum and `[a, b, c]` otherwise. For the
/// terminating form the left side is the binomial sum and the candidates are
/// the multinomial, the rewriting as printed and the rewriting times `(-1)^a`.
pub fn verify_combinatorial(kind: CombinatorialKind, params: &[Integer]) -> Result<CombinatorialCheck> {
    let need = if kind == CombinatorialKind::Classical { 1 } else { 3 };
    if params.len() != need {
        return Err(domain(format!("{kind:?} takes {need} parameter(s), got {}", params.len())));
    }
    let a = &params[0];
    let terms = u64::from(small(a, "a")?) * 2 + 1;
    let (lhs, rhs) = match kind {
        CombinatorialKind::Classical => (dixon_classical_lhs(a)?, dixon_classical_rhs(a)?),
        _ => (
            dixon_general_lhs(a, &params[1], &params[2])?,
            dixon_general_rhs(a, &params[1], &params[2])?,
        ),
    };
    let lhs = Rational::from(lhs);
    let mut values = vec![("multinomial", Rational::from(rhs))];
    if kind == CombinatorialKind::Classical {
        values[0].0 = "factorial-ratio";
    }
    if kind == CombinatorialKind::Terminating {
        let printed = terminating_3f2(a, &params[1], &params[2])?;
        let corrected = if a.is_odd() { Rational::from(-&printed) } else { printed.clone() };
        values.push(("printed-terminating", printed));
        values.push(("sign-corrected-terminating", corrected));
    }
    let candidates = values
        .into_iter()
        .map(|(label, value)| ExactCandidate { label, verdict: compare_exact(&lhs, &value), value })
        .collect();
    Ok(CombinatorialCheck { kind, lhs, terms, candidates })
}
