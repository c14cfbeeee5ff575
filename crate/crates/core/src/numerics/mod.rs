//! Precision policy, the Riemann zeta function and deterministic compensated
//! summation.

mod bernoulli;
mod summation;
mod zeta;

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Assign, Float};

pub use bernoulli::{bernoulli, bernoulli_polynomial};
pub(crate) use summation::non_converged as non_converged_error;
pub use summation::{compensated_sum, indexed_sum, ordered_product, BlockedSum, Neumaier};
pub use zeta::{power_tail_sum, zeta, zeta_tail};

/// Working real type. Every value carries its own MPFR precision, set from a
/// [`Precision`] when it is created.
pub type HpReal = Float;

/// Extra bits carried beyond the requested number of decimal digits.
pub const GUARD_BITS: u32 = 32;

/// Smallest accepted number of significant decimal digits.
pub const MIN_DIGITS: u32 = 15;

/// Precision context: number of significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 30 }
    }
}

impl Precision {
    pub fn new(digits: u32) -> crate::Result<Self> {
        if digits < MIN_DIGITS {
            return Err(crate::Error::InvalidParameter(format!(
                "digits must be at least {MIN_DIGITS}, got {digits}"
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// MPFR mantissa bits used for every value in this context.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn real<T>(&self, v: T) -> HpReal
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn zero(&self) -> HpReal {
        Float::new(self.bits())
    }

    pub fn one(&self) -> HpReal {
        self.real(1)
    }

    /// `10^(1-digits)`: the per-operation relative error promised to callers.
    pub fn epsilon(&self) -> HpReal {
        self.pow10(1 - self.digits as i32)
    }

    /// Unit roundoff of the working mantissa, `2^(1-bits)`.
    pub fn unit_roundoff(&self) -> HpReal {
        Float::with_val(self.bits(), Float::i_exp(1, 1 - self.bits() as i32))
    }

    pub fn pow10(&self, e: i32) -> HpReal {
        self.real(10).pow(e)
    }

    pub fn pi(&self) -> HpReal {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    /// Parses a decimal literal at this precision.
    pub fn parse(&self, s: &str) -> crate::Result<HpReal> {
        Float::parse(s)
            .map(|p| Float::with_val(self.bits(), p))
            .map_err(|e| crate::Error::InvalidParameter(format!("`{s}` is not a number: {e}")))
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.25e-3`.
    pub fn format(&self, v: &HpReal) -> String {
        format_sci(v, self.digits)
    }
}

/// Scientific notation with `sig` significant digits. Zero renders as `0`.
pub fn format_sci(v: &Float, sig: u32) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let (neg, mantissa, exp) = v.to_sign_string_exp_round(10, Some(sig as usize), Round::Nearest);
    let exp = exp.unwrap_or(0) - 1;
    let (head, tail) = mantissa.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// Outcome of a truncated summation.
#[derive(Clone, Debug, PartialEq)]
pub struct SummationDiagnostics {
    pub terms_used: u64,
    pub last_term_magnitude: HpReal,
    pub tail_bound: HpReal,
    pub converged: bool,
}

impl SummationDiagnostics {
    /// Diagnostics of a finite sum evaluated completely.
    pub fn exact(terms_used: u64, last_term: &HpReal) -> Self {
        SummationDiagnostics {
            terms_used: terms_used.max(1),
            last_term_magnitude: last_term.clone().abs(),
            tail_bound: Float::new(last_term.prec()),
            converged: true,
        }
    }
}

impl fmt::Display for SummationDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "terms={} last|t|={} tail<={} converged={}",
            self.terms_used,
            self.last_term_magnitude.to_f64(),
            self.tail_bound.to_f64(),
            self.converged
        )
    }
}
