use super::series::{DSeriesSpec, SigmaFactor, Support, CONVERGENCE_MARGIN};
use super::sieve::factorize;
use super::sigma::{neg_power, sigma_neg_local};
use super::zetaprod::{
    evaluate_zeta_factors, full_depth, restricted_euler_product_j, telescope, ZetaFactor, ZetaProductSpec,
};
use crate::error::domain;
use crate::numerics::{HpReal, Precision};
use crate::Result;

/// How a right-hand candidate is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum CandidateForm {
    /// Closed form evaluated to working precision.
    Value(HpReal),
    /// Another Dirichlet series, summed by the caller with its own tail bound.
    Series(DSeriesSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub label: &'static str,
    pub form: CandidateForm,
}

/// Left side and right-hand candidates of one corollary case.
#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryCase {
    pub case_id: u8,
    pub a: u32,
    pub gamma: HpReal,
    pub m: Option<u64>,
    /// The series the candidates are adjudicated against.
    pub lhs: DSeriesSpec,
    /// The summand exactly as printed.
    pub printed_lhs: DSeriesSpec,
    pub candidates: Vec<Candidate>,
}

fn factors(v: &[(u32, u32)]) -> Vec<SigmaFactor> {
    v.iter().map(|&(m, a)| SigmaFactor::new(m, a)).collect()
}

/// Term shapes `(numerator, denominator, s)`: the consistent one first, then
/// the printed one.
type Shape = (Vec<SigmaFactor>, Vec<SigmaFactor>, i64);

fn shapes(case: u8, a: u32) -> (Shape, Shape) {
    let s = i64::from(a);
    if case <= 2 {
        let num = factors(&[(1, 2 * a), (2, a + 1), (1, a)]);
        let den = factors(&[(1, 2 * a), (1, 2 * a), (2, a), (1, a + 1)]);
        let pnum = factors(&[(1, 2 * a), (2, 2), (1, a)]);
        let pden = factors(&[(1, 2 * a), (1, 2 * a), (2, a), (1, 2)]);
        ((num, den, s - 1), (pnum, pden, s - 1))
    } else {
        let num = factors(&[(1, 2 * a), (1, 2), (1, 2), (2, a + 1), (1, a)]);
        let den = factors(&[(1, 2 * a - 1), (1, 2 * a - 1), (2, a), (1, a + 1)]);
        let pden = factors(&[(1, 2 * a - 1), (1, 2 * a - 1), (2, a), (1, 2)]);
        ((num.clone(), den, s - 3), (num, pden, s - 3))
    }
}

fn spec_of(shape: &Shape, gamma: &HpReal, support: Support) -> DSeriesSpec {
    DSeriesSpec {
        numerator: shape.0.clone(),
        denominator: shape.1.clone(),
        power_exponent: shape.2,
        gamma: gamma.clone(),
        support,
    }
}

fn zeta_ratio(num: &[i64], den: &[i64], gamma: &HpReal, prec: &Precision) -> Result<HpReal> {
    let spec = ZetaProductSpec::new(num.to_vec(), den.to_vec(), gamma.clone());
    evaluate_zeta_factors(&telescope(&spec)?, gamma, prec)
}

fn simple_ratio(num: &[i64], den: &[i64], gamma: &HpReal, prec: &Precision) -> Result<HpReal> {
    let f: Vec<ZetaFactor> = num
        .iter()
        .map(|&m| ZetaFactor { multiple: m, power: 1 })
        .chain(den.iter().map(|&m| ZetaFactor { multiple: m, power: -1 }))
        .collect();
    evaluate_zeta_factors(&f, gamma, prec)
}

/// `prod_{p | m} prod sigma(p^e_num) / prod sigma(p^e_den)`.
fn sigma_prime_power_ratio(m: u64, num: &[u32], den: &[u32], gamma: &HpReal, prec: &Precision) -> Result<HpReal> {
    let mut n = prec.one();
    let mut d = prec.one();
    for p in factorize(m)?.primes() {
        let x = neg_power(p, gamma);
        for &e in num {
            n *= sigma_neg_local(&x, e);
        }
        for &e in den {
            d *= sigma_neg_local(&x, e);
        }
    }
    Ok(n / d)
}

/// Builds case `case_id` of the corollary at `(a, gamma)`; cases 2 and 4 take
/// the restricting modulus `m`.
pub fn corollary_case(
    case_id: u8,
    a: u32,
    gamma: &HpReal,
    m: Option<u64>,
    prec: &Precision,
) -> Result<CorollaryCase> {
    if !(1..=4).contains(&case_id) {
        return Err(domain(format!("corollary case must be 1..4, got {case_id}")));
    }
    if a < 2 {
        return Err(domain(format!("corollary needs a >= 2, got {a}")));
    }
    let restricted = case_id.is_multiple_of(2);
    let m = match (restricted, m) {
        (true, Some(m)) if m >= 2 => Some(m),
        (true, _) => return Err(domain(format!("case {case_id} needs a modulus m >= 2"))),
        (false, _) => None,
    };
    let shift = if case_id <= 2 { 1 } else { 3 };
    let margin = (f64::from(a) - f64::from(shift)) * gamma.to_f64();
    if margin <= 1.0 + CONVERGENCE_MARGIN {
        return Err(domain(format!(
            "case {case_id} needs (a-{shift})*gamma > {}, got {margin}",
            1.0 + CONVERGENCE_MARGIN
        )));
    }
    let (wp, printed) = shapes(case_id, a);
    let ai = i64::from(a);
    let mut candidates = Vec::new();
    let (lhs, printed_lhs) = match m {
        None => {
            let (mid_num, mid_den, simp_num, simp_den) = if case_id == 1 {
                (
                    vec![2 * ai, 2 * ai, ai - 1, ai - 1],
                    vec![2 * ai + 1, ai, ai, 2 * ai - 1],
                    vec![2 * ai, ai - 1],
                    vec![ai, 2 * ai - 1],
                )
            } else {
                (
                    vec![2 * ai - 1, 2 * ai - 1, ai + 1, ai - 3],
                    vec![2 * ai + 1, ai, ai, 2 * ai - 1],
                    vec![2 * ai - 1, 2 * ai, ai - 3, ai - 2],
                    vec![2 * ai - 3, 2 * ai - 2, ai - 1, ai],
                )
            };
            candidates.push(Candidate {
                label: "middle-form",
                form: CandidateForm::Value(zeta_ratio(&mid_num, &mid_den, gamma, prec)?),
            });
            candidates.push(Candidate {
                label: "printed-simplified",
                form: CandidateForm::Value(simple_ratio(&simp_num, &simp_den, gamma, prec)?),
            });
            let printed_lhs = spec_of(&printed, gamma, Support::All);
            candidates.push(Candidate {
                label: "printed-term-series",
                form: CandidateForm::Series(printed_lhs.clone()),
            });
            (spec_of(&wp, gamma, Support::All), printed_lhs)
        }
        Some(m) => {
            let (sig_num, sig_den, j_num, j_den) = if case_id == 2 {
                (
                    vec![a - 1, 2 * a - 2],
                    vec![2 * a - 1, a - 2],
                    vec![2 * ai + 1, ai, ai, 2 * ai - 1],
                    vec![2 * ai, 2 * ai, ai + 1, ai - 1],
                )
            } else {
                (
                    vec![2 * a - 4, 2 * a - 3, a - 2, a - 1],
                    vec![2 * a - 2, 2 * a - 1, a - 4, a - 3],
                    vec![2 * ai + 1, ai - 1, ai - 1, 2 * ai - 3],
                    vec![2 * ai - 1, 2 * ai - 1, ai + 1, ai - 3],
                )
            };
            candidates.push(Candidate {
                label: "printed-sigma-ratio",
                form: CandidateForm::Value(sigma_prime_power_ratio(m, &sig_num, &sig_den, gamma, prec)?),
            });
            let j = ZetaProductSpec::new(j_num, j_den, gamma.clone());
            let depth = full_depth(gamma, prec);
            candidates.push(Candidate {
                label: "inferred-J",
                form: CandidateForm::Value(restricted_euler_product_j(&j, m, depth, prec)?),
            });
            candidates.push(Candidate {
                label: "inferred-J-inverted",
                form: CandidateForm::Value(restricted_euler_product_j(&j.inverted(), m, depth, prec)?),
            });
            let printed_lhs = spec_of(&printed, gamma, Support::SameRadical(m));
            candidates.push(Candidate {
                label: "printed-term-series",
                form: CandidateForm::Series(printed_lhs.clone()),
            });
            candidates.push(Candidate {
                label: "strict-Sm-series",
                form: CandidateForm::Series(spec_of(&wp, gamma, Support::SameRadical(m))),
            });
            (spec_of(&wp, gamma, Support::RadicalDivides(m)), printed_lhs)
        }
    };
    Ok(CorollaryCase { case_id, a, gamma: gamma.clone(), m, lhs, printed_lhs, candidates })
}

impl CorollaryCase {
    pub fn candidate(&self, label: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.label == label)
    }
}
