//! Divisor-sum analogues of Pochhammer symbols, products of zeta values and
//! their Euler products, and the Dirichlet series of the corollary cases.

mod corollary;
mod series;
mod sieve;
mod sigma;
mod zetaprod;

pub use corollary::{corollary_case, Candidate, CandidateForm, CorollaryCase};
pub use series::{
    dseries_sum, dterm_value, enumerate_radical_closure, enumerate_sm, unrestricted_tail, DSeriesSpec,
    SigmaFactor, Support, CONVERGENCE_MARGIN, SMOOTH_LIMIT,
};
pub use sieve::{factorize, radical, Factorization, Sieve, DEFAULT_SIEVE_BOUND};
pub use sigma::{neg_power, sigma_neg, sigma_neg_local, sigma_neg_with, sigma_poch, sigma_poch_local, sigma_poch_multi};
pub use zetaprod::{
    evaluate_zeta_factors, full_depth, restricted_euler_product_j, telescope, zeta_poch_euler,
    zeta_poch_finite, zeta_product_ratio_numeric, ZetaFactor, ZetaProductSpec,
};
