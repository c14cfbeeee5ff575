//! Compensated summation with a fixed block structure.
//!
//! A sum is always formed as: Neumaier-compensated sums over consecutive
//! blocks of [`BLOCK_LEN`] terms, each block rounded to a single value, then
//! a Neumaier sum of the block values in block order. The streaming
//! ([`compensated_sum`]) and indexed ([`indexed_sum`]) entry points follow the
//! same structure, so they agree bit for bit on the same terms whatever the
//! execution mode.

use std::cmp::Ordering;

use rug::{Assign, Float};

use super::{HpReal, Precision, SummationDiagnostics};
use crate::exec::{map_blocks, Execution, BLOCK_LEN};
use crate::{Error, Result};

/// Neumaier (improved Kahan) accumulator.
#[derive(Clone, Debug)]
pub struct Neumaier {
    sum: Float,
    comp: Float,
    next: Float,
    err: Float,
}

impl Neumaier {
    pub fn new(bits: u32) -> Self {
        Neumaier { sum: Float::new(bits), comp: Float::new(bits), next: Float::new(bits), err: Float::new(bits) }
    }

    pub fn add(&mut self, x: &Float) {
        self.next.assign(&self.sum + x);
        if self.sum.cmp_abs(x) != Some(Ordering::Less) {
            self.err.assign(&self.sum - &self.next);
            self.err += x;
        } else {
            self.err.assign(x - &self.next);
            self.err += &self.sum;
        }
        self.comp += &self.err;
        std::mem::swap(&mut self.sum, &mut self.next);
    }

    pub fn total(&self) -> Float {
        Float::with_val(self.sum.prec(), &self.sum + &self.comp)
    }
}

/// Streaming accumulator implementing the blocked summation order.
#[derive(Clone, Debug)]
pub struct BlockedSum {
    outer: Neumaier,
    block: Neumaier,
    filled: usize,
    bits: u32,
}

impl BlockedSum {
    pub fn new(prec: &Precision) -> Self {
        let bits = prec.bits();
        BlockedSum { outer: Neumaier::new(bits), block: Neumaier::new(bits), filled: 0, bits }
    }

    pub fn push(&mut self, x: &Float) {
        self.block.add(x);
        self.filled += 1;
        if self.filled == BLOCK_LEN {
            self.outer.add(&self.block.total());
            self.block = Neumaier::new(self.bits);
            self.filled = 0;
        }
    }

    pub fn total(&self) -> Float {
        if self.filled == 0 {
            return self.outer.total();
        }
        let mut outer = self.outer.clone();
        outer.add(&self.block.total());
        outer.total()
    }
}

/// Sums an ordered stream of terms until `tail(index, term)` (an upper bound
/// on the absolute sum of every term after `index`) drops to `tolerance`.
///
/// A stream that ends on its own is a finite sum and counts as converged.
/// Exhausting `budget` terms first is a non-convergence error carrying the
/// partial sum.
pub fn compensated_sum<I, T>(
    terms: I,
    tolerance: &HpReal,
    mut tail: T,
    budget: u64,
    prec: &Precision,
) -> Result<(HpReal, SummationDiagnostics)>
where
    I: IntoIterator<Item = HpReal>,
    T: FnMut(u64, &HpReal) -> HpReal,
{
    let mut acc = BlockedSum::new(prec);
    let mut last = prec.zero();
    let mut used = 0u64;
    let mut bound = prec.zero();
    for term in terms {
        if used == budget {
            return Err(non_converged("compensated sum", acc.total(), used, last, bound));
        }
        acc.push(&term);
        used += 1;
        bound = tail(used - 1, &term);
        last = term;
        if bound <= *tolerance {
            let diag = SummationDiagnostics {
                terms_used: used,
                last_term_magnitude: last.abs(),
                tail_bound: bound,
                converged: true,
            };
            return Ok((acc.total(), diag));
        }
    }
    Ok((acc.total(), SummationDiagnostics::exact(used, &last)))
}

pub(crate) fn non_converged(
    context: &str,
    partial: HpReal,
    used: u64,
    last: HpReal,
    bound: HpReal,
) -> Error {
    Error::NonConvergence {
        context: context.to_string(),
        partial: Box::new(partial),
        diagnostics: Box::new(SummationDiagnostics {
            terms_used: used.max(1),
            last_term_magnitude: last.abs(),
            tail_bound: bound,
            converged: false,
        }),
    }
}

/// Sums `term(0) + ... + term(len-1)`, evaluating blocks concurrently when
/// `exec` allows. Same result as feeding the terms to [`BlockedSum`].
pub fn indexed_sum<F>(len: usize, term: F, exec: Execution, prec: &Precision) -> HpReal
where
    F: Fn(usize) -> HpReal + Sync + Send,
{
    let bits = prec.bits();
    let blocks = map_blocks(len, exec, |range| {
        let mut acc = Neumaier::new(bits);
        for i in range {
            acc.add(&term(i));
        }
        acc.total()
    });
    let mut outer = Neumaier::new(bits);
    for b in &blocks {
        outer.add(b);
    }
    outer.total()
}

/// `factor(0) * ... * factor(len-1)` with block products combined in order.
pub fn ordered_product<F>(len: usize, factor: F, exec: Execution, prec: &Precision) -> HpReal
where
    F: Fn(usize) -> HpReal + Sync + Send,
{
    let bits = prec.bits();
    let blocks = map_blocks(len, exec, |range| {
        let mut acc = Float::with_val(bits, 1);
        for i in range {
            acc *= factor(i);
        }
        acc
    });
    let mut acc = Float::with_val(bits, 1);
    for b in &blocks {
        acc *= b;
    }
    acc
}
