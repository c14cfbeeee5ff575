use std::sync::Mutex;

use rug::{Float, Integer, Rational};

// B_0, B_1, ... with B_1 = -1/2, grown on demand.
static TABLE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Exact Bernoulli number `B_n` (convention `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rational {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    extend(&mut table, n);
    table[n].clone()
}

/// `B_0..=B_n`.
pub(crate) fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    extend(&mut table, n);
    table[..=n].to_vec()
}

// sum_{k=0}^{m} C(m+1, k) B_k = 0
fn extend(table: &mut Vec<Rational>, n: usize) {
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n {
        let m = table.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in table.iter().enumerate() {
            if k > 1 && k % 2 == 1 {
                binom = binom * (m + 1 - k) / (k + 1);
                continue;
            }
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom = binom * (m + 1 - k) / (k + 1);
        }
        // binom is now C(m+1, m)
        table.push(-acc / binom);
    }
}

/// Bernoulli polynomial `B_n(x)` evaluated at `x` in `x`'s precision.
pub fn bernoulli_polynomial(n: usize, x: &Float) -> Float {
    let table = bernoulli_table(n);
    let prec = x.prec();
    // Horner in x over sum_k C(n,k) B_k x^(n-k)
    let mut acc = Float::new(prec);
    let mut binom = Integer::from(1);
    for (k, b) in table.iter().enumerate() {
        acc *= x;
        if !b.is_zero() {
            acc += Float::with_val(prec, b * Rational::from(&binom));
        }
        binom = binom * (n - k) / (k + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }

    #[test]
    fn polynomial_identities() {
        let x = Float::with_val(128, 0.3);
        // B_2(x) = x^2 - x + 1/6
        let b2 = bernoulli_polynomial(2, &x);
        let expect = Float::with_val(128, 0.09 - 0.3) + Float::with_val(128, 1) / 6;
        let diff: Float = b2 - expect;
        assert!(diff.abs() < 1e-15);
        // B_n(x+1) - B_n(x) = n x^(n-1)
        let x1 = Float::with_val(128, &x + 1u32);
        let diff = bernoulli_polynomial(7, &x1) - bernoulli_polynomial(7, &x);
        let expect = Float::with_val(128, 7) * Float::with_val(128, x.clone().square().square() * x.clone().square());
        assert!((diff - expect).abs() < 1e-25);
    }
}
