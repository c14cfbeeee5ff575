use dixon_core::exactcomb::{binomial, dixon_classical_lhs, dixon_general_lhs, dixon_general_rhs, terminating_3f2};
use dixon_core::hyper::{dixon_gamma_rhs, log_gamma, well_poised_3f2_lhs, F32Params};
use dixon_core::numerics::{compensated_sum, indexed_sum, zeta, zeta_tail, BlockedSum};
use dixon_core::qseries::{q_dixon_lhs, q_pochhammer, QDixonParams};
use dixon_core::{Execution, HpReal, Precision};
use proptest::prelude::*;
use rug::{Float, Integer};

fn p30() -> Precision {
    Precision::default()
}

fn rel(a: &HpReal, b: &HpReal) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    (d / Float::with_val(a.prec(), b.abs_ref())).to_f64()
}

/// `sum_{k<=N} k^-s` plus the Euler-Maclaurin correction for the rest.
fn zeta_direct(s: f64, n: u64) -> f64 {
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc += (k as f64).powf(-s);
    }
    let nf = n as f64;
    acc + nf.powf(1.0 - s) / (s - 1.0) - nf.powf(-s) / 2.0 + s * nf.powf(-s - 1.0) / 12.0
}

#[test]
fn zeta_against_direct_sums() {
    let p = p30();
    for i in 0..=96 {
        let s = 2.0 + 0.5 * f64::from(i);
        let z = zeta(&p.real(s), &p).unwrap().to_f64();
        let d = zeta_direct(s, 1_000_000);
        assert!((z - d).abs() / z <= 1e-10, "s={s}: {z} vs {d}");
    }
}

#[test]
fn zeta_tail_dominates() {
    let p = p30();
    for i in 0..=40 {
        let s = p.real(2.0 + 0.25 * f64::from(i));
        let z1 = Float::with_val(p.bits(), zeta(&s, &p).unwrap() - 1u32);
        assert!(zeta_tail(&s, &p).unwrap() >= z1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeta_decreasing(s1 in 1.001f64..40.0, d in 1e-3f64..5.0) {
        let p = p30();
        let a = zeta(&p.real(s1), &p).unwrap();
        let b = zeta(&p.real(s1 + d), &p).unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn chunk_permutation_changes_little(
        xs in prop::collection::vec(-1e3f64..1e3, 1..3000),
        shift in 0usize..3000,
    ) {
        let p = Precision::new(20).unwrap();
        let terms: Vec<HpReal> = xs.iter().map(|&x| p.real(x)).collect();
        let n = terms.len();
        let rotated: Vec<HpReal> = (0..n).map(|i| terms[(i + shift) % n].clone()).collect();
        let zero = p.zero();
        let (a, _) = compensated_sum(terms.clone(), &zero, |_, _| p.one(), u64::MAX, &p).unwrap();
        let (b, _) = compensated_sum(rotated, &zero, |_, _| p.one(), u64::MAX, &p).unwrap();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        let d = Float::with_val(p.bits(), &a - &b).abs().to_f64();
        prop_assert!(d <= 1e-18 * scale, "{d}");
        let seq = indexed_sum(n, |i| terms[i].clone(), Execution::Sequential, &p);
        let par = indexed_sum(n, |i| terms[i].clone(), Execution::Parallel, &p);
        let mut stream = BlockedSum::new(&p);
        for t in &terms {
            stream.push(t);
        }
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(&seq, &a);
        prop_assert_eq!(seq, stream.total());
    }
}

#[test]
fn binomial_matches_pascal() {
    let mut row = vec![Integer::from(1)];
    for n in 0..=50u32 {
        for k in 0..=n {
            let b = binomial(&Integer::from(n), &Integer::from(k)).unwrap();
            assert_eq!(b, row[k as usize], "C({n},{k})");
            assert_eq!(b, binomial(&Integer::from(n), &Integer::from(n - k)).unwrap());
        }
        let mut next = vec![Integer::from(1); row.len() + 1];
        for k in 1..row.len() {
            next[k] = Integer::from(&row[k - 1] + &row[k]);
        }
        row = next;
    }
}

#[test]
fn classical_against_factorial_product() {
    for a in 0..=40u32 {
        let mut num = Integer::from(1);
        for j in 1..=3 * a {
            num *= j;
        }
        let mut fa = Integer::from(1);
        for j in 1..=a {
            fa *= j;
        }
        let den = Integer::from(&fa * &fa) * &fa;
        assert_eq!(dixon_classical_lhs(&Integer::from(a)).unwrap(), num / den, "a={a}");
    }
}

#[test]
fn general_is_cyclic_and_terminating_sign_is_uniform() {
    let mut s0 = None;
    for a in 0..=8 {
        for b in 0..=8 {
            for c in 0..=8 {
                let (ia, ib, ic) = (Integer::from(a), Integer::from(b), Integer::from(c));
                let l = dixon_general_lhs(&ia, &ib, &ic).unwrap();
                assert_eq!(l, dixon_general_lhs(&ib, &ic, &ia).unwrap());
                assert_eq!(l, dixon_general_lhs(&ic, &ia, &ib).unwrap());
                let t = terminating_3f2(&ia, &ib, &ic).unwrap();
                let rhs = dixon_general_rhs(&ia, &ib, &ic).unwrap();
                assert_eq!(t.clone().abs(), rhs);
                let sign = if a % 2 == 0 { 1 } else { -1 } * if t < 0 { -1 } else { 1 };
                assert_eq!(*s0.get_or_insert(sign), sign, "sign convention breaks at ({a},{b},{c})");
            }
        }
    }
}

fn f32(a: f64, b: f64, c: f64) -> Option<F32Params> {
    let p = p30();
    F32Params::new(p.real(a), p.real(b), p.real(c)).ok()
}

fn lhs3(p: &F32Params) -> HpReal {
    let prec = p30();
    well_poised_3f2_lhs(p, &prec.pow10(-20), 1_000_000, &prec).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn well_poised_symmetric_in_b_c(a in 0.2f64..3.0, b in -0.8f64..0.6, c in -0.8f64..0.6) {
        prop_assume!(1.0 + a / 2.0 - b - c >= 0.3);
        let (Some(x), Some(y)) = (f32(a, b, c), f32(a, c, b)) else { return Ok(()) };
        let prec = p30();
        prop_assert!(rel(&lhs3(&x), &lhs3(&y)) <= 1e-12);
        let (rx, ry) = (dixon_gamma_rhs(&x, &prec).unwrap(), dixon_gamma_rhs(&y, &prec).unwrap());
        prop_assert!(rel(&rx, &ry) <= 1e-12);
    }

    #[test]
    fn zero_parameter_gives_one(a in 0.2f64..3.0, c in -0.8f64..0.9) {
        let prec = p30();
        for (b, c) in [(0.0, c), (c, 0.0)] {
            let Some(x) = f32(a, b, c) else { continue };
            let one = prec.one();
            prop_assert!(rel(&lhs3(&x), &one) <= 1e-12);
            prop_assert!(rel(&dixon_gamma_rhs(&x, &prec).unwrap(), &one) <= 1e-12);
        }
    }
}

#[test]
fn log_gamma_recurrence() {
    let p = p30();
    for x in [0.5, 1.0, 2.5, 7.0] {
        let x = p.real(x);
        let a = log_gamma(&Float::with_val(p.bits(), &x + 1u32), &p).unwrap();
        let b = log_gamma(&x, &p).unwrap();
        let d = Float::with_val(p.bits(), a - b) - x.ln();
        assert!(d.abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn q_pochhammer_splices(x in -2.0f64..2.0, q in -0.99f64..0.99, m in 0u64..40, n in 0u64..40) {
        let p = p30();
        let (x, q) = (p.real(x), p.real(q));
        let whole = q_pochhammer(&x, &q, m + n);
        let shifted = Float::with_val(p.bits(), &x * Float::with_val(p.bits(), rug::ops::Pow::pow(&q, m as u32)));
        let parts = q_pochhammer(&x, &q, m) * q_pochhammer(&shifted, &q, n);
        let scale = Float::with_val(p.bits(), whole.abs_ref()).max(&p.real(1e-300));
        let d = Float::with_val(p.bits(), &whole - &parts).abs() / scale;
        prop_assert!(d <= 1e-13);
    }
}

fn qd(q: f64, a: f64, b: f64, c: f64) -> Option<HpReal> {
    let p = p30();
    let params = QDixonParams::new(p.real(q), p.real(a), p.real(b), p.real(c)).ok()?;
    Some(q_dixon_lhs(&params, &p.pow10(-20), 1_000_000, &p).ok()?.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn q_dixon_symmetric_in_b_c(q in 0.05f64..0.8, a in 0.01f64..2.0, b in 0.3f64..2.0, c in 0.3f64..2.0) {
        prop_assume!(q * a.sqrt() / (b * c) <= 0.5);
        let (Some(x), Some(y)) = (qd(q, a, b, c), qd(q, a, c, b)) else { return Ok(()) };
        prop_assert!(rel(&x, &y) <= 1e-11);
    }

    #[test]
    fn q_dixon_tends_to_one(a in 0.01f64..4.0, b in 0.2f64..3.0, c in 0.2f64..3.0) {
        let v = qd(1e-6, a, b, c).unwrap();
        prop_assert!((v.to_f64() - 1.0).abs() <= 1e-4);
    }
}
