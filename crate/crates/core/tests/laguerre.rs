use proptest::prelude::*;
use sonine::hyper::TruncationPolicy;
use sonine::laguerre::{connection_coefficients, laguerre_normalized, LaguerreParams};
use sonine::scalar::rat;
use sonine::{Partition, Rational};

fn partition(n: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, n).prop_map(Partition::from_unsorted)
}

fn params(n: usize) -> impl Strategy<Value = LaguerreParams<Rational>> {
    (-1i64..=6, 1i64..=3, 1i64..=2)
        .prop_map(move |(a2, p, q)| LaguerreParams::new(n, rat(a2, 2), rat(p, q)).unwrap())
}

/// Classical L_k^a(x)/L_k^a(0) by the three-term recurrence.
fn classical(k: u32, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if k == 0 {
        return 1.0;
    }
    for m in 1..k {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    let at_zero = (1..=k).fold(1.0, |acc, i| acc * (a + i as f64) / i as f64);
    cur / at_zero
}

/// Σ_j |C(k,j) x^j / (a+1)_j|, the scale of the alternating expansion.
fn absolute_terms(k: u32, a: f64, x: f64) -> f64 {
    let mut t = 1.0;
    let mut sum = 1.0;
    for j in 0..k {
        t *= (k - j) as f64 / (j + 1) as f64 * x / (a + 1.0 + j as f64);
        sum += t;
    }
    sum
}

#[test]
fn one_variable_matches_recurrence() {
    let policy = TruncationPolicy::default();
    let mut well_conditioned = 0;
    for a in [-0.5, 0.0, 0.7, 3.0] {
        let p = LaguerreParams::new(1, a, 1.0).unwrap();
        for k in [0u32, 1, 2, 5, 12, 25] {
            for x in [0.0, 0.3, 1.7, 6.0] {
                let got = laguerre_normalized(&Partition::new(vec![k]).unwrap(), &p, &[x], &policy).unwrap();
                let want = classical(k, a, x);
                let err = (got.value.re - want).abs();
                let scale = absolute_terms(k, a, x);
                if scale <= 1e3 * want.abs() {
                    well_conditioned += 1;
                    assert!(err <= 1e-12 * want.abs(), "a={a} k={k} x={x}: {} vs {want}", got.value.re);
                }
                // cancellation in the alternating sum costs at most a few ulps of the largest terms
                assert!(err <= 1e-14 * scale, "a={a} k={k} x={x}: {} vs {want}", got.value.re);
            }
        }
    }
    assert!(well_conditioned >= 50, "{well_conditioned}");
}

#[test]
fn laguerre_at_zero_is_one() {
    let p = LaguerreParams::new(2, 0.5, 2.0).unwrap();
    let r = laguerre_normalized(&Partition::new(vec![4, 2]).unwrap(), &p, &[0.0, 0.0], &Default::default()).unwrap();
    assert!((r.value.re - 1.0).abs() < 1e-14);
}

#[test]
fn rejects_out_of_range_parameters() {
    assert!(LaguerreParams::new(2, rat(-1, 1), rat(1, 1)).is_err());
    assert!(LaguerreParams::new(2, rat(0, 1), rat(0, 1)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tables_sum_to_one(p in params(2), k in partition(2, 4), h2 in 1i64..=6) {
        let t = connection_coefficients(&k, &p, &rat(h2, 2)).unwrap();
        prop_assert_eq!(t.sum(), rat(1, 1));
        prop_assert!(t.entries.iter().all(|(l, _)| k.contains(l)));
    }

    #[test]
    fn integer_shifts_are_nonnegative(p in params(3), k in partition(3, 3), m in 1i64..=3) {
        let h = rat(m, 1) / p.alpha.clone();
        let t = connection_coefficients(&k, &p, &h).unwrap();
        prop_assert!(t.negatives().next().is_none());
    }

    #[test]
    fn shifts_compose(p in params(2), k in partition(2, 3), h1 in 1i64..=3, h2 in 1i64..=3) {
        let (h1, h2) = (rat(h1, 2), rat(h2, 2));
        let whole = connection_coefficients(&k, &p, &(h1.clone() + h2.clone())).unwrap();
        let shifted = LaguerreParams::new(2, p.a.clone() + h1.clone(), p.alpha.clone()).unwrap();
        let outer = connection_coefficients(&k, &shifted, &h2).unwrap();
        for (nu, c) in &whole.entries {
            let mut sum = rat(0, 1);
            for (lambda, c_outer) in &outer.entries {
                if lambda.contains(nu) {
                    let inner = connection_coefficients(lambda, &p, &h1).unwrap();
                    sum += c_outer.clone() * inner.get(nu).cloned().unwrap_or_else(|| rat(0, 1));
                }
            }
            prop_assert_eq!(&sum, c);
        }
    }
}
