use num_complex::Complex64;
use num_traits::Signed;
use proptest::prelude::*;
use sonine::jack::{binomial, binomial_table, jack_c, jack_eval, jack_p};
use sonine::partitions::enumerate_partitions;
use sonine::scalar::rat;
use sonine::{Partition, Rational};

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..=4, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn partition(n: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, n).prop_map(Partition::from_unsorted)
}

#[test]
fn alpha_one_two_variables_degree_two() {
    // Schur case: s_(2) = m_2 + m_11, s_(11) = m_11; C = |λ|!/hooks · s.
    let p = jack_p(&Partition::new(vec![2, 0]).unwrap(), &rat(1, 1), 2).unwrap();
    assert_eq!(p.coeff(&Partition::new(vec![2, 0]).unwrap()), rat(1, 1));
    assert_eq!(p.coeff(&Partition::new(vec![1, 1]).unwrap()), rat(1, 1));
}

#[test]
fn zonal_degree_two() {
    // α = 2: C_(2) = m_2 + (2/3) m_11, C_(11) = (4/3) m_11
    let two = Partition::new(vec![2, 0]).unwrap();
    let one_one = Partition::new(vec![1, 1]).unwrap();
    let c2 = jack_c(&two, &rat(2, 1), 2).unwrap();
    let c11 = jack_c(&one_one, &rat(2, 1), 2).unwrap();
    assert_eq!(c2.coeff(&two), rat(1, 1));
    assert_eq!(c2.coeff(&one_one), rat(2, 3));
    assert_eq!(c11.coeff(&one_one), rat(4, 3));
}

#[test]
fn binomial_small_cases() {
    let k = Partition::new(vec![2, 1]).unwrap();
    assert_eq!(binomial(&k, &Partition::new(vec![1, 0]).unwrap(), &rat(1, 1)).unwrap(), rat(3, 1));
    assert_eq!(binomial(&k, &Partition::new(vec![0, 0]).unwrap(), &rat(1, 1)).unwrap(), rat(1, 1));
    assert_eq!(binomial(&k, &k, &rat(1, 1)).unwrap(), rat(1, 1));
    assert!(binomial(&k, &Partition::new(vec![3, 0]).unwrap(), &rat(1, 1)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shell_sum_is_power_of_sum(a in alpha(), m in 0u32..=4, z in prop::collection::vec(-1.5f64..1.5, 2..=3)) {
        let n = z.len();
        let zc: Vec<Complex64> = z.iter().map(|&v| v.into()).collect();
        let total: Complex64 = enumerate_partitions(m, n).iter().map(|l| jack_eval(l, &a, &zc).unwrap()).sum();
        let expected = z.iter().sum::<f64>().powi(m as i32);
        prop_assert!((total.re - expected).abs() < 1e-10 * (1.0 + expected.abs()));
    }

    #[test]
    fn jack_is_symmetric(a in alpha(), l in partition(3, 3), z in prop::collection::vec(-1.0f64..1.0, 3)) {
        let zc: Vec<Complex64> = z.iter().map(|&v| v.into()).collect();
        let swapped = vec![zc[2], zc[0], zc[1]];
        let u = jack_eval(&l, &a, &zc).unwrap();
        let v = jack_eval(&l, &a, &swapped).unwrap();
        prop_assert!((u - v).norm() < 1e-10 * (1.0 + u.norm()));
    }

    #[test]
    fn binomial_rows(a in alpha(), k in partition(3, 3)) {
        let table = binomial_table(&k, &a).unwrap();
        let w = k.weight();
        let zero = Partition::with_len(&[], 3).unwrap();
        let one = Partition::with_len(&[1], 3).unwrap();
        for (l, v) in &table {
            prop_assert!(!v.is_negative());
            if *l == zero || *l == k {
                prop_assert_eq!(v, &rat(1, 1));
            }
            if *l == one {
                prop_assert_eq!(v, &rat(w as i64, 1));
            }
        }
        // every sub-partition appears exactly once
        prop_assert!(table.iter().all(|(l, _)| k.contains(l)));
    }
}
