use sonine::cones::{
    conjugated_spectrum, haar_sample, haar_sample_indexed, matrix_bessel, rho_density, verify_chamber_sonine,
    verify_group_integral, ConeField, RhoDensity,
};
use sonine::hyper::{bessel_1d, TruncationPolicy};

#[test]
fn real_rank_one_haar_is_a_fair_sign() {
    let cf = ConeField::new(1, 1).unwrap();
    let n = 20_000;
    let plus = (0..n).filter(|&s| haar_sample_indexed(&cf, 7, s).u[(0, 0)].re > 0.0).count() as f64;
    let minus = n as f64 - plus;
    let expected = n as f64 / 2.0;
    let chi2 = (plus - expected).powi(2) / expected + (minus - expected).powi(2) / expected;
    // one degree of freedom, 99.9% quantile
    assert!(chi2 < 10.83, "chi2 = {chi2}");
}

#[test]
fn mean_trace_vanishes() {
    for d in [1, 2] {
        let cf = ConeField::new(d, 2).unwrap();
        let n = 100_000u64;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let t = haar_sample_indexed(&cf, 3, i).trace().re;
            s += t;
            s2 += t * t;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "d={d}: mean {mean}, se {se}");
    }
}

#[test]
fn samples_are_unitary_and_seeded() {
    for d in [1, 2] {
        let cf = ConeField::new(d, 3).unwrap();
        let a = haar_sample(&cf, 11);
        assert!(a.unitarity_residual() < 1e-12);
        assert_eq!(a.u, haar_sample(&cf, 11).u);
        assert_ne!(a.u, haar_sample(&cf, 12).u);
    }
}

#[test]
fn scalar_reduction_of_the_matrix_bessel_function() {
    // n = 1: J_μ(t) = j_{μ−1}(2√t)
    let cf = ConeField::new(1, 1).unwrap();
    for (mu, t) in [(1.5, 0.3), (2.0, 1.2), (3.25, 4.0)] {
        let m = matrix_bessel(mu, &[t], &cf, &TruncationPolicy::default()).unwrap().value.re;
        let b = bessel_1d(mu - 1.0, (2.0 * f64::sqrt(t)).into()).unwrap().re;
        assert!((m - b).abs() < 1e-12, "mu={mu} t={t}");
    }
}

#[test]
fn spectrum_of_the_identity_conjugation() {
    let cf = ConeField::new(2, 2).unwrap();
    let u = haar_sample(&cf, 5).u;
    let s = conjugated_spectrum(&[1.0, 1.0], &u, &[0.7, 0.2]);
    assert!((s[0] - 0.7).abs() < 1e-12 && (s[1] - 0.2).abs() < 1e-12, "{s:?}");
}

#[test]
fn rank_one_group_integral_is_exact() {
    let cf = ConeField::new(1, 1).unwrap();
    let r = verify_group_integral(&cf, 0.5, &[0.8], &[0.6], 100, 1, &TruncationPolicy::default()).unwrap();
    assert!(r.residual < 1e-12);
}

#[test]
fn rho_reduces_to_beta_and_normalizes() {
    let cf = ConeField::new(1, 1).unwrap();
    // Beta(k₁+1/2, h) shape: ξ^{k₁−1/2}(1−ξ)^{h−1}
    let (k1, h) = (1.0, 2.5);
    for xi in [0.1, 0.5, 0.9] {
        let w = rho_density(&cf, k1, h, &[xi]).unwrap();
        assert!((w - xi.powf(k1 - 0.5) * (1.0 - xi).powf(h - 1.0)).abs() < 1e-14);
    }
    let cf2 = ConeField::new(2, 2).unwrap();
    let rho = RhoDensity::new(&cf2, 0.5, 3.0, 16).unwrap();
    let (_, weights) = rho.atoms();
    assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(weights.iter().all(|&w| w >= 0.0));
}

#[test]
fn standard_error_halves_when_samples_quadruple() {
    let cf = ConeField::new(1, 2).unwrap();
    let p = TruncationPolicy::default();
    let small = verify_chamber_sonine(&cf, 0.5, 2.0, &[1.0, 0.4], &[0.8, 0.3], 2_000, 4, 9, &p).unwrap();
    let large = verify_chamber_sonine(&cf, 0.5, 2.0, &[1.0, 0.4], &[0.8, 0.3], 8_000, 4, 9, &p).unwrap();
    let ratio = small.mc_stderr / large.mc_stderr;
    assert!(ratio > 2.0 / 1.5 && ratio < 2.0 * 1.5, "ratio {ratio}");
}
