//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use sonine::cones::{matrix_bessel, verify_chamber_sonine, verify_group_integral, verify_limit_corollary, ConeField};
use sonine::hyper::{bessel_1d, bessel_b, imag_vec, real_vec, MultiplicityB, TruncationPolicy};
use sonine::jack::{binomial_table, jack_c, SymPoly};
use sonine::laguerre::{connection_coefficients, laguerre_bessel_limit_error, wallach_sign_scan, LaguerreParams};
use sonine::partitions::{enumerate_partitions, partitions_up_to};
use sonine::quadrature::RuleKind;
use sonine::scalar::rat;
use sonine::sonine::{
    b_to_a_residual, second_moment_check, selberg_constant, verify_discrete_sonine, verify_restricted_sonine,
    SonineParams,
};
use sonine::{Partition, Rational, Result, Scalar};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn alphas() -> [Rational; 3] {
    [rat(1, 2), rat(1, 1), rat(2, 1)]
}

fn factorial(m: u32) -> Rational {
    (1..=m as i64).fold(rat(1, 1), |acc, i| acc * rat(i, 1))
}

/// Each entry at most half of the entry two steps earlier.
fn halves_every_two(v: &[f64]) -> bool {
    v.windows(3).all(|w| w[2] <= 0.5 * w[0])
}

fn fmt(v: &[f64]) -> String {
    v.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>().join(" ")
}

fn c1_jack_normalization() -> Result<Outcome> {
    let mut checked = 0;
    for n in [2usize, 3] {
        for alpha in alphas() {
            for m in 0..=5u32 {
                let mut total = SymPoly::zero(n);
                for lambda in enumerate_partitions(m, n) {
                    total = total.add(&jack_c(&lambda, &alpha, n)?);
                }
                // (Σz)^m = Σ_μ m!/∏μᵢ! · m_μ
                for mu in enumerate_partitions(m, n) {
                    let expected =
                        mu.parts().iter().fold(factorial(m), |acc, &p| acc / factorial(p));
                    if total.coeff(&mu) != expected {
                        return outcome(false, format!("n={n} alpha={alpha} m={m} mu={mu:?}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} monomial coefficients exact"))
}

fn c2_binomials() -> Result<Outcome> {
    let mut rows = 0;
    for n in 1..=3usize {
        for alpha in alphas() {
            for shell in partitions_up_to(6, n) {
                for kappa in shell {
                    let table = binomial_table(&kappa, &alpha)?;
                    let w = kappa.weight();
                    for m in 0..=w {
                        let sum = table
                            .iter()
                            .filter(|(l, _)| l.weight() == m)
                            .fold(Rational::zero(), |acc, (_, v)| acc + v);
                        let expected = factorial(w) / (factorial(m) * factorial(w - m));
                        if sum != expected {
                            return outcome(false, format!("kappa={kappa:?} alpha={alpha} m={m}: {sum}"));
                        }
                        rows += 1;
                    }
                    if let Some((l, v)) = table.iter().find(|(_, v)| v.is_negative()) {
                        return outcome(false, format!("negative binomial kappa={kappa:?} lambda={l:?}: {v}"));
                    }
                }
            }
        }
    }
    outcome(true, format!("{rows} row sums exact, no negative entries"))
}

fn c3_connection() -> Result<Outcome> {
    let mut tables = 0;
    for n in 1..=3usize {
        for alpha in alphas() {
            for a in [rat(-1, 2), rat(0, 1), rat(3, 2)] {
                let p = LaguerreParams::new(n, a, alpha.clone())?;
                let h = rat(1, 1) / alpha.clone();
                for shell in partitions_up_to(6, n) {
                    for kappa in shell {
                        let t = connection_coefficients(&kappa, &p, &h)?;
                        if t.sum() != rat(1, 1) || t.negatives().next().is_some() {
                            return outcome(false, format!("n={n} alpha={alpha} kappa={kappa:?}"));
                        }
                        tables += 1;
                    }
                }
            }
        }
    }
    // n = 1: c_{k,j} = binom(j+a, j)/binom(k+a+1, k)
    let binom = |top: f64, j: u32| (1..=j).fold(1.0, |acc, i| acc * (top - j as f64 + i as f64) / i as f64);
    let mut worst = 0.0f64;
    for a in [-0.5, 0.0, 1.5] {
        let p = LaguerreParams::new(1, Rational::from_float(a).unwrap(), rat(1, 1))?;
        for k in 0..=12u32 {
            let t = connection_coefficients(&Partition::new(vec![k])?, &p, &rat(1, 1))?;
            for j in 0..=k {
                let exact = binom(j as f64 + a, j) / binom(k as f64 + a + 1.0, k);
                let got = t.get(&Partition::new(vec![j])?).map(Scalar::to_f64).unwrap_or(0.0);
                worst = worst.max((got - exact).abs());
            }
        }
    }
    outcome(worst < 1e-12, format!("{tables} tables sum to 1 with c >= 0; n=1 closed form max error {worst:.1e}"))
}

fn c4_wallach() -> Result<Outcome> {
    let p = LaguerreParams::new(2, rat(0, 1), rat(1, 1))?;
    let below = wallach_sign_scan(&p, &rat(1, 2), 6)?;
    let Some(w) = below.violations.first() else {
        return outcome(false, "no witness at h = 1/2");
    };
    let mut clean = true;
    for h in [rat(1, 1), rat(2, 1)] {
        clean &= wallach_sign_scan(&p, &h, 6)?.violations.is_empty();
    }
    outcome(
        clean,
        format!(
            "h=1/2: {} witnesses, first kappa={:?} lambda={:?} c={}; h in {{1,2}}: {}",
            below.violations.len(),
            w.kappa.parts(),
            w.lambda.parts(),
            w.value,
            if clean { "none" } else { "negative found" }
        ),
    )
}

fn c5_restricted() -> Result<Outcome> {
    let policy = TruncationPolicy::default();
    let sp = SonineParams::density(MultiplicityB::new(2, 0.5, 0.5)?, 2.0)?;
    let rule = sp.rule(RuleKind::Chamber, 64)?;
    let mut worst = 0.0f64;
    for y1 in [0.0, 0.5, 1.0] {
        for y2 in [0.0, 0.5, 1.0] {
            worst = worst.max(verify_restricted_sonine(&sp, &[y1, y2], &rule, &policy)?.residual);
        }
    }
    // n = 1 is the classical formula j_{k₁+h−1/2}(y) = ∫ j_{k₁−1/2}(xy) f(x) dx.
    let (k1, h) = (0.5, 2.0);
    let sp1 = SonineParams::density(MultiplicityB::new(1, k1, 1.0)?, h)?;
    let rule1 = sp1.rule(RuleKind::Chamber, 64)?;
    let mut worst1 = 0.0f64;
    for y in [0.3, 1.0, 2.5, 4.0] {
        let r = verify_restricted_sonine(&sp1, &[y], &rule1, &policy)?;
        let classical = bessel_1d(k1 + h - 0.5, y.into())?.re;
        worst1 = worst1.max(r.residual).max((r.lhs - classical).abs());
    }
    outcome(
        worst < 1e-6 && worst1 < 1e-10,
        format!("n=2 worst residual {worst:.1e} ({} nodes); n=1 worst {worst1:.1e}", rule.len()),
    )
}

fn c6_discrete() -> Result<Outcome> {
    let policy = TruncationPolicy::default();
    let k = MultiplicityB::new(2, rat(1, 1), rat(1, 1))?;
    let (x, y) = ([1.0, 0.5], [0.5, 0.2]);
    let r8 = verify_discrete_sonine(&x, &y, &k, 8, 1, &policy, None)?.residual;
    let r64 = verify_discrete_sonine(&x, &y, &k, 64, 1, &policy, None)?.residual;
    outcome(r64 <= 0.5 * r8, format!("x=(1,0.5) y=(0.5,0.2): j=8 {r8:.2e}, j=64 {r64:.2e}"))
}

fn c7_selberg() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut skipped = Vec::new();
    for n in 1..=3usize {
        for k1 in [0.0, 0.5, 1.0] {
            for k2 in [0.5, 1.0] {
                for h in [k2 * (n as f64 - 1.0) + 0.5, 2.0] {
                    // h = k₂(n−1) makes the weight non-integrable.
                    if h <= k2 * (n as f64 - 1.0) {
                        skipped.push(format!("(n={n},k1={k1},k2={k2},h={h})"));
                        continue;
                    }
                    let sp = SonineParams::density(MultiplicityB::new(n, k1, k2)?, h)?;
                    worst = worst.max(selberg_constant(&sp, 12)?.relative);
                    count += 1;
                }
            }
        }
    }
    let note = if skipped.is_empty() { String::new() } else { format!("; outside density regime: {}", skipped.join(" ")) };
    outcome(worst < 1e-8, format!("{count} grid points, worst relative {worst:.1e}{note}"))
}

fn c8_limits() -> Result<Outcome> {
    let policy = TruncationPolicy::default();
    let js = [8u32, 16, 32, 64, 128];
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, k1, k2, x, y) in [
        (1usize, 1.0, 1.0, vec![1.0], vec![1.0]),
        (2, 1.0, 1.0, vec![1.0, 0.5], vec![0.5, 0.2]),
    ] {
        let k = MultiplicityB::new(n, k1, k2)?;
        let errs: Vec<f64> = js
            .iter()
            .map(|&j| laguerre_bessel_limit_error(&k, &x, &y, j, &policy).map(|e| e.error))
            .collect::<Result<_>>()?;
        pass &= halves_every_two(&errs);
        parts.push(format!("laguerre n={n}: {}", fmt(&errs)));
    }
    for k2 in [0.5, 1.0] {
        let errs: Vec<f64> = [25.0, 100.0, 400.0]
            .iter()
            .map(|&k1| b_to_a_residual(k1, k2, &[0.6, 0.2], &[0.5, 0.1], &policy))
            .collect::<Result<_>>()?;
        pass &= halves_every_two(&errs);
        parts.push(format!("b-to-a k2={k2}: {}", fmt(&errs)));
    }
    outcome(pass, parts.join("; "))
}

fn c9_second_moment() -> Result<Outcome> {
    let k = MultiplicityB::new(2, rat(1, 1), rat(1, 1))?;
    let mut worst = 0.0f64;
    let mut vals = Vec::new();
    for j in [4u32, 16, 64] {
        let s = second_moment_check(&[1.0, 1.0], &k, j, 1, None)?;
        worst = worst.max((s.measured / s.predicted - 1.0).abs());
        vals.push(format!("j={j} {:.6}", s.measured));
    }
    outcome(worst < 1e-8, format!("{}; worst relative {worst:.1e}", vals.join(", ")))
}

fn c10_cones() -> Result<Outcome> {
    let policy = TruncationPolicy::default();
    let n_mc = 100_000;
    let seed = 42;
    let mut parts = Vec::new();
    let mut pass = true;

    let mut worst = 0.0f64;
    for d in [1u32, 2] {
        for n in 1..=3usize {
            let cf = ConeField::new(d, n)?;
            for k1 in [0.5, 1.5] {
                let mu = k1 + cf.mu0() + 0.5;
                let k = cf.multiplicity(k1)?;
                for x in [[0.3, 0.2, 0.1], [1.0, 0.7, 0.0], [1.5, 1.5, 0.5]] {
                    let x = &x[..n];
                    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
                    let m = matrix_bessel(mu, &sq, &cf, &policy)?.value.re;
                    let twice: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
                    let b = bessel_b(&k, &imag_vec(&twice), &real_vec(&vec![1.0; n]), &policy)?.value.re;
                    worst = worst.max((m - b).abs());
                }
            }
        }
    }
    pass &= worst < 1e-10;
    parts.push(format!("spectral identity {worst:.1e}"));

    for d in [1u32, 2] {
        let cf = ConeField::new(d, 2)?;
        let g = verify_group_integral(&cf, 0.5, &[1.0, 0.4], &[0.8, 0.3], n_mc, seed, &policy)?;
        let c = verify_chamber_sonine(&cf, 0.5, 2.0, &[1.0, 0.4], &[0.8, 0.3], n_mc, 6, seed, &policy)?;
        let l = verify_limit_corollary(&cf, 1.0, &[0.5, 0.3], &[0.6, 0.2], n_mc, 10, seed, &policy)?;
        pass &= g.within(3.0, 0.0) && c.within(3.0, 0.0) && l.within(3.0, 1e-3);
        for (name, r) in [("group", &g), ("chamber", &c), ("limit", &l)] {
            parts.push(format!("d={d} {name} {:.1e} (se {:.1e})", r.residual, r.mc_stderr));
        }
    }
    outcome(pass, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 jack normalization", c1_jack_normalization, Duration::from_secs(10)),
        ("2 binomial identities", c2_binomials, Duration::from_secs(30)),
        ("3 connection coefficients", c3_connection, Duration::from_secs(60)),
        ("4 wallach sign scan", c4_wallach, Duration::from_secs(60)),
        ("5 restricted sonine", c5_restricted, Duration::from_secs(120)),
        ("6 discrete sonine", c6_discrete, Duration::from_secs(120)),
        ("7 selberg constant", c7_selberg, Duration::from_secs(60)),
        ("8 limit transitions", c8_limits, Duration::from_secs(120)),
        ("9 second moment", c9_second_moment, Duration::from_secs(60)),
        ("10 matrix cones", c10_cones, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_budget = elapsed <= budget;
        let ok = pass && in_budget;
        if !ok {
            failed += 1;
        }
        let timing = if in_budget { String::new() } else { format!(" over budget {budget:?}") };
        println!(
            "{} criterion {name} [{:.1}s{timing}]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
