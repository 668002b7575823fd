//! Hypergeometric series of two vector arguments and the Bessel functions
//! built from them.
//!
//! ₀F₁^α(μ; z, w) = Σ_λ C_λ(z) C_λ(w) / ([μ]_λ |λ|! C_λ(𝟏)), summed by weight
//! shells. Jack coefficients come from the memoized double-precision shells.
//!
//! Tail bound. Jack coefficients are nonnegative, so |C_λ(z)| ≤ ‖z‖∞^m C_λ(𝟏)
//! and Σ_{|λ|=m} C_λ(|w|) = (Σ|wᵢ|)^m. With s = ‖z‖∞ Σ|wᵢ| (or the swap) the
//! shell of weight m is at most s^m / (m! P_m), P_m = min_{|λ|=m} |[μ]_λ|.
//! Adding a box multiplies [μ]_λ by a factor of modulus at least g, the
//! distance from the row parameters μ − j/α to the nonpositive integers, so
//! the remainder after shell M is a geometric series in s / (g (M+1)).

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jack::{jack_shell, Powers};
use crate::partitions::Partition;
use crate::scalar::Scalar;

/// Root multiplicities k = (k₁, k₂) of type Bₙ.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityB<T = f64> {
    pub n: usize,
    pub k1: T,
    pub k2: T,
}

impl<T: Scalar> MultiplicityB<T> {
    pub fn new(n: usize, k1: T, k2: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("rank n must be at least 1".into()));
        }
        if k1 < T::zero() {
            return Err(Error::InvalidParameter("k1 must be nonnegative".into()));
        }
        if k2 <= T::zero() {
            return Err(Error::InvalidParameter("k2 must be positive".into()));
        }
        Ok(MultiplicityB { n, k1, k2 })
    }

    /// α = 1/k₂.
    pub fn alpha(&self) -> T {
        T::one() / self.k2.clone()
    }

    /// μ(k) = k₁ + k₂(n−1) + 1/2.
    pub fn mu(&self) -> T {
        self.k1.clone() + self.k2.clone() * T::from_int(self.n as i64 - 1) + T::ratio(1, 2)
    }

    pub fn to_f64(&self) -> MultiplicityB<f64> {
        MultiplicityB { n: self.n, k1: self.k1.to_f64(), k2: self.k2.to_f64() }
    }
}

/// When to stop summing weight shells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_degree: u32,
    pub rel_tol: f64,
    pub consecutive_small: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_degree: 30, rel_tol: 1e-12, consecutive_small: 3 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter("rel_tol must be positive".into()));
        }
        if self.consecutive_small == 0 {
            return Err(Error::InvalidParameter("consecutive_small must be at least 1".into()));
        }
        Ok(())
    }
}

/// A truncated series value with its truncation degree and a rigorous bound
/// on the discarded remainder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub degree_used: u32,
    pub tail_bound: f64,
}

#[derive(Serialize, Deserialize)]
struct EvalResultRepr {
    value_re: f64,
    value_im: f64,
    degree_used: u32,
    tail_bound: f64,
}

impl Serialize for EvalResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EvalResultRepr {
            value_re: self.value.re,
            value_im: self.value.im,
            degree_used: self.degree_used,
            tail_bound: self.tail_bound,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EvalResult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EvalResultRepr::deserialize(d)?;
        Ok(EvalResult {
            value: Complex64::new(r.value_re, r.value_im),
            degree_used: r.degree_used,
            tail_bound: r.tail_bound,
        })
    }
}

/// [μ]_λ^α = ∏ⱼ (μ − (j−1)/α)_{λⱼ}.
pub fn pochhammer(mu: Complex64, lambda: &Partition, alpha: f64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for (j, &l) in lambda.parts().iter().enumerate() {
        let base = mu - j as f64 / alpha;
        for s in 0..l {
            p *= base + s as f64;
        }
    }
    p
}

/// [μ]_λ^α over any coefficient field.
pub fn pochhammer_generic<T: Scalar>(mu: &T, lambda: &Partition, alpha: &T) -> T {
    let mut p = T::one();
    for (j, &l) in lambda.parts().iter().enumerate() {
        let base = mu.clone() - T::from_int(j as i64) / alpha.clone();
        for s in 0..l {
            p = p * (base.clone() + T::from_int(s as i64));
        }
    }
    p
}

/// Rejects μ within 1e-9 of a zero of [μ]_λ for any λ of weight ≤ `max_degree`.
pub fn check_poles(mu: Complex64, n: usize, alpha: f64, max_degree: u32) -> Result<()> {
    for j in 0..n {
        let base = mu - j as f64 / alpha;
        for p in 0..max_degree {
            if (base + p as f64).norm() < 1e-9 {
                return Err(Error::Pole {
                    mu: format!("{mu}"),
                    detail: format!("row {} factor {p} vanishes", j + 1),
                });
            }
        }
    }
    Ok(())
}

/// Smallest modulus of μ − j/α + p over rows j and integers p ≥ 0.
fn min_box_factor(mu: Complex64, n: usize, alpha: f64) -> f64 {
    let mut g = f64::INFINITY;
    for j in 0..n {
        let base = mu - j as f64 / alpha;
        let mut cands = vec![0.0];
        if base.re < 0.0 {
            cands.push((-base.re).floor());
            cands.push((-base.re).ceil());
        }
        for p in cands {
            g = g.min((base + p).norm());
        }
    }
    g
}

fn norm_inf(z: &[Complex64]) -> f64 {
    z.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn norm_one(z: &[Complex64]) -> f64 {
    z.iter().map(|v| v.norm()).sum()
}

/// Remainder bound after shell `m` given the shell majorant `shell_bound`.
fn geometric_tail(shell_bound: f64, s: f64, g: f64, m: u32) -> f64 {
    if shell_bound == 0.0 || s == 0.0 {
        return 0.0;
    }
    let rho = s / (g * (m as f64 + 1.0));
    if rho >= 1.0 || !shell_bound.is_finite() {
        return f64::INFINITY;
    }
    shell_bound * rho / (1.0 - rho)
}

fn check_args(z: &[Complex64], w: &[Complex64], alpha: f64, policy: &TruncationPolicy) -> Result<()> {
    policy.validate()?;
    if z.is_empty() || z.len() != w.len() {
        return Err(Error::InvalidParameter(format!(
            "arguments must have equal nonzero length, got {} and {}",
            z.len(),
            w.len()
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    if z.iter().chain(w).any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidParameter("arguments must be finite".into()));
    }
    Ok(())
}

fn sum_series(
    mu: Option<Complex64>,
    z: &[Complex64],
    w: &[Complex64],
    alpha: f64,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    let n = z.len();
    let mut pz = Powers::new(z);
    let mut pw = Powers::new(w);
    let s = (norm_inf(z) * norm_one(w)).min(norm_inf(w) * norm_one(z));
    let g = mu.map_or(1.0, |mu| min_box_factor(mu, n, alpha));
    let mut partial = Complex64::new(0.0, 0.0);
    let mut fact = 1.0f64;
    let mut small = 0;
    let mut tail = f64::INFINITY;
    for m in 0..=policy.max_degree {
        if m > 0 {
            fact *= m as f64;
        }
        let shell = jack_shell(n, alpha, m);
        let cz = shell.jack_values(&shell.monomials(&mut pz));
        let cw = shell.jack_values(&shell.monomials(&mut pw));
        let mut shell_sum = Complex64::new(0.0, 0.0);
        let mut pmin = f64::INFINITY;
        for (i, lambda) in shell.parts.iter().enumerate() {
            let poch = mu.map_or(Complex64::new(1.0, 0.0), |mu| pochhammer(mu, lambda, alpha));
            pmin = pmin.min(poch.norm());
            shell_sum += cz[i] * cw[i] / (poch * fact * shell.at_ones[i]);
        }
        partial += shell_sum;
        let shell_bound = s.powi(m as i32) / (fact * pmin);
        tail = geometric_tail(shell_bound, s, g, m);
        if shell_sum.norm() <= policy.rel_tol * partial.norm() {
            small += 1;
        } else {
            small = 0;
        }
        if small >= policy.consecutive_small || tail == 0.0 {
            return Ok(EvalResult { value: partial, degree_used: m, tail_bound: tail });
        }
    }
    if tail > policy.rel_tol * partial.norm() {
        return Err(Error::NonConvergence {
            degree: policy.max_degree,
            tail_bound: tail,
            value: partial.norm(),
        });
    }
    Ok(EvalResult { value: partial, degree_used: policy.max_degree, tail_bound: tail })
}

/// ₀F₁^α(μ; z, w), truncated adaptively.
pub fn hyper_0f1(
    mu: Complex64,
    z: &[Complex64],
    w: &[Complex64],
    alpha: f64,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    check_args(z, w, alpha, policy)?;
    check_poles(mu, z.len(), alpha, policy.max_degree)?;
    sum_series(Some(mu), z, w, alpha, policy)
}

/// ₀F₀^α(z, w), truncated adaptively.
pub fn hyper_0f0(z: &[Complex64], w: &[Complex64], alpha: f64, policy: &TruncationPolicy) -> Result<EvalResult> {
    check_args(z, w, alpha, policy)?;
    sum_series(None, z, w, alpha, policy)
}

fn half_squares(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|x| x * x * 0.5).collect()
}

/// J_k^B(x, y) = ₀F₁^α(μ(k); x²/2, y²/2), α = 1/k₂.
pub fn bessel_b(
    k: &MultiplicityB,
    x: &[Complex64],
    y: &[Complex64],
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    if x.len() != k.n || y.len() != k.n {
        return Err(Error::InvalidParameter(format!(
            "bessel_b expects vectors of length {}",
            k.n
        )));
    }
    hyper_0f1(Complex64::new(k.mu(), 0.0), &half_squares(x), &half_squares(y), k.alpha(), policy)
}

/// J_{k₂}^A(x, y) = ₀F₀^α(x, y), α = 1/k₂.
pub fn bessel_a(k2: f64, x: &[Complex64], y: &[Complex64], policy: &TruncationPolicy) -> Result<EvalResult> {
    if x.len() < 2 {
        return Err(Error::InvalidParameter("bessel_a needs n ≥ 2".into()));
    }
    if !(k2 > 0.0) {
        return Err(Error::InvalidParameter("k2 must be positive".into()));
    }
    hyper_0f0(x, y, 1.0 / k2, policy)
}

/// j_α(z) = ₀F₁(α+1; −z²/4) by its scalar series.
pub fn bessel_1d(alpha: f64, z: Complex64) -> Result<Complex64> {
    let b = alpha + 1.0;
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha + 1 = {b} is a nonpositive integer"
        )));
    }
    if !alpha.is_finite() || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter("arguments must be finite".into()));
    }
    let q = -z * z / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 1..2000u32 {
        term *= q / ((b + m as f64 - 1.0) * m as f64);
        sum += term;
        if (m as f64) > z.norm() && term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { degree: 2000, tail_bound: term.norm(), value: sum.norm() })
}

/// A ₀F₁ (or ₀F₀) series with one argument frozen, expanded once in the
/// monomial basis of the other argument: f(z) = Σ_μ b_μ m_μ(z).
///
/// The truncation degree is chosen so that the remainder is below `rel_tol`
/// (absolutely) for every z with ‖z‖∞ ≤ `z_bound`. This is the evaluator used
/// inside quadrature and Monte-Carlo loops.
#[derive(Clone, Debug)]
pub struct FixedSeries {
    n: usize,
    degree: u32,
    tail_bound: f64,
    terms: Vec<(Vec<Vec<u32>>, Complex64)>,
}

impl FixedSeries {
    pub fn new(
        mu: Option<Complex64>,
        w: &[Complex64],
        alpha: f64,
        z_bound: f64,
        policy: &TruncationPolicy,
    ) -> Result<Self> {
        check_args(w, w, alpha, policy)?;
        if !(z_bound >= 0.0 && z_bound.is_finite()) {
            return Err(Error::InvalidParameter("z_bound must be finite and nonnegative".into()));
        }
        let n = w.len();
        if let Some(mu) = mu {
            check_poles(mu, n, alpha, policy.max_degree)?;
        }
        let s = (z_bound * norm_one(w)).min(norm_inf(w) * z_bound * n as f64);
        let g = mu.map_or(1.0, |mu| min_box_factor(mu, n, alpha));
        let mut pw = Powers::new(w);
        let mut terms = Vec::new();
        let mut fact = 1.0f64;
        let mut tail = f64::INFINITY;
        for m in 0..=policy.max_degree {
            if m > 0 {
                fact *= m as f64;
            }
            let shell = jack_shell(n, alpha, m);
            let cw = shell.jack_values(&shell.monomials(&mut pw));
            let mut b = vec![Complex64::new(0.0, 0.0); shell.parts.len()];
            let mut pmin = f64::INFINITY;
            for (i, lambda) in shell.parts.iter().enumerate() {
                let poch = mu.map_or(Complex64::new(1.0, 0.0), |mu| pochhammer(mu, lambda, alpha));
                pmin = pmin.min(poch.norm());
                let f = cw[i] / (poch * fact * shell.at_ones[i]);
                for &(k, c) in &shell.coeffs[i] {
                    b[k] += f * c;
                }
            }
            for (k, bk) in b.into_iter().enumerate() {
                if bk != Complex64::new(0.0, 0.0) {
                    terms.push((shell.perms[k].clone(), bk));
                }
            }
            tail = geometric_tail(s.powi(m as i32) / (fact * pmin), s, g, m);
            if tail <= policy.rel_tol {
                return Ok(FixedSeries { n, degree: m, tail_bound: tail, terms });
            }
        }
        Err(Error::NonConvergence { degree: policy.max_degree, tail_bound: tail, value: 1.0 })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Evaluates at a real point with ‖z‖∞ ≤ `z_bound`.
    pub fn eval(&self, z: &[f64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.n);
        let d = self.degree as usize;
        let mut pw = vec![1.0f64; self.n * (d + 1)];
        for (i, &zi) in z.iter().enumerate() {
            for p in 1..=d {
                pw[i * (d + 1) + p] = pw[i * (d + 1) + p - 1] * zi;
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (perms, b) in &self.terms {
            let mut m = 0.0;
            for beta in perms {
                let mut t = 1.0;
                for (i, &e) in beta.iter().enumerate() {
                    t *= pw[i * (d + 1) + e as usize];
                }
                m += t;
            }
            acc += b * m;
        }
        acc
    }
}

/// Complex embedding of a real vector.
pub fn real_vec(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// i·v for a real vector v.
pub fn imag_vec(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(0.0, x)).collect()
}
