//! Bessel functions on the cones of positive semidefinite real and complex
//! matrices, Haar sampling on O(n) and U(n), and Monte-Carlo checks of the
//! cone-based integral formulas.
//!
//! Random streams are counter based: sample i of a run with seed s draws from
//! ChaCha8 seeded with s on stream i, so any subset of samples can be
//! reproduced independently and the parallel result equals the serial one.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyper::{
    bessel_b, hyper_0f0, hyper_0f1, imag_vec, real_vec, EvalResult, FixedSeries, MultiplicityB, TruncationPolicy,
};
use crate::quadrature::{gauss_jacobi01, gauss_laguerre, pairwise_sum, QuadratureRule, RuleKind};

/// The field ℝ (d = 1) or ℂ (d = 2) and the matrix size n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeField {
    pub d: u32,
    pub n: usize,
}

impl ConeField {
    pub fn new(d: u32, n: usize) -> Result<Self> {
        match d {
            1 | 2 => {}
            4 => return Err(Error::Unsupported("quaternionic cones (d = 4) are not implemented".into())),
            _ => return Err(Error::InvalidParameter(format!("d must be 1 or 2, got {d}"))),
        }
        if n == 0 {
            return Err(Error::InvalidParameter("matrix size n must be at least 1".into()));
        }
        Ok(ConeField { d, n })
    }

    /// μ₀ = d(n−1)/2.
    pub fn mu0(&self) -> f64 {
        self.d as f64 * (self.n as f64 - 1.0) / 2.0
    }

    /// Jack index 2/d of the spherical polynomials.
    pub fn alpha(&self) -> f64 {
        2.0 / self.d as f64
    }

    /// k = (k₁, d/2).
    pub fn multiplicity(&self, k1: f64) -> Result<MultiplicityB> {
        MultiplicityB::new(self.n, k1, self.d as f64 / 2.0)
    }
}

/// A Haar-distributed orthogonal or unitary matrix.
#[derive(Clone, Debug)]
pub struct HaarSample {
    pub u: DMatrix<Complex64>,
    pub seed: u64,
    pub stream: u64,
}

impl HaarSample {
    /// ‖uu* − I‖ in the operator norm.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.u.nrows();
        let e = &self.u * self.u.adjoint() - DMatrix::<Complex64>::identity(n, n);
        e.singular_values().max()
    }

    pub fn trace(&self) -> Complex64 {
        self.u.trace()
    }
}

/// Sample 0 of the stream family for `seed`.
pub fn haar_sample(cf: &ConeField, seed: u64) -> HaarSample {
    haar_sample_indexed(cf, seed, 0)
}

/// QR of a Gaussian matrix with the phases of diag(R) moved into Q.
pub fn haar_sample_indexed(cf: &ConeField, seed: u64, stream: u64) -> HaarSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let n = cf.n;
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        if cf.d == 1 {
            Complex64::new(re, 0.0)
        } else {
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    HaarSample { u: q, seed, stream }
}

/// J_μ(a) = Σ_λ (−1)^{|λ|} C_λ^{2/d}(spec) / ([μ]_λ^{2/d} |λ|!) for a with
/// eigenvalues `spectrum`.
pub fn matrix_bessel(mu: f64, spectrum: &[f64], cf: &ConeField, policy: &TruncationPolicy) -> Result<EvalResult> {
    if spectrum.len() != cf.n {
        return Err(Error::InvalidParameter(format!("spectrum must have {} entries", cf.n)));
    }
    if spectrum.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
        return Err(Error::Domain("spectrum must be finite and nonnegative".into()));
    }
    let z: Vec<f64> = spectrum.iter().map(|s| -s).collect();
    hyper_0f1(Complex64::new(mu, 0.0), &real_vec(&z), &real_vec(&vec![1.0; cf.n]), cf.alpha(), policy)
}

/// Eigenvalues of D_x u D_v u* D_x, largest first, clamped at zero.
pub fn conjugated_spectrum(x: &[f64], u: &DMatrix<Complex64>, v: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let s: Complex64 = (0..n).map(|k| u[(i, k)] * v[k] * u[(j, k)].conj()).sum();
        s * (x[i] * x[j])
    });
    let mut ev: Vec<f64> = if n == 2 {
        let (a, c, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
        let mean = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        vec![mean + rad, mean - rad]
    } else {
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(|p, q| q.partial_cmp(p).expect("finite eigenvalues"));
        e
    };
    for e in &mut ev {
        *e = e.max(0.0);
    }
    ev
}

/// Result of a Monte-Carlo check.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub mc_stderr: f64,
    pub n_samples: usize,
    pub rule_order: Option<usize>,
    pub seed: u64,
}

impl McReport {
    /// residual ≤ max(sigmas·stderr, floor).
    pub fn within(&self, sigmas: f64, floor: f64) -> bool {
        self.residual <= (sigmas * self.mc_stderr).max(floor)
    }
}

/// Mean and standard error of per-sample values computed in parallel.
fn monte_carlo<F>(n_samples: usize, f: F) -> Result<(f64, f64)>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 Monte-Carlo samples".into()));
    }
    let vals: Vec<f64> = (0..n_samples as u64).into_par_iter().map(f).collect();
    let nf = n_samples as f64;
    let mean = pairwise_sum(&vals) / nf;
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).powi(2)).collect();
    let var = pairwise_sum(&dev) / (nf - 1.0);
    Ok((mean, (var / nf).sqrt()))
}

fn chamber(v: &[f64], n: usize, what: &str) -> Result<Vec<f64>> {
    if v.len() != n {
        return Err(Error::InvalidParameter(format!("{what} must have {n} entries")));
    }
    if v.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!("{what} must be a nonnegative chamber point")));
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(s)
}

/// |J_k^B(2ix, y) − E_u J_μ(σ(x u y² u* x))| with k = (k₁, d/2) and
/// μ = k₁ + μ₀ + 1/2.
pub fn verify_group_integral(
    cf: &ConeField,
    k1: f64,
    x: &[f64],
    y: &[f64],
    n_samples: usize,
    seed: u64,
    policy: &TruncationPolicy,
) -> Result<McReport> {
    let k = cf.multiplicity(k1)?;
    let x = chamber(x, cf.n, "x")?;
    let y = chamber(y, cf.n, "y")?;
    let twice: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    let lhs = bessel_b(&k, &imag_vec(&twice), &real_vec(&y), policy)?;
    let mu = k1 + cf.mu0() + 0.5;
    let y2: Vec<f64> = y.iter().map(|v| v * v).collect();
    let bound = x[0] * x[0] * y2[0];
    let ones = real_vec(&vec![1.0; cf.n]);
    let series = FixedSeries::new(Some(Complex64::new(mu, 0.0)), &ones, cf.alpha(), bound, policy)?;
    let (rhs, se) = monte_carlo(n_samples, |i| {
        let u = haar_sample_indexed(cf, seed, i);
        let spec: Vec<f64> = conjugated_spectrum(&x, &u.u, &y2).iter().map(|s| -s).collect();
        series.eval(&spec).re
    })?;
    Ok(McReport {
        lhs: lhs.value.re,
        rhs,
        residual: (lhs.value.re - rhs).abs(),
        mc_stderr: se,
        n_samples,
        rule_order: None,
        seed,
    })
}

/// Eigenvalue density of the Beta-Riesz law on the ordered region
/// 1 ≥ ξ₁ ≥ … ≥ ξₙ ≥ 0:
/// ∏ ξᵢ^{k₁−1/2} (1−ξᵢ)^{h−1−μ₀} ∏_{i<j} (ξᵢ−ξⱼ)^d / normalization.
#[derive(Clone, Debug)]
pub struct RhoDensity {
    pub cf: ConeField,
    pub k1: f64,
    pub h: f64,
    /// Integral of the unnormalized weight over the ordered region, by
    /// the chamber quadrature rule.
    pub normalization: f64,
    pub rule: QuadratureRule,
}

impl RhoDensity {
    pub fn new(cf: &ConeField, k1: f64, h: f64, order: usize) -> Result<Self> {
        if !(k1 >= 0.0) {
            return Err(Error::InvalidParameter("k1 must be nonnegative".into()));
        }
        if !(h > cf.mu0() && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("h must exceed mu0 = {}", cf.mu0())));
        }
        let rule = QuadratureRule::new(RuleKind::Chamber, cf.n, k1 + 0.5, h - cf.mu0(), cf.d as f64 / 2.0, order)?;
        let nfact: f64 = (1..=cf.n).map(|i| i as f64).product();
        let normalization = rule.total_weight() / nfact;
        Ok(RhoDensity { cf: *cf, k1, h, normalization, rule })
    }

    /// Unnormalized weight at ξ.
    pub fn weight(&self, xi: &[f64]) -> Result<f64> {
        rho_density(&self.cf, self.k1, self.h, xi)
    }

    pub fn density(&self, xi: &[f64]) -> Result<f64> {
        Ok(self.weight(xi)? / self.normalization)
    }

    /// Nodes in the ordered region with probability weights.
    pub fn atoms(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let total = self.rule.total_weight();
        (self.rule.nodes.clone(), self.rule.weights.iter().map(|w| w / total).collect())
    }
}

/// Unnormalized ρ weight
/// ∏ ξᵢ^{k₁−1/2} (1−ξᵢ)^{h−1−μ₀} ∏_{i<j} (ξᵢ−ξⱼ)^d.
pub fn rho_density(cf: &ConeField, k1: f64, h: f64, xi: &[f64]) -> Result<f64> {
    if !(h > cf.mu0()) {
        return Err(Error::InvalidParameter(format!("h must exceed mu0 = {}", cf.mu0())));
    }
    if xi.len() != cf.n {
        return Err(Error::InvalidParameter(format!("xi must have {} entries", cf.n)));
    }
    if xi.iter().any(|v| !(0.0..=1.0).contains(v)) || xi.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain("xi must satisfy 1 ≥ xi_1 ≥ … ≥ xi_n ≥ 0".into()));
    }
    let d = cf.d as f64;
    let mut w = 1.0;
    for (i, a) in xi.iter().enumerate() {
        w *= a.powf(k1 - 0.5) * (1.0 - a).powf(h - 1.0 - cf.mu0());
        for b in &xi[i + 1..] {
            w *= (a - b).powf(d);
        }
    }
    Ok(w)
}

/// E_u Σ_q w_q J^B_{(k₁,d/2)}(√σ(x u ξ_q u* x), iy) for a finite ξ-rule.
#[allow(clippy::too_many_arguments)]
fn mixed_average(
    cf: &ConeField,
    k1: f64,
    x: &[f64],
    y: &[f64],
    nodes: &[Vec<f64>],
    weights: &[f64],
    n_samples: usize,
    seed: u64,
    policy: &TruncationPolicy,
) -> Result<(f64, f64)> {
    let k = cf.multiplicity(k1)?;
    let xi_max = nodes.iter().flatten().copied().fold(0.0, f64::max);
    let bound = x[0] * x[0] * xi_max / 2.0;
    let w: Vec<Complex64> = y.iter().map(|v| Complex64::new(-v * v / 2.0, 0.0)).collect();
    let series = FixedSeries::new(Some(Complex64::new(k.mu(), 0.0)), &w, k.alpha(), bound, policy)?;
    monte_carlo(n_samples, |i| {
        let u = haar_sample_indexed(cf, seed, i);
        let vals: Vec<f64> = nodes
            .iter()
            .zip(weights)
            .map(|(xi, wq)| {
                let z: Vec<f64> = conjugated_spectrum(x, &u.u, xi).iter().map(|s| s / 2.0).collect();
                wq * series.eval(&z).re
            })
            .collect();
        pairwise_sum(&vals)
    })
}

/// |J^B_{(k₁+h,d/2)}(x, iy) − ∫∫ J^B_{(k₁,d/2)}(√σ(x u ξ u* x), iy) du dρ(ξ)|,
/// the ξ-integral by the chamber rule and the u-integral by Monte Carlo.
#[allow(clippy::too_many_arguments)]
pub fn verify_chamber_sonine(
    cf: &ConeField,
    k1: f64,
    h: f64,
    x: &[f64],
    y: &[f64],
    n_samples: usize,
    rule_order: usize,
    seed: u64,
    policy: &TruncationPolicy,
) -> Result<McReport> {
    let x = chamber(x, cf.n, "x")?;
    if y.len() != cf.n {
        return Err(Error::InvalidParameter(format!("y must have {} entries", cf.n)));
    }
    let rho = RhoDensity::new(cf, k1, h, rule_order)?;
    let shifted = cf.multiplicity(k1 + h)?;
    let lhs = bessel_b(&shifted, &real_vec(&x), &imag_vec(y), policy)?;
    let (nodes, weights) = rho.atoms();
    let (rhs, se) = mixed_average(cf, k1, &x, y, &nodes, &weights, n_samples, seed, policy)?;
    Ok(McReport {
        lhs: lhs.value.re,
        rhs,
        residual: (lhs.value.re - rhs).abs(),
        mc_stderr: se,
        n_samples,
        rule_order: Some(rule_order),
        seed,
    })
}

/// Probability rule for ∏ ξᵢ^{k₁−1/2} ∏_{i<j} (ξᵢ−ξⱼ)^d e^{−Σξᵢ/4} on the
/// ordered region, n ∈ {1, 2}.
///
/// n = 2 uses ξ₁ = r, ξ₂ = rs and r' = r(1+s)/4: Gauss–Laguerre in r' with
/// exponent 2k₁+d and Gauss–Jacobi in s for s^{k₁−1/2}(1−s)^d.
pub fn limit_rule(cf: &ConeField, k1: f64, order: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if !(k1 >= 0.0) {
        return Err(Error::InvalidParameter("k1 must be nonnegative".into()));
    }
    let (nodes, mut weights): (Vec<Vec<f64>>, Vec<f64>) = match cf.n {
        1 => {
            let g = gauss_laguerre(order, k1 - 0.5)?;
            (g.nodes.iter().map(|r| vec![4.0 * r]).collect(), g.weights)
        }
        2 => {
            let d = cf.d as f64;
            let e = 2.0 * k1 + d;
            let gl = gauss_laguerre(order, e)?;
            let gj = gauss_jacobi01(order, k1 - 0.5, d)?;
            let mut nodes = Vec::with_capacity(order * order);
            let mut weights = Vec::with_capacity(order * order);
            for (rp, wr) in gl.nodes.iter().zip(&gl.weights) {
                for (s, ws) in gj.nodes.iter().zip(&gj.weights) {
                    let r = 4.0 * rp / (1.0 + s);
                    nodes.push(vec![r, r * s]);
                    weights.push(wr * ws * (4.0 / (1.0 + s)).powf(e + 1.0));
                }
            }
            (nodes, weights)
        }
        _ => return Err(Error::Unsupported("the limit rule is implemented for n ≤ 2".into())),
    };
    let total = pairwise_sum(&weights);
    for w in &mut weights {
        *w /= total;
    }
    Ok((nodes, weights))
}

/// |J^A_{d/2}(x², −z²) − ∫∫ J^B_{(k₁,d/2)}(√σ(x u ξ u* x), iz) du dμ(ξ)| with
/// dμ ∝ ∏ξᵢ^{k₁−1/2} ∏(ξᵢ−ξⱼ)^d e^{−Σξ/4} dξ, n ≤ 2.
#[allow(clippy::too_many_arguments)]
pub fn verify_limit_corollary(
    cf: &ConeField,
    k1: f64,
    x: &[f64],
    z: &[f64],
    n_samples: usize,
    rule_order: usize,
    seed: u64,
    policy: &TruncationPolicy,
) -> Result<McReport> {
    let x = chamber(x, cf.n, "x")?;
    if z.len() != cf.n {
        return Err(Error::InvalidParameter(format!("z must have {} entries", cf.n)));
    }
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let z2: Vec<f64> = z.iter().map(|v| -v * v).collect();
    let lhs = hyper_0f0(&real_vec(&x2), &real_vec(&z2), cf.alpha(), policy)?;
    let (nodes, weights) = limit_rule(cf, k1, rule_order)?;
    let (rhs, se) = mixed_average(cf, k1, &x, z, &nodes, &weights, n_samples, seed, policy)?;
    Ok(McReport {
        lhs: lhs.value.re,
        rhs,
        residual: (lhs.value.re - rhs).abs(),
        mc_stderr: se,
        n_samples,
        rule_order: Some(rule_order),
        seed,
    })
}
