//! Gauss rules and Selberg-weighted product rules on [0,1]ⁿ.
//!
//! One-dimensional rules come from the Jacobi matrix of the three-term
//! recurrence (Golub–Welsch), with Newton-polished nodes and Christoffel
//! weights. The n-dimensional rules integrate g against the Selberg weight
//!
//! ω(t) = ∏ tᵢ^{a−1} (1−tᵢ)^{b−1} ∏_{i<j} |tᵢ−tⱼ|^{2γ},
//!
//! i.e. Σ wᵢ g(tᵢ) ≈ ∫_{[0,1]ⁿ} g ω dt for symmetric g.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A one-dimensional rule Σ wᵢ f(xᵢ).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Monic recurrence p_{k+1} = (x − α_k) p_k − β_k p_{k−1}, total mass μ₀.
struct Recurrence {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    mu0: f64,
}

impl Recurrence {
    /// Orthonormal values p̂_0..p̂_{N−1} at x, and p̂_N with its derivative.
    fn orthonormal(&self, x: f64) -> (f64, f64, f64) {
        let n = self.alpha.len();
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut sumsq = p * p;
        for k in 0..n {
            let sb = if k == 0 { 0.0 } else { self.beta[k].sqrt() };
            let sb_next = self.beta[k + 1].sqrt();
            let p_next = ((x - self.alpha[k]) * p - sb * p_prev) / sb_next;
            let d_next = (p + (x - self.alpha[k]) * d - sb * d_prev) / sb_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
            if k + 1 < n {
                sumsq += p * p;
            }
        }
        (sumsq, p, d)
    }

    fn rule(&self) -> GaussRule {
        let n = self.alpha.len();
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jm[(k, k)] = self.alpha[k];
            if k + 1 < n {
                let b = self.beta[k + 1].sqrt();
                jm[(k, k + 1)] = b;
                jm[(k + 1, k)] = b;
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let weights = nodes
            .iter_mut()
            .map(|x| {
                for _ in 0..3 {
                    let (_, p, d) = self.orthonormal(*x);
                    if d != 0.0 {
                        let step = p / d;
                        *x -= step;
                        if step.abs() <= 1e-16 * x.abs() {
                            break;
                        }
                    }
                }
                1.0 / self.orthonormal(*x).0
            })
            .collect();
        GaussRule { nodes, weights }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > 512 {
        return Err(Error::InvalidParameter("rule order must be between 1 and 512".into()));
    }
    Ok(())
}

/// Gauss–Jacobi on [0,1] for the weight s^A (1−s)^B, A, B > −1.
pub fn gauss_jacobi01(order: usize, a_exp: f64, b_exp: f64) -> Result<GaussRule> {
    check_order(order)?;
    if !(a_exp > -1.0 && b_exp > -1.0) {
        return Err(Error::InvalidParameter("Jacobi exponents must exceed -1".into()));
    }
    // weight (1−x)^a (1+x)^b on [−1,1] with s = (1+x)/2
    let (a, b) = (b_exp, a_exp);
    let ab = a + b;
    let mut alpha = Vec::with_capacity(order);
    let mut beta = vec![0.0; order + 1];
    for k in 0..order {
        let kf = k as f64;
        let al = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        alpha.push((1.0 + al) / 2.0);
    }
    for (k, slot) in beta.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let be = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *slot = be / 4.0;
    }
    let mu0 = (libm::lgamma(a_exp + 1.0) + libm::lgamma(b_exp + 1.0) - libm::lgamma(a_exp + b_exp + 2.0)).exp();
    Ok(Recurrence { alpha, beta, mu0 }.rule())
}

/// Gauss–Laguerre on [0,∞) for the weight r^A e^{−r}, A > −1.
pub fn gauss_laguerre(order: usize, a_exp: f64) -> Result<GaussRule> {
    check_order(order)?;
    if !(a_exp > -1.0) {
        return Err(Error::InvalidParameter("Laguerre exponent must exceed -1".into()));
    }
    let alpha = (0..order).map(|k| 2.0 * k as f64 + a_exp + 1.0).collect();
    let beta = (0..=order).map(|k| k as f64 * (k as f64 + a_exp)).collect();
    Ok(Recurrence { alpha, beta, mu0: libm::tgamma(a_exp + 1.0) }.rule())
}

/// How a [`QuadratureRule`] covers [0,1]ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// Tensor product of Gauss–Jacobi rules; the cross factor is evaluated
    /// pointwise.
    Box,
    /// Ordered region split by how many coordinates exceed 1/2, each piece
    /// mapped to a product of Jacobi rules that absorb the cross factor.
    Chamber,
}

/// Nodes and weights for the Selberg weight with parameters (a, b, γ).
///
/// Chamber rules list nodes in decreasing order and carry the factor n!, so
/// both kinds integrate symmetric functions over the full cube.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub n: usize,
    pub order: usize,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

fn check_selberg(n: usize, a: f64, b: f64, gamma: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if !(a > 0.0 && b > 0.0 && gamma >= 0.0) {
        return Err(Error::InvalidParameter("need a > 0, b > 0 and gamma ≥ 0".into()));
    }
    Ok(())
}

fn cross_factor(t: &[f64], gamma: f64) -> f64 {
    let mut v = 1.0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            v *= (t[i] - t[j]).abs().powf(2.0 * gamma);
        }
    }
    v
}

/// Every index tuple in {0..order}^dim, last index fastest.
fn tuples(dim: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..order).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Jacobi rules for p ordered points t = c·cumprod(s) with endpoint exponent
/// a−1 at 0, plus the exponents used.
fn group_rules(p: usize, a: f64, gamma: f64, order: usize) -> Result<Vec<(GaussRule, f64, f64)>> {
    (1..=p)
        .map(|l| {
            let r = (p - l) as f64;
            let ea = (a - 1.0) * (r + 1.0) + gamma * r * (r + 1.0) + r;
            let eb = if l == 1 { 0.0 } else { 2.0 * gamma };
            Ok((gauss_jacobi01(order, ea, eb)?, ea, eb))
        })
        .collect()
}

/// Points, rule weight / Jacobi weight, and Jacobian for one group.
fn group_points(rules: &[(GaussRule, f64, f64)], idx: &[usize], scale: f64) -> (Vec<f64>, f64) {
    let p = rules.len();
    let mut pts = Vec::with_capacity(p);
    let mut w = 1.0;
    let mut prod = scale;
    for (l, (&i, (rule, ea, eb))) in idx.iter().zip(rules).enumerate() {
        let s = rule.nodes[i];
        prod *= s;
        pts.push(prod);
        w *= rule.weights[i] / (s.powf(*ea) * (1.0 - s).powf(*eb));
        w *= scale * s.powi((p - 1 - l) as i32);
    }
    (pts, w)
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n: usize, a: f64, b: f64, gamma: f64, order: usize) -> Result<Self> {
        match kind {
            RuleKind::Box => Self::tensor(n, a, b, gamma, order),
            RuleKind::Chamber => Self::chamber(n, a, b, gamma, order),
        }
    }

    /// Tensor Gauss–Jacobi rule, orderⁿ nodes.
    pub fn tensor(n: usize, a: f64, b: f64, gamma: f64, order: usize) -> Result<Self> {
        check_selberg(n, a, b, gamma)?;
        let g = gauss_jacobi01(order, a - 1.0, b - 1.0)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for idx in tuples(n, order) {
            let t: Vec<f64> = idx.iter().map(|&i| g.nodes[i]).collect();
            let w = idx.iter().map(|&i| g.weights[i]).product::<f64>() * cross_factor(&t, gamma);
            nodes.push(t);
            weights.push(w);
        }
        Ok(QuadratureRule { kind: RuleKind::Box, n, order, a, b, gamma, nodes, weights })
    }

    /// Split chamber rule, Σ_k order^n nodes over the k = 0..n pieces.
    pub fn chamber(n: usize, a: f64, b: f64, gamma: f64, order: usize) -> Result<Self> {
        check_selberg(n, a, b, gamma)?;
        let c = 0.5;
        let nfact: f64 = (1..=n).map(|i| i as f64).product();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for high in 0..=n {
            let low = n - high;
            let lo = group_rules(low, a, gamma, order)?;
            let hi = group_rules(high, b, gamma, order)?;
            let hi_pts: Vec<_> = tuples(high, order).iter().map(|i| group_points(&hi, i, 1.0 - c)).collect();
            for il in tuples(low, order) {
                let (tl, wl) = group_points(&lo, &il, c);
                for (uh, wh) in &hi_pts {
                    let t: Vec<f64> = uh.iter().rev().map(|u| 1.0 - u).chain(tl.iter().copied()).collect();
                    let mut w = wl * wh * nfact * cross_factor(&t, gamma);
                    for ti in &t {
                        w *= ti.powf(a - 1.0) * (1.0 - ti).powf(b - 1.0);
                    }
                    nodes.push(t);
                    weights.push(w);
                }
            }
        }
        Ok(QuadratureRule { kind: RuleKind::Chamber, n, order, a, b, gamma, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// True when the rule was built for these Selberg parameters.
    pub fn matches(&self, n: usize, a: f64, b: f64, gamma: f64) -> bool {
        let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + v.abs());
        self.n == n && close(self.a, a) && close(self.b, b) && close(self.gamma, gamma)
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }
}

/// Selberg's integral ∫_{[0,1]ⁿ} ω(t) dt as a product of Gamma functions.
pub fn selberg_closed_form(n: usize, a: f64, b: f64, gamma: f64) -> Result<f64> {
    check_selberg(n, a, b, gamma)?;
    let lg = libm::lgamma;
    let nf = n as f64;
    let mut s = 0.0;
    for j in 0..n {
        let jf = j as f64;
        s += lg(a + jf * gamma) + lg(b + jf * gamma) + lg(1.0 + (jf + 1.0) * gamma)
            - lg(a + b + (nf + jf - 1.0) * gamma)
            - lg(1.0 + gamma);
    }
    Ok(s.exp())
}

/// Pairwise (cascade) summation with a fixed reduction tree.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

pub fn pairwise_sum_complex(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum_complex(&v[..n / 2]) + pairwise_sum_complex(&v[n / 2..]),
    }
}
