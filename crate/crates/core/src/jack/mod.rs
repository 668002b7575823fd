//! Jack polynomials in the monomial basis.
//!
//! `P_λ` is computed from the Laplace–Beltrami eigen-recursion, walking down the
//! dominance order below λ. The recursion only ever adds positive terms, so the
//! same code is used with exact rationals and with doubles.

mod binomial;
mod numeric;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::scalar::{rational_string, Rational, Scalar};

pub use binomial::{
    binomial, binomial_by_shift, binomial_table, contiguous_binomial, scaled_binomial_row,
    SubLattice,
};
pub use numeric::{jack_shell, JackShell, Powers};

/// Which normalization of the Jack family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Monic: coefficient of m_λ is 1.
    P,
    /// Degree-m shells sum to (z₁+…+zₙ)^m.
    C,
}

/// Identifies one Jack polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JackIndex {
    pub lambda: Partition,
    pub alpha: Rational,
    pub normalization: Normalization,
}

/// A symmetric polynomial in the monomial basis m_μ.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<T = Rational> {
    n: usize,
    degree: u32,
    coeffs: BTreeMap<Partition, T>,
}

impl<T: Scalar> SymPoly<T> {
    pub fn zero(n: usize) -> Self {
        SymPoly { n, degree: 0, coeffs: BTreeMap::new() }
    }

    /// Builds from monomial coefficients, dropping zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Partition, T)>) -> Result<Self> {
        let mut p = SymPoly::zero(n);
        for (mu, c) in terms {
            if mu.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "monomial {mu} does not have {n} slots"
                )));
            }
            p.add_term(mu, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mu: Partition, c: T) {
        self.degree = self.degree.max(mu.weight());
        let e = self.coeffs.entry(mu).or_insert_with(T::zero);
        *e = e.clone() + c;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, T> {
        &self.coeffs
    }

    /// Coefficient of m_μ (zero when absent).
    pub fn coeff(&self, mu: &Partition) -> T {
        self.coeffs.get(mu).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms only.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &T)> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        SymPoly {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.clone() * s.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    /// Value at (1, …, 1): each m_μ contributes its orbit size.
    pub fn at_ones(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (mu, c)| {
            acc + c.clone() * T::from_int(mu.orbit_size() as i64)
        })
    }

    /// Evaluates in complex floating point, summing monomials in key order.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "expected {} variables, got {}",
                self.n,
                z.len()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(mu, c)| monomial_eval(mu, z) * c.to_f64())
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b))
    }
}

impl SymPoly<Rational> {
    /// JSON map "partition string → rational string".
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, c) in self.terms() {
            m.insert(k.to_string(), Value::String(rational_string(c)));
        }
        Value::Object(m)
    }

    pub fn from_json(n: usize, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("SymPoly JSON must be an object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, c) in obj {
            let mu = Partition::with_len(k.parse::<Partition>()?.parts(), n)?;
            let s = c
                .as_str()
                .ok_or_else(|| Error::Parse(format!("coefficient of {k} must be a string")))?;
            terms.push((mu, crate::scalar::parse_rational(s)?));
        }
        SymPoly::from_terms(n, terms)
    }
}

/// m_μ(z): sum of z^β over the distinct rearrangements β of μ.
pub fn monomial_eval(mu: &Partition, z: &[Complex64]) -> Complex64 {
    mu.distinct_permutations()
        .iter()
        .map(|beta| {
            beta.iter()
                .zip(z)
                .fold(Complex64::new(1.0, 0.0), |acc, (&b, &zi)| acc * zi.powu(b))
        })
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

fn check_alpha<T: Scalar>(alpha: &T) -> Result<()> {
    if *alpha <= T::zero() {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    Ok(())
}

/// Eigenvalue of the recursion operator on m_μ, up to a constant per weight.
fn diag_value<T: Scalar>(mu: &[u32], alpha: &T) -> T {
    let n = mu.len();
    let quad: i64 = mu.iter().map(|&p| p as i64 * (p as i64 - 1)).sum();
    let lin: i64 = mu.iter().enumerate().map(|(k, &p)| (n - 1 - k) as i64 * p as i64).sum();
    alpha.clone() * T::ratio(quad, 2) + T::from_int(lin)
}

/// Dense P_λ coefficients over one weight shell (indexed like `shell`).
pub(crate) fn jack_p_dense<T: Scalar>(
    shell: &[Partition],
    index: &HashMap<Vec<u32>, usize>,
    li: usize,
    alpha: &T,
) -> Vec<T> {
    let lambda = &shell[li];
    let n = lambda.len();
    let mut d = vec![T::zero(); shell.len()];
    d[li] = T::one();
    let top = diag_value(lambda.parts(), alpha);
    let mut nu = vec![0u32; n];
    for (mi, mu) in shell.iter().enumerate().skip(li + 1) {
        if !lambda.dominates(mu) {
            continue;
        }
        let m = mu.parts();
        let mut s = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                for t in 1..=m[j] {
                    nu.copy_from_slice(m);
                    nu[i] += t;
                    nu[j] -= t;
                    nu.sort_unstable_by(|a, b| b.cmp(a));
                    if let Some(&k) = index.get(nu.as_slice()) {
                        if !d[k].is_zero() {
                            let w = (m[i] - m[j] + 2 * t) as i64;
                            s = s + T::from_int(w) * d[k].clone();
                        }
                    }
                }
            }
        }
        d[mi] = s / (top.clone() - diag_value(m, alpha));
    }
    d
}

pub(crate) fn shell_index(shell: &[Partition]) -> HashMap<Vec<u32>, usize> {
    shell.iter().enumerate().map(|(i, p)| (p.parts().to_vec(), i)).collect()
}

/// P_λ with coefficients in any field (used by the float layer).
pub fn jack_p_generic<T: Scalar>(lambda: &Partition, alpha: &T, n: usize) -> Result<SymPoly<T>> {
    check_alpha(alpha)?;
    let lambda = Partition::with_len(lambda.parts(), n)?;
    let shell = enumerate_partitions(lambda.weight(), n);
    let index = shell_index(&shell);
    let li = index[lambda.parts()];
    let d = jack_p_dense(&shell, &index, li, alpha);
    SymPoly::from_terms(n, shell.into_iter().zip(d).filter(|(_, c)| !c.is_zero()))
}

type ExactKey = (Partition, Rational, usize);

static EXACT_P: LazyLock<RwLock<HashMap<ExactKey, Arc<SymPoly>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Exact monic Jack polynomial P_λ^α in n variables (memoized).
pub fn jack_p(lambda: &Partition, alpha: &Rational, n: usize) -> Result<Arc<SymPoly>> {
    check_alpha(alpha)?;
    let lambda = Partition::with_len(lambda.parts(), n)?;
    let key = (lambda.clone(), alpha.clone(), n);
    if let Some(p) = EXACT_P.read().expect("jack cache poisoned").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(jack_p_generic(&lambda, alpha, n)?);
    let mut w = EXACT_P.write().expect("jack cache poisoned");
    Ok(w.entry(key).or_insert(p).clone())
}

/// α^{|λ|} |λ|! / c′_λ, the factor turning P_λ into C_λ.
pub fn c_over_p<T: Scalar>(lambda: &Partition, alpha: &T) -> Result<T> {
    let cells = lambda.cells();
    let mut f = T::one();
    for (r, c) in cells.iter().enumerate() {
        let hook = alpha.clone() * T::from_int(c.arm as i64 + 1) + T::from_int(c.leg as i64);
        f = f * alpha.clone() * T::from_int(r as i64 + 1) / hook;
    }
    Ok(f)
}

/// Exact C_λ^α = α^{|λ|}|λ|!/c′_λ · P_λ^α.
pub fn jack_c(lambda: &Partition, alpha: &Rational, n: usize) -> Result<SymPoly> {
    let p = jack_p(lambda, alpha, n)?;
    let lambda = Partition::with_len(lambda.parts(), n)?;
    Ok(p.scale(&c_over_p(&lambda, alpha)?))
}

/// Either normalization by index.
pub fn jack(index: &JackIndex, n: usize) -> Result<SymPoly> {
    match index.normalization {
        Normalization::P => Ok((*jack_p(&index.lambda, &index.alpha, n)?).clone()),
        Normalization::C => jack_c(&index.lambda, &index.alpha, n),
    }
}

/// Ĉ_λ = C_λ / C_λ(𝟏) = P_λ / P_λ(𝟏).
pub fn jack_c_hat(lambda: &Partition, alpha: &Rational, n: usize) -> Result<SymPoly> {
    let p = jack_p(lambda, alpha, n)?;
    let one = p.at_ones();
    Ok(p.scale(&(Rational::from_integer(1.into()) / one)))
}

/// C_λ^α(x) evaluated in complex arithmetic from the exact coefficients.
pub fn jack_eval(lambda: &Partition, alpha: &Rational, x: &[Complex64]) -> Result<Complex64> {
    if x.is_empty() {
        return Err(Error::InvalidParameter("need at least one variable".into()));
    }
    jack_c(lambda, alpha, x.len())?.eval(x)
}
