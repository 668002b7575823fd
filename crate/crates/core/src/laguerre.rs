//! Multivariate Laguerre polynomials and their connection coefficients.
//!
//! Normalized Laguerre polynomials
//! L̃_κ^a(x) = Σ_{λ⊆κ} (κ choose λ) (−1)^{|λ|} Ĉ_λ(x) / [a+q]_λ, q = 1 + (n−1)/α.
//!
//! Connection coefficients. In the basis (−1)^{|λ|}Ĉ_λ the change of
//! parameter a → a+h is the diagonal R_ν = [a+q]_ν/[a+h+q]_ν sandwiched
//! between the binomial matrices exp(E) and exp(−E). So the table is
//! c = exp(−E) · R · exp(E) e_κ, which is computed shell by shell on the
//! lattice of sub-partitions of κ. No closed form is used.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hyper::{bessel_b, imag_vec, real_vec, EvalResult, MultiplicityB, TruncationPolicy};
use crate::jack::{binomial_table, jack_shell, scaled_binomial_row, Powers, SubLattice};
use crate::partitions::{enumerate_partitions, Partition};
use crate::scalar::{ln_binomial, parse_rational, rational_string, Rational, Scalar};

/// Laguerre parameters (n, a, α).
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreParams<T = Rational> {
    pub n: usize,
    pub a: T,
    pub alpha: T,
}

impl<T: Scalar> LaguerreParams<T> {
    pub fn new(n: usize, a: T, alpha: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("rank n must be at least 1".into()));
        }
        if a <= -T::one() {
            return Err(Error::InvalidParameter("a must exceed -1".into()));
        }
        if alpha <= T::zero() {
            return Err(Error::InvalidParameter("alpha must be positive".into()));
        }
        Ok(LaguerreParams { n, a, alpha })
    }

    /// a = k₁ − 1/2 and α = 1/k₂, so that a + q = μ(k).
    pub fn from_multiplicity(k: &MultiplicityB<T>) -> Result<Self> {
        LaguerreParams::new(k.n, k.k1.clone() - T::ratio(1, 2), k.alpha())
    }

    /// q = 1 + (n−1)/α.
    pub fn q(&self) -> T {
        T::one() + T::from_int(self.n as i64 - 1) / self.alpha.clone()
    }

    pub fn a_plus_q(&self) -> T {
        self.a.clone() + self.q()
    }

    pub fn to_f64(&self) -> LaguerreParams<f64> {
        LaguerreParams { n: self.n, a: self.a.to_f64(), alpha: self.alpha.to_f64() }
    }
}

/// c_{κ,λ} for all λ ⊆ κ, weight-descending lattice order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable<T = Rational> {
    pub kappa: Partition,
    pub entries: Vec<(Partition, T)>,
}

impl<T: Scalar> ConnectionTable<T> {
    pub fn get(&self, lambda: &Partition) -> Option<&T> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, v)| v)
    }

    pub fn sum(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, v)| acc + v.clone())
    }

    /// Entries that are strictly negative (threshold −1e-10 in float mode).
    pub fn negatives(&self) -> impl Iterator<Item = &(Partition, T)> {
        self.entries.iter().filter(|(_, v)| v.is_strictly_negative())
    }
}

impl ConnectionTable<Rational> {
    /// `{kappa, entries: [{lambda, numerator, denominator}]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(l, v)| {
                json!({
                    "lambda": l.to_string(),
                    "numerator": v.numer().to_string(),
                    "denominator": v.denom().to_string(),
                })
            })
            .collect();
        json!({ "kappa": self.kappa.to_string(), "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("connection table JSON: {what}"));
        let kappa: Partition = v["kappa"].as_str().ok_or_else(|| bad("kappa"))?.parse()?;
        let mut entries = Vec::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let l: Partition = e["lambda"].as_str().ok_or_else(|| bad("lambda"))?.parse()?;
            let num = e["numerator"].as_str().ok_or_else(|| bad("numerator"))?;
            let den = e["denominator"].as_str().ok_or_else(|| bad("denominator"))?;
            entries.push((l, parse_rational(&format!("{num}/{den}"))?));
        }
        Ok(ConnectionTable { kappa, entries })
    }
}

impl ConnectionTable<f64> {
    /// `{kappa, entries: [{lambda, value}]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(l, v)| json!({ "lambda": l.to_string(), "value": v }))
            .collect();
        json!({ "kappa": self.kappa.to_string(), "entries": entries })
    }
}

/// Fails if some factor a+q − j/α + p (p < κⱼ) vanishes.
fn check_pochhammer<T: Scalar>(base: &T, kappa: &Partition, alpha: &T, what: &str) -> Result<()> {
    for (j, &kj) in kappa.parts().iter().enumerate() {
        let row = base.clone() - T::from_int(j as i64) / alpha.clone();
        for p in 0..kj {
            if (row.clone() + T::from_int(p as i64)).is_negligible() {
                return Err(Error::Singular(format!(
                    "[{what}]_λ vanishes (row {}, factor {p})",
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn pad<T: Scalar>(kappa: &Partition, p: &LaguerreParams<T>) -> Result<Partition> {
    Partition::with_len(kappa.parts(), p.n)
}

/// The unique c_{κ,λ} with L̃_κ^{a+h} = Σ_{λ⊆κ} c_{κ,λ} L̃_λ^a.
pub fn connection_coefficients<T: Scalar>(
    kappa: &Partition,
    p: &LaguerreParams<T>,
    h: &T,
) -> Result<ConnectionTable<T>> {
    if *h <= T::zero() {
        return Err(Error::InvalidParameter("shift h must be positive".into()));
    }
    let kappa = pad(kappa, p)?;
    let aq = p.a_plus_q();
    let ahq = aq.clone() + h.clone();
    check_pochhammer(&aq, &kappa, &p.alpha, "a+q")?;
    check_pochhammer(&ahq, &kappa, &p.alpha, "a+h+q")?;

    let lat = SubLattice::new(&kappa);
    let coef = lat.up_coefficients(&p.alpha);
    let k = kappa.weight();

    // exp(E) e_κ: binomial row
    let mut row = vec![T::zero(); lat.len()];
    row[0] = T::one();
    for w in (0..k).rev() {
        let inv = T::one() / T::from_int((k - w) as i64);
        for idx in lat.shell(w) {
            let s = coef[idx].iter().fold(T::zero(), |acc, (t, c)| acc + row[*t].clone() * c.clone());
            row[idx] = s * inv.clone();
        }
    }

    // diagonal parameter change
    let mut cur: Vec<T> = lat
        .nodes()
        .iter()
        .zip(row)
        .map(|(nu, b)| {
            b * crate::hyper::pochhammer_generic(&aq, nu, &p.alpha)
                / crate::hyper::pochhammer_generic(&ahq, nu, &p.alpha)
        })
        .collect();

    // exp(−E)
    let mut acc = cur.clone();
    for m in 1..=k {
        let scale = -(T::one() / T::from_int(m as i64));
        let mut next = vec![T::zero(); lat.len()];
        for w in 0..=(k - m) {
            for idx in lat.shell(w) {
                let s = coef[idx].iter().fold(T::zero(), |a, (t, c)| {
                    if cur[*t].is_zero() {
                        a
                    } else {
                        a + cur[*t].clone() * c.clone()
                    }
                });
                if !s.is_zero() {
                    let v = s * scale.clone();
                    acc[idx] = acc[idx].clone() + v.clone();
                    next[idx] = v;
                }
            }
        }
        cur = next;
    }
    Ok(ConnectionTable { kappa, entries: lat.nodes().iter().cloned().zip(acc).collect() })
}

fn cache_file(dir: &Path, kappa: &Partition, p: &LaguerreParams<Rational>, h: &Rational) -> std::path::PathBuf {
    let tag = |r: &Rational| rational_string(r).replace('/', "_").replace('-', "m");
    dir.join(format!(
        "conn-n{}-a{}-alpha{}-h{}-k{}.json",
        p.n,
        tag(&p.a),
        tag(&p.alpha),
        tag(h),
        kappa.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
    ))
}

/// Exact table, read from / written to `dir` when given.
pub fn connection_coefficients_cached(
    kappa: &Partition,
    p: &LaguerreParams<Rational>,
    h: &Rational,
    dir: Option<&Path>,
) -> Result<ConnectionTable<Rational>> {
    let Some(dir) = dir else {
        return connection_coefficients(kappa, p, h);
    };
    let kappa = pad(kappa, p)?;
    let file = cache_file(dir, &kappa, p, h);
    if let Ok(text) = fs::read_to_string(&file) {
        if let Ok(v) = serde_json::from_str::<Value>(&text) {
            if let Ok(t) = ConnectionTable::from_json(&v) {
                if t.kappa == kappa {
                    return Ok(t);
                }
            }
        }
    }
    let t = connection_coefficients(&kappa, p, h)?;
    fs::create_dir_all(dir)?;
    let tmp = file.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&t.to_json())?)?;
    fs::rename(&tmp, &file)?;
    Ok(t)
}

/// L̃_κ^a(x; α), summed by weight shells until the rigorous remainder bound
/// drops below `rel_tol`·|partial sum| (or the sum is complete).
///
/// Binomials come from the scaled row, so large κ are fine.
pub fn laguerre_normalized(
    kappa: &Partition,
    p: &LaguerreParams<f64>,
    x: &[f64],
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    policy.validate()?;
    if x.len() != p.n {
        return Err(Error::InvalidParameter(format!("x must have {} entries", p.n)));
    }
    let kappa = pad(kappa, p)?;
    let aq = p.a_plus_q();
    check_pochhammer(&aq, &kappa, &p.alpha, "a+q")?;
    let k = kappa.weight();
    let lat = SubLattice::new(&kappa);
    let scaled = scaled_binomial_row(&lat, p.alpha);
    let xnorm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut pw = Powers::new(&real_vec(x));
    // adding a box multiplies [a+q]_λ by at least a+q − (n−1)/α = a+1
    let g = aq - (p.n as f64 - 1.0) / p.alpha;
    let mut partial = 0.0;
    let mut tail = f64::INFINITY;
    let top = k.min(policy.max_degree);
    for m in 0..=top {
        let shell = jack_shell(p.n, p.alpha, m);
        let cx = shell.jack_values(&shell.monomials(&mut pw));
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let choose = crate::scalar::binomial_f64(k, m);
        let mut shell_sum = 0.0;
        let mut pmin = f64::INFINITY;
        for idx in lat.shell(m) {
            let lambda = &lat.nodes()[idx];
            let i = shell.position(lambda).expect("lattice node has n parts");
            let poch = crate::hyper::pochhammer_generic(&aq, lambda, &p.alpha);
            pmin = pmin.min(poch.abs());
            shell_sum += scaled[idx] * cx[i].re / (shell.at_ones[i] * poch);
        }
        partial += sign * choose * shell_sum;
        tail = if m == k { 0.0 } else { laguerre_tail(k, m, xnorm, pmin, g) };
        if tail <= policy.rel_tol * partial.abs() || m == k {
            return Ok(EvalResult { value: Complex64::new(partial, 0.0), degree_used: m, tail_bound: tail });
        }
    }
    Err(Error::NonConvergence { degree: top, tail_bound: tail, value: partial.abs() })
}

/// Σ_{m'>m}^{K} C(K,m') ‖x‖^{m'} / (P_m g^{m'−m}).
fn laguerre_tail(k: u32, m: u32, xnorm: f64, pmin: f64, g: f64) -> f64 {
    if xnorm == 0.0 {
        return 0.0;
    }
    let lx = xnorm.ln();
    let lg = g.ln();
    let lp = pmin.ln();
    ((m + 1)..=k)
        .map(|mm| (ln_binomial(k, mm) + mm as f64 * lx - lp - (mm - m) as f64 * lg).exp())
        .sum()
}

/// One strictly negative coefficient found by the scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kappa: Partition,
    pub lambda: Partition,
    pub value: String,
}

/// Negative connection coefficients for all |κ| ≤ `max_weight`.
///
/// An empty list only says that no witness exists up to that weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallachReport {
    pub n: usize,
    pub a: String,
    pub alpha: String,
    pub h: String,
    pub max_weight: u32,
    /// a < −1/2: outside the range where positivity results are known.
    pub outside_hypothesis: bool,
    pub tables_scanned: usize,
    pub violations: Vec<Violation>,
}

impl WallachReport {
    /// CSV with columns kappa, lambda, value.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kappa", "lambda", "value"])?;
        for v in &self.violations {
            w.write_record([v.kappa.to_string(), v.lambda.to_string(), v.value.clone()])?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
            .map_err(|e| Error::Io(e.to_string()))
    }
}

/// Scans every κ with 1 ≤ |κ| ≤ `max_weight` for negative c_{κ,λ} at shift h.
pub fn wallach_sign_scan<T: Scalar>(p: &LaguerreParams<T>, h: &T, max_weight: u32) -> Result<WallachReport> {
    if max_weight > 8 {
        return Err(Error::InvalidParameter("max_weight must be at most 8".into()));
    }
    let mut violations = Vec::new();
    let mut tables = 0;
    for w in 1..=max_weight {
        for kappa in enumerate_partitions(w, p.n) {
            let t = connection_coefficients(&kappa, p, h)?;
            tables += 1;
            for (l, v) in t.negatives() {
                violations.push(Violation { kappa: kappa.clone(), lambda: l.clone(), value: v.render() });
            }
        }
    }
    Ok(WallachReport {
        n: p.n,
        a: p.a.render(),
        alpha: p.alpha.render(),
        h: h.render(),
        max_weight,
        outside_hypothesis: p.a < -T::ratio(1, 2),
        tables_scanned: tables,
        violations,
    })
}

/// Both sides of the Laguerre-to-Bessel limit at one resolution j.
#[derive(Clone, Debug, Serialize)]
pub struct LimitError {
    pub j: u32,
    pub kappa: Partition,
    pub laguerre: EvalResult,
    pub bessel: EvalResult,
    pub error: f64,
}

/// Sorted copy of a nonnegative vector, largest first.
pub(crate) fn chamber_point(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Domain("chamber points need finite nonnegative entries".into()));
    }
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(v)
}

/// |L̃_{⌊jx⌋}^a(y²/j; α) − J_k^B(iy, 2√x)| with a = k₁ − 1/2, α = 1/k₂.
pub fn laguerre_bessel_limit_error(
    k: &MultiplicityB,
    x: &[f64],
    y: &[f64],
    j: u32,
    policy: &TruncationPolicy,
) -> Result<LimitError> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    if x.len() != k.n || y.len() != k.n {
        return Err(Error::InvalidParameter(format!("x and y must have {} entries", k.n)));
    }
    let x = chamber_point(x)?;
    let kappa = Partition::new(x.iter().map(|v| (v * j as f64).floor() as u32).collect())?;
    let p = LaguerreParams::from_multiplicity(k)?;
    let arg: Vec<f64> = y.iter().map(|v| v * v / j as f64).collect();
    let laguerre = laguerre_normalized(&kappa, &p, &arg, policy)?;
    let root: Vec<f64> = x.iter().map(|v| 2.0 * v.sqrt()).collect();
    let bessel = bessel_b(k, &imag_vec(y), &real_vec(&root), policy)?;
    let error = (laguerre.value - bessel.value).norm();
    Ok(LimitError { j, kappa, laguerre, bessel, error })
}

/// Exact binomial row as a map, used by tests and the CLI.
pub fn binomial_row_exact(kappa: &Partition, alpha: &Rational) -> Result<Vec<(Partition, Rational)>> {
    binomial_table(kappa, alpha)
}
