//! Sonine-type integral representations of type-B Bessel functions: the
//! restricted density on [0,1]ⁿ with its Selberg constant, the discrete
//! measures built from Laguerre connection coefficients, and the passage
//! from type B to type A.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyper::{
    bessel_a, bessel_b, imag_vec, real_vec, FixedSeries, MultiplicityB, TruncationPolicy,
};
use crate::laguerre::{chamber_point, connection_coefficients_cached, ConnectionTable, LaguerreParams};
use crate::partitions::Partition;
use crate::quadrature::{pairwise_sum, pairwise_sum_complex, selberg_closed_form, QuadratureRule, RuleKind};
use crate::scalar::{Rational, Scalar};

/// Which representation a shift h is admissible for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// h > k₂(n−1): absolutely continuous density on [0,1]ⁿ.
    Density,
    /// h = m·k₂: discrete approximants from connection coefficients.
    Discrete { m: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SonineParams {
    pub k: MultiplicityB,
    pub h: f64,
    pub regime: Regime,
}

impl SonineParams {
    pub fn density(k: MultiplicityB, h: f64) -> Result<Self> {
        let lower = k.k2 * (k.n as f64 - 1.0);
        if !(h > lower && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("density regime needs h > k2(n-1) = {lower}")));
        }
        Ok(SonineParams { k, h, regime: Regime::Density })
    }

    pub fn discrete(k: MultiplicityB, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let h = m as f64 * k.k2;
        Ok(SonineParams { k, h, regime: Regime::Discrete { m } })
    }

    /// Selberg parameters (a, b, γ) after tᵢ = xᵢ².
    pub fn selberg_parameters(&self) -> (f64, f64, f64) {
        let k = &self.k;
        (k.k1 + 0.5, self.h - k.k2 * (k.n as f64 - 1.0), k.k2)
    }

    fn require_density(&self) -> Result<()> {
        match self.regime {
            Regime::Density => Ok(()),
            Regime::Discrete { .. } => Err(Error::InvalidParameter("operation needs the density regime".into())),
        }
    }

    /// Quadrature rule for the density in t-coordinates.
    pub fn rule(&self, kind: RuleKind, order: usize) -> Result<QuadratureRule> {
        self.require_density()?;
        let (a, b, g) = self.selberg_parameters();
        QuadratureRule::new(kind, self.k.n, a, b, g, order)
    }
}

/// c_{k,h} by quadrature and by the Gamma product.
#[derive(Clone, Debug, Serialize)]
pub struct SelbergConstant {
    pub quadrature: f64,
    pub closed_form: f64,
    pub relative: f64,
    pub rule_order: usize,
}

/// Agreement required between the two Selberg computations.
pub const SELBERG_TOLERANCE: f64 = 1e-8;

/// c_{k,h} = ∫_{[0,1]ⁿ} ∏(xᵢ²)^{k₁}(1−xᵢ²)^{h−k₂(n−1)−1} ∏|xᵢ²−xⱼ²|^{2k₂} dx.
///
/// Fails with [`Error::Disagreement`] when the chamber rule of the given order
/// and the closed form differ by more than [`SELBERG_TOLERANCE`].
pub fn selberg_constant(sp: &SonineParams, order: usize) -> Result<SelbergConstant> {
    let rule = sp.rule(RuleKind::Chamber, order)?;
    let (a, b, g) = sp.selberg_parameters();
    let scale = 0.5f64.powi(sp.k.n as i32);
    let closed_form = scale * selberg_closed_form(sp.k.n, a, b, g)?;
    let quadrature = scale * rule.total_weight();
    let relative = (quadrature / closed_form - 1.0).abs();
    if !(relative <= SELBERG_TOLERANCE) {
        return Err(Error::Disagreement { quadrature, closed_form, relative });
    }
    Ok(SelbergConstant { quadrature, closed_form, relative, rule_order: order })
}

/// f_{k,h}(x) on [0,1]ⁿ, normalized by the closed-form constant.
pub fn sonine_density(sp: &SonineParams, x: &[f64]) -> Result<f64> {
    sp.require_density()?;
    if x.len() != sp.k.n {
        return Err(Error::InvalidParameter(format!("x must have {} entries", sp.k.n)));
    }
    if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Domain("the density lives on [0,1]^n".into()));
    }
    let (a, b, g) = sp.selberg_parameters();
    let c = 0.5f64.powi(sp.k.n as i32) * selberg_closed_form(sp.k.n, a, b, g)?;
    let t: Vec<f64> = x.iter().map(|v| v * v).collect();
    let mut f = 1.0;
    for (i, ti) in t.iter().enumerate() {
        f *= ti.powf(sp.k.k1) * (1.0 - ti).powf(b - 1.0);
        for tj in &t[i + 1..] {
            f *= (ti - tj).abs().powf(2.0 * g);
        }
    }
    Ok(f / c)
}

/// Both sides of a verified identity.
#[derive(Clone, Debug, Serialize)]
pub struct SonineReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub degree_used: u32,
    pub rule_order: usize,
}

/// |J^B_{(k₁+h,k₂)}(𝟏, iy) − ∫ J^B_k(x, iy) f_{k,h}(x) dx|.
pub fn verify_restricted_sonine(
    sp: &SonineParams,
    y: &[f64],
    rule: &QuadratureRule,
    policy: &TruncationPolicy,
) -> Result<SonineReport> {
    sp.require_density()?;
    let k = &sp.k;
    let n = k.n;
    if y.len() != n {
        return Err(Error::InvalidParameter(format!("y must have {n} entries")));
    }
    let (a, b, g) = sp.selberg_parameters();
    if !rule.matches(n, a, b, g) {
        return Err(Error::InvalidParameter("quadrature rule was built for other parameters".into()));
    }
    let shifted = MultiplicityB::new(n, k.k1 + sp.h, k.k2)?;
    let lhs = bessel_b(&shifted, &real_vec(&vec![1.0; n]), &imag_vec(y), policy)?;
    let w: Vec<Complex64> = y.iter().map(|v| Complex64::new(-v * v / 2.0, 0.0)).collect();
    let series = FixedSeries::new(Some(Complex64::new(k.mu(), 0.0)), &w, k.alpha(), 0.5, policy)?;
    let vals: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(t, wt)| {
            let z: Vec<f64> = t.iter().map(|v| v / 2.0).collect();
            wt * series.eval(&z).re
        })
        .collect();
    let rhs = pairwise_sum(&vals) / selberg_closed_form(n, a, b, g)?;
    Ok(SonineReport {
        lhs: lhs.value.re,
        rhs,
        residual: (lhs.value.re - rhs).abs(),
        degree_used: lhs.degree_used.max(series.degree()),
        rule_order: rule.order,
    })
}

/// Finitely many atoms with nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Exact weights when the measure came from rational tables.
    #[serde(skip)]
    pub exact_weights: Option<Vec<Rational>>,
}

impl DiscreteMeasure {
    pub fn point_mass(point: Vec<f64>) -> Self {
        DiscreteMeasure { points: vec![point], weights: vec![1.0], exact_weights: Some(vec![Rational::from_int(1)]) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn exact_total_mass(&self) -> Option<Rational> {
        self.exact_weights.as_ref().map(|w| w.iter().fold(Rational::from_int(0), |a, b| a + b))
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Σ w·g(point), evaluated in parallel and summed pairwise.
    pub fn integrate<F>(&self, g: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let vals: Vec<Complex64> =
            self.points.par_iter().zip(&self.weights).map(|(p, w)| g(p) * *w).collect();
        pairwise_sum_complex(&vals)
    }

    /// CSV with columns x1..xn, weight.
    pub fn to_csv(&self) -> Result<String> {
        let n = self.points.first().map_or(0, Vec::len);
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        header.push("weight".into());
        w.write_record(&header)?;
        for (p, wt) in self.points.iter().zip(&self.weights) {
            let mut row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
            row.push(format!("{wt:?}"));
            w.write_record(&row)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
            .map_err(|e| Error::Io(e.to_string()))
    }
}

fn table_measure(table: ConnectionTable, point: impl Fn(&Partition) -> Vec<f64>) -> DiscreteMeasure {
    let mut points = Vec::with_capacity(table.entries.len());
    let mut weights = Vec::with_capacity(table.entries.len());
    let mut exact = Vec::with_capacity(table.entries.len());
    for (l, c) in table.entries {
        points.push(point(&l));
        weights.push(c.to_f64());
        exact.push(c);
    }
    DiscreteMeasure { points, weights, exact_weights: Some(exact) }
}

fn floor_partition(v: &[f64]) -> Result<Partition> {
    Partition::new(v.iter().map(|t| t.floor() as u32).collect())
}

/// μ_j = Σ_{λ⊆⌊jx⌋} c_{⌊jx⌋,λ} δ_{λ/j} with a = k₁ − 1/2, α = 1/k₂ and shift
/// h = m·k₂ (one table at the full shift; equal to m composed unit shifts).
pub fn discrete_sonine_measure(
    x: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    m: u32,
    cache: Option<&Path>,
) -> Result<DiscreteMeasure> {
    if j == 0 || m == 0 {
        return Err(Error::InvalidParameter("j and m must be at least 1".into()));
    }
    if x.len() != k.n {
        return Err(Error::InvalidParameter(format!("x must have {} entries", k.n)));
    }
    let x = chamber_point(x)?;
    let kappa = floor_partition(&x.iter().map(|v| v * j as f64).collect::<Vec<_>>())?;
    let h = k.k2.clone() * Rational::from_int(m as i64);
    let p = LaguerreParams::from_multiplicity(k)?;
    let table = connection_coefficients_cached(&kappa, &p, &h, cache)?;
    let jf = j as f64;
    Ok(table_measure(table, |l| l.parts().iter().map(|&p| p as f64 / jf).collect()))
}

/// A residual of a discrete approximation at resolution j.
#[derive(Clone, Debug, Serialize)]
pub struct DiscreteReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub j: u32,
    pub atoms: usize,
    pub degree_used: u32,
}

/// J^B_k(ξ, iy) as a function of ξ²/2 with ‖ξ²/2‖∞ ≤ `bound`.
fn frozen_bessel_b(k: &MultiplicityB, y: &[f64], bound: f64, policy: &TruncationPolicy) -> Result<FixedSeries> {
    let w: Vec<Complex64> = y.iter().map(|v| Complex64::new(-v * v / 2.0, 0.0)).collect();
    FixedSeries::new(Some(Complex64::new(k.mu(), 0.0)), &w, k.alpha(), bound, policy)
}

/// |J^B_{(k₁+mk₂,k₂)}(iy, 2√x) − Σ w·J^B_k(iy, 2√ξ)| over the atoms of μ_j.
pub fn verify_discrete_sonine(
    x: &[f64],
    y: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    m: u32,
    policy: &TruncationPolicy,
    cache: Option<&Path>,
) -> Result<DiscreteReport> {
    if y.len() != k.n {
        return Err(Error::InvalidParameter(format!("y must have {} entries", k.n)));
    }
    let measure = discrete_sonine_measure(x, k, j, m, cache)?;
    let kf = k.to_f64();
    let shifted = MultiplicityB::new(kf.n, kf.k1 + m as f64 * kf.k2, kf.k2)?;
    let root: Vec<f64> = x.iter().map(|v| 2.0 * v.sqrt()).collect();
    let lhs = bessel_b(&shifted, &imag_vec(y), &real_vec(&root), policy)?;
    let bound = 2.0 * x.iter().copied().fold(0.0, f64::max);
    let series = frozen_bessel_b(&kf, y, bound, policy)?;
    let rhs = measure.integrate(|p| series.eval(&p.iter().map(|v| 2.0 * v).collect::<Vec<_>>()));
    Ok(DiscreteReport {
        lhs: lhs.value.re,
        rhs: rhs.re,
        residual: (lhs.value - rhs).norm(),
        j,
        atoms: measure.len(),
        degree_used: lhs.degree_used.max(series.degree()),
    })
}

/// Connection table behind [`a_from_b_measure`].
fn a_from_b_table(
    x: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    resolution: u32,
    cache: Option<&Path>,
) -> Result<ConnectionTable> {
    if j == 0 || resolution == 0 {
        return Err(Error::InvalidParameter("j and resolution must be at least 1".into()));
    }
    if x.len() != k.n {
        return Err(Error::InvalidParameter(format!("x must have {} entries", k.n)));
    }
    let x: Vec<f64> = chamber_point(&x.iter().map(|v| v.abs()).collect::<Vec<_>>())?;
    let h = k.k2.clone() * Rational::from_int(j as i64);
    let kf = k.to_f64();
    let scale = resolution as f64 * (kf.k1 + j as f64 * kf.k2);
    let kappa = floor_partition(&x.iter().map(|v| scale * v * v).collect::<Vec<_>>())?;
    let p = LaguerreParams::from_multiplicity(k)?;
    connection_coefficients_cached(&kappa, &p, &h, cache)
}

/// μ_j for the type-A limit: κ = ⌊L(k₁+jk₂)xᵢ²⌋, shift h = j·k₂, atoms
/// ξ = 2√(λ/L). L is the Laguerre resolution used to pass from Laguerre
/// polynomials to Bessel functions at each level j.
pub fn a_from_b_measure(
    x: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    resolution: u32,
    cache: Option<&Path>,
) -> Result<DiscreteMeasure> {
    let table = a_from_b_table(x, k, j, resolution, cache)?;
    let l = resolution as f64;
    Ok(table_measure(table, |lam| lam.parts().iter().map(|&p| 2.0 * (p as f64 / l).sqrt()).collect()))
}

/// |J^A_{k₂}(x², −y²) − Σ w·J^B_k(ξ, iy)| over [`a_from_b_measure`].
pub fn a_from_b_residual(
    x: &[f64],
    y: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    resolution: u32,
    policy: &TruncationPolicy,
    cache: Option<&Path>,
) -> Result<DiscreteReport> {
    if y.len() != k.n {
        return Err(Error::InvalidParameter(format!("y must have {} entries", k.n)));
    }
    let measure = a_from_b_measure(x, k, j, resolution, cache)?;
    let kf = k.to_f64();
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let y2: Vec<f64> = y.iter().map(|v| -v * v).collect();
    let lhs = bessel_a(kf.k2, &real_vec(&x2), &real_vec(&y2), policy)?;
    let bound = measure.points.iter().flatten().map(|v| v * v / 2.0).fold(0.0, f64::max);
    let series = frozen_bessel_b(&kf, y, bound, policy)?;
    let rhs = measure.integrate(|p| series.eval(&p.iter().map(|v| v * v / 2.0).collect::<Vec<_>>()));
    Ok(DiscreteReport {
        lhs: lhs.value.re,
        rhs: rhs.re,
        residual: (lhs.value - rhs).norm(),
        j,
        atoms: measure.len(),
        degree_used: lhs.degree_used.max(series.degree()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondMoment {
    pub measured: f64,
    pub predicted: f64,
    pub j: u32,
    pub kappa: Partition,
    /// Σ w·|ξ|² evaluated in rational arithmetic before rounding.
    pub exact: String,
    /// Whether L(k₁+jk₂)xᵢ² are all integers (no floor error).
    pub lattice_point: bool,
}

/// Σ w·|ξ|² over [`a_from_b_measure`] against
/// 4(k₁+jk₂)(k₁+k₂(n−1)+1/2)/(k₁+k₂(n+j−1)+1/2)·Σxᵢ².
pub fn second_moment_check(
    x: &[f64],
    k: &MultiplicityB<Rational>,
    j: u32,
    resolution: u32,
    cache: Option<&Path>,
) -> Result<SecondMoment> {
    let table = a_from_b_table(x, k, j, resolution, cache)?;
    // |ξ|² = 4|λ|/L
    let four_over_l = Rational::new(4.into(), (resolution as i64).into());
    let exact = table
        .entries
        .iter()
        .fold(Rational::from_int(0), |acc, (l, c)| acc + c * Rational::from_int(l.weight() as i64))
        * four_over_l;
    let kf = k.to_f64();
    let n = kf.n as f64;
    let mu = kf.k1 + kf.k2 * (n - 1.0) + 0.5;
    let jf = j as f64;
    let sx: f64 = x.iter().map(|v| v * v).sum();
    let predicted = 4.0 * (kf.k1 + jf * kf.k2) * mu / (mu + jf * kf.k2) * sx;
    let scale = resolution as f64 * (kf.k1 + jf * kf.k2);
    let lattice_point = x.iter().all(|v| {
        let s = scale * v * v;
        (s - s.round()).abs() < 1e-9
    });
    Ok(SecondMoment {
        measured: exact.to_f64(),
        predicted,
        j,
        kappa: table.kappa,
        exact: exact.render(),
        lattice_point,
    })
}

/// |J^B_{(k₁,k₂)}(2√k₁·x, iy) − J^A_{k₂}(x², −y²)|.
pub fn b_to_a_residual(k1: f64, k2: f64, x: &[f64], y: &[f64], policy: &TruncationPolicy) -> Result<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::InvalidParameter("x and y must have the same length n ≥ 2".into()));
    }
    let k = MultiplicityB::new(n, k1, k2)?;
    let scaled: Vec<f64> = x.iter().map(|v| 2.0 * k1.sqrt() * v).collect();
    let b = bessel_b(&k, &real_vec(&scaled), &imag_vec(y), policy)?;
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let y2: Vec<f64> = y.iter().map(|v| -v * v).collect();
    let a = bessel_a(k2, &real_vec(&x2), &real_vec(&y2), policy)?;
    Ok((b.value - a.value).norm())
}
