//! Generalized binomial coefficients (κ choose λ)_α.
//!
//! The coefficients are the matrix of the shift x ↦ x + 𝟏 in the basis
//! Ĉ_λ = C_λ/C_λ(𝟏). That shift is exp(E) with E = Σ ∂ᵢ, and E lowers the
//! degree by one: E Ĉ_κ = Σᵢ b(κ, κ−eᵢ) Ĉ_{κ−eᵢ}. Iterating E therefore fills
//! the whole row one weight shell at a time:
//!
//! (|κ|−|λ|) (κ choose λ) = Σᵢ (κ choose λ+eᵢ) b(λ+eᵢ, λ).
//!
//! [`binomial_by_shift`] is the literal route: expand Ĉ_κ(x+𝟏) in monomials and
//! peel off Ĉ_λ terms top-down. It is exponential in the weight and serves as
//! the independent check of the fast route.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::partitions::{partitions_up_to, Partition};
use crate::scalar::{Rational, Scalar};

use super::jack_c_hat;

/// The interval {λ : floor ⊆ λ ⊆ κ} of the containment order.
#[derive(Clone, Debug)]
pub struct SubLattice {
    kappa: Partition,
    nodes: Vec<Partition>,
    shells: Vec<Range<usize>>,
    up: Vec<Vec<(usize, usize)>>,
    strides: Vec<usize>,
    slots: Vec<u32>,
}

const NO_NODE: u32 = u32::MAX;

impl SubLattice {
    /// All sub-partitions of κ.
    pub fn new(kappa: &Partition) -> Self {
        Self::interval(kappa, &Partition::zero(kappa.len())).expect("zero is contained in every partition")
    }

    /// Partitions between `floor` and `kappa`.
    pub fn interval(kappa: &Partition, floor: &Partition) -> Result<Self> {
        let n = kappa.len();
        let floor = Partition::with_len(floor.parts(), n)?;
        if !kappa.contains(&floor) {
            return Err(Error::NotContained { kappa: kappa.to_string(), lambda: floor.to_string() });
        }
        let mut nodes = Vec::new();
        let mut cur = vec![0u32; n];
        collect(kappa.parts(), floor.parts(), 0, u32::MAX, &mut cur, &mut nodes);
        nodes.sort_unstable_by(|a, b| b.weight().cmp(&a.weight()).then_with(|| b.cmp(a)));

        let total = kappa.weight() as usize;
        let mut shells = vec![0..0; total + 1];
        let mut i = 0;
        while i < nodes.len() {
            let w = nodes[i].weight() as usize;
            let start = i;
            while i < nodes.len() && nodes[i].weight() as usize == w {
                i += 1;
            }
            shells[w] = start..i;
        }

        let mut strides = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (kappa.get(j + 1) as usize + 1);
        }
        let size = if n == 0 { 1 } else { strides[0] * (kappa.get(0) as usize + 1) };
        let mut slots = vec![NO_NODE; size];
        for (k, node) in nodes.iter().enumerate() {
            slots[slot_of(&strides, node.parts())] = k as u32;
        }

        let mut lat = SubLattice { kappa: kappa.clone(), nodes, shells, up: Vec::new(), strides, slots };
        lat.up = (0..lat.nodes.len())
            .map(|k| {
                let node = &lat.nodes[k];
                (0..n)
                    .filter_map(|i| node.add_box(i).and_then(|t| lat.index_of(&t)).map(|t| (t, i)))
                    .collect()
            })
            .collect();
        Ok(lat)
    }

    pub fn kappa(&self) -> &Partition {
        &self.kappa
    }

    pub fn nodes(&self) -> &[Partition] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        if p.len() != self.kappa.len() || !self.kappa.contains(p) {
            return None;
        }
        match self.slots[slot_of(&self.strides, p.parts())] {
            NO_NODE => None,
            k => Some(k as usize),
        }
    }

    /// Node indices of weight `w`.
    pub fn shell(&self, w: u32) -> Range<usize> {
        self.shells.get(w as usize).cloned().unwrap_or(0..0)
    }

    /// `(index of λ+eᵢ, i)` for each node λ+eᵢ inside the lattice.
    pub fn up(&self, k: usize) -> &[(usize, usize)] {
        &self.up[k]
    }

    /// b(λ+eᵢ, λ) attached to the upward edges.
    pub fn up_coefficients<T: Scalar>(&self, alpha: &T) -> Vec<Vec<(usize, T)>> {
        self.up
            .iter()
            .map(|edges| {
                edges
                    .iter()
                    .map(|&(t, i)| (t, contiguous_binomial(&self.nodes[t], i, alpha)))
                    .collect()
            })
            .collect()
    }
}

fn slot_of(strides: &[usize], parts: &[u32]) -> usize {
    parts.iter().zip(strides).map(|(&p, &s)| p as usize * s).sum()
}

fn collect(kappa: &[u32], floor: &[u32], i: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if i == kappa.len() {
        out.push(Partition::new(cur.clone()).expect("built decreasing"));
        return;
    }
    let hi = kappa[i].min(cap);
    if floor[i] > hi {
        return;
    }
    for v in (floor[i]..=hi).rev() {
        cur[i] = v;
        collect(kappa, floor, i + 1, v, cur, out);
    }
}

/// b(τ, τ−eᵢ): the coefficient of Ĉ_{τ−eᵢ} in E Ĉ_τ. Zero when τ−eᵢ is not a partition.
///
/// With ℓⱼ = τⱼ − (j+1)/α (0-based j):
/// b = (τᵢ + (n−1−i)/α) ∏_{j≠i} (ℓᵢ − ℓⱼ − 1/α)/(ℓᵢ − ℓⱼ).
pub fn contiguous_binomial<T: Scalar>(tau: &Partition, i: usize, alpha: &T) -> T {
    if tau.remove_box(i).is_none() {
        return T::zero();
    }
    let n = tau.len();
    let inv = T::one() / alpha.clone();
    let ell = |j: usize| T::from_int(tau.get(j) as i64) - T::from_int(j as i64 + 1) * inv.clone();
    let li = ell(i);
    let mut v = T::from_int(tau.get(i) as i64) + T::from_int((n - 1 - i) as i64) * inv.clone();
    for j in (0..n).filter(|&j| j != i) {
        let d = li.clone() - ell(j);
        v = v * (d.clone() - inv.clone()) / d;
    }
    v
}

/// Row (κ choose ·) over a lattice whose top node is κ.
pub(crate) fn binomial_row<T: Scalar>(lat: &SubLattice, alpha: &T) -> Vec<T> {
    let coef = lat.up_coefficients(alpha);
    let k = lat.kappa.weight();
    let mut row = vec![T::zero(); lat.len()];
    row[0] = T::one();
    for w in (0..k).rev() {
        let inv = T::one() / T::from_int((k - w) as i64);
        for idx in lat.shell(w) {
            let s = coef[idx].iter().fold(T::zero(), |acc, (t, c)| acc + row[*t].clone() * c.clone());
            row[idx] = s * inv.clone();
        }
    }
    row
}

/// (κ choose λ) / (|κ| choose |λ|) for every λ ⊆ κ, in double precision.
///
/// Each weight shell of this row sums to one and every entry is nonnegative,
/// so the recursion cannot overflow even for very large κ.
pub fn scaled_binomial_row(lat: &SubLattice, alpha: f64) -> Vec<f64> {
    let coef = lat.up_coefficients(&alpha);
    let k = lat.kappa.weight();
    let mut row = vec![0.0; lat.len()];
    row[0] = 1.0;
    for w in (0..k).rev() {
        for idx in lat.shell(w) {
            let s: f64 = coef[idx].iter().map(|(t, c)| row[*t] * c).sum();
            row[idx] = s / (w + 1) as f64;
        }
    }
    row
}

/// All (κ choose λ), λ ⊆ κ, in lattice order (weight descending).
pub fn binomial_table<T: Scalar>(kappa: &Partition, alpha: &T) -> Result<Vec<(Partition, T)>> {
    if *alpha <= T::zero() {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    let lat = SubLattice::new(kappa);
    let row = binomial_row(&lat, alpha);
    Ok(lat.nodes.iter().cloned().zip(row).collect())
}

/// Exact (κ choose λ)_α.
pub fn binomial(kappa: &Partition, lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    if *alpha <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    let n = kappa.len().max(lambda.len());
    let kappa = Partition::with_len(kappa.parts(), n)?;
    let lambda = Partition::with_len(lambda.parts(), n)?;
    if !kappa.contains(&lambda) {
        return Err(Error::NotContained { kappa: kappa.to_string(), lambda: lambda.to_string() });
    }
    let lat = SubLattice::interval(&kappa, &lambda)?;
    let row = binomial_row(&lat, alpha);
    Ok(row[lat.index_of(&lambda).expect("floor is a node")].clone())
}

/// Literal route: expand Ĉ_κ(x+𝟏) in monomials, then solve the
/// degree-triangular change of basis back to the Ĉ_λ.
pub fn binomial_by_shift(kappa: &Partition, alpha: &Rational) -> Result<BTreeMap<Partition, Rational>> {
    let n = kappa.len();
    let k = kappa.weight();
    let top = jack_c_hat(kappa, alpha, n)?;
    let zero = || Rational::from_integer(0.into());

    // coefficient of x^μ in Ĉ_κ(x+𝟏), μ sorted: Σ_ν c_ν Σ_β ∏ C(β_i, μ_i)
    let shells = partitions_up_to(k, n);
    let mut residual: BTreeMap<Partition, Rational> = BTreeMap::new();
    let perms: Vec<(Vec<Vec<u32>>, Rational)> =
        top.terms().map(|(nu, c)| (nu.distinct_permutations(), c.clone())).collect();
    for mu in shells.iter().flatten() {
        let mut s = zero();
        for (betas, c) in &perms {
            for beta in betas {
                let mut prod: u64 = 1;
                for (b, m) in beta.iter().zip(mu.parts()) {
                    if b < m {
                        prod = 0;
                        break;
                    }
                    prod *= binom_u64(*b, *m);
                }
                if prod != 0 {
                    s += c * Rational::from_integer(prod.into());
                }
            }
        }
        if s != zero() {
            residual.insert(mu.clone(), s);
        }
    }

    let mut out = BTreeMap::new();
    for mu in shells.iter().rev().flatten() {
        let Some(r) = residual.get(mu).cloned() else { continue };
        if r == zero() {
            continue;
        }
        let chat = jack_c_hat(mu, alpha, n)?;
        let lead = chat.coeff(mu);
        let co = r / lead;
        for (nu, c) in chat.terms() {
            let e = residual.entry(nu.clone()).or_insert_with(zero);
            *e -= &co * c;
        }
        out.insert(mu.clone(), co);
    }
    if residual.values().any(|v| *v != zero()) {
        return Err(Error::Singular("shifted expansion did not reduce to zero".into()));
    }
    for lambda in SubLattice::new(kappa).nodes() {
        out.entry(lambda.clone()).or_insert_with(zero);
    }
    if let Some(bad) = out.iter().find(|(l, v)| **v != zero() && !kappa.contains(l)) {
        return Err(Error::Singular(format!("coefficient outside the diagram of κ at {}", bad.0)));
    }
    Ok(out)
}

fn binom_u64(n: u32, k: u32) -> u64 {
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
