//! Double-precision Jack tables, one weight shell at a time.
//!
//! Shells are memoized per `(n, α, m)` behind a read-write lock: lookups take
//! the shared lock, a miss computes outside any lock and inserts under the
//! exclusive one. Two racing inserts produce identical values.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;

use super::{c_over_p, jack_p_dense, shell_index};
use crate::partitions::{enumerate_partitions, Partition};

/// All C_λ^α with |λ| = m in the monomial basis, as doubles.
#[derive(Debug)]
pub struct JackShell {
    pub n: usize,
    pub degree: u32,
    /// Shell partitions, reverse-lexicographic.
    pub parts: Vec<Partition>,
    /// Position of each partition in `parts`.
    pub index: HashMap<Vec<u32>, usize>,
    /// Distinct rearrangements of each partition (monomial support).
    pub perms: Vec<Vec<Vec<u32>>>,
    /// For each λ: sparse `(μ index, coefficient of m_μ in C_λ)`.
    pub coeffs: Vec<Vec<(usize, f64)>>,
    /// C_λ(𝟏) from the monomial expansion.
    pub at_ones: Vec<f64>,
}

type ShellKey = (usize, u64, u32);

static SHELLS: LazyLock<RwLock<HashMap<ShellKey, Arc<JackShell>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Memoized shell of weight `m` for `n` variables at index `alpha > 0`.
pub fn jack_shell(n: usize, alpha: f64, m: u32) -> Arc<JackShell> {
    assert!(alpha > 0.0 && n >= 1);
    let key = (n, alpha.to_bits(), m);
    if let Some(s) = SHELLS.read().expect("shell cache poisoned").get(&key) {
        return s.clone();
    }
    let shell = Arc::new(build_shell(n, alpha, m));
    let mut w = SHELLS.write().expect("shell cache poisoned");
    w.entry(key).or_insert(shell).clone()
}

fn build_shell(n: usize, alpha: f64, m: u32) -> JackShell {
    let parts = enumerate_partitions(m, n);
    let index = shell_index(&parts);
    let perms: Vec<_> = parts.iter().map(|p| p.distinct_permutations()).collect();
    let mut coeffs = Vec::with_capacity(parts.len());
    let mut at_ones = Vec::with_capacity(parts.len());
    for (li, lambda) in parts.iter().enumerate() {
        let d = jack_p_dense(&parts, &index, li, &alpha);
        let f = c_over_p(lambda, &alpha).expect("alpha checked positive");
        let row: Vec<(usize, f64)> = d
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| (k, c * f))
            .collect();
        at_ones.push(row.iter().map(|&(k, c)| c * perms[k].len() as f64).sum());
        coeffs.push(row);
    }
    JackShell { n, degree: m, parts, index, perms, coeffs, at_ones }
}

/// Table of powers z_i^p, grown on demand.
#[derive(Clone, Debug)]
pub struct Powers {
    table: Vec<Vec<Complex64>>,
}

impl Powers {
    pub fn new(z: &[Complex64]) -> Self {
        Powers { table: z.iter().map(|&zi| vec![Complex64::new(1.0, 0.0), zi]).collect() }
    }

    pub fn ensure(&mut self, degree: u32) {
        for row in &mut self.table {
            while row.len() <= degree as usize {
                let next = row[row.len() - 1] * row[1];
                row.push(next);
            }
        }
    }

    pub fn get(&self, i: usize, p: u32) -> Complex64 {
        self.table[i][p as usize]
    }
}

impl JackShell {
    pub fn position(&self, lambda: &Partition) -> Option<usize> {
        self.index.get(lambda.parts()).copied()
    }

    /// m_μ(z) for every μ in the shell.
    pub fn monomials(&self, pw: &mut Powers) -> Vec<Complex64> {
        pw.ensure(self.degree);
        self.perms
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|beta| {
                        beta.iter()
                            .enumerate()
                            .fold(Complex64::new(1.0, 0.0), |acc, (i, &b)| acc * pw.get(i, b))
                    })
                    .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
            })
            .collect()
    }

    /// C_λ(z) for every λ in the shell, given the monomial values.
    pub fn jack_values(&self, monomials: &[Complex64]) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Complex64::new(0.0, 0.0), |acc, &(k, c)| acc + monomials[k] * c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_sum_to_power_sums() {
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.7, 0.2), Complex64::new(0.5, 0.0)];
        let total: Complex64 = z.iter().sum();
        let mut pw = Powers::new(&z);
        for m in 0..8 {
            let sh = jack_shell(3, 0.7, m);
            let mono = sh.monomials(&mut pw);
            let s: Complex64 = sh.jack_values(&mono).iter().sum();
            assert!((s - total.powu(m)).norm() < 1e-12);
            let ones: f64 = sh.at_ones.iter().sum();
            assert!((ones - 3f64.powi(m as i32)).abs() < 1e-9 * ones);
        }
    }

    #[test]
    fn cached_shell_is_shared() {
        let a = jack_shell(2, 1.25, 5);
        let b = jack_shell(2, 1.25, 5);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
