//! Partitions of bounded length.
//!
//! A [`Partition`] always carries its length bound `n` as explicit zero padding,
//! so containment and componentwise arithmetic never need re-alignment.
//! Enumeration is reverse-lexicographic (largest first), which is a linear
//! extension of the dominance order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition(Vec<u32>);

/// Arm and leg lengths of one cell `(row, col)`, both 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CellStats {
    pub row: usize,
    pub col: u32,
    pub arm: u32,
    pub leg: u32,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Pads (or checks) the parts to exactly `n` entries.
    pub fn with_len(parts: &[u32], n: usize) -> Result<Self> {
        let mut v = parts.to_vec();
        if v.len() > n {
            if v[n..].iter().any(|&p| p != 0) {
                return Err(Error::InvalidParameter(format!(
                    "partition {parts:?} has more than {n} nonzero parts"
                )));
            }
            v.truncate(n);
        }
        v.resize(n, 0);
        Partition::new(v)
    }

    pub fn zero(n: usize) -> Self {
        Partition(vec![0; n])
    }

    /// Number of slots (the length bound n).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.iter().take_while(|&&p| p > 0).count()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// The conjugate partition, padded to `max(λ₁, 1)` slots.
    pub fn conjugate(&self) -> Partition {
        let width = self.get(0) as usize;
        let conj = (0..width)
            .map(|j| self.0.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect::<Vec<_>>();
        if conj.is_empty() {
            Partition(vec![0])
        } else {
            Partition(conj)
        }
    }

    /// Conjugate padded to `n` slots; fails if λ₁ > n.
    pub fn conjugate_padded(&self, n: usize) -> Result<Partition> {
        Partition::with_len(self.conjugate().parts(), n)
    }

    /// `true` iff λᵢ ≤ κᵢ for every i (missing entries count as zero).
    pub fn contains(&self, lambda: &Partition) -> bool {
        let m = self.len().max(lambda.len());
        (0..m).all(|i| lambda.get(i) <= self.get(i))
    }

    /// Dominance order on partitions of equal weight.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let m = self.len().max(other.len());
        let (mut s, mut t) = (0u32, 0u32);
        for i in 0..m {
            s += self.get(i);
            t += other.get(i);
            if s < t {
                return false;
            }
        }
        true
    }

    /// λ + eᵢ, if it is still a partition.
    pub fn add_box(&self, i: usize) -> Option<Partition> {
        if i >= self.len() || (i > 0 && self.0[i - 1] == self.0[i]) {
            return None;
        }
        let mut v = self.0.clone();
        v[i] += 1;
        Some(Partition(v))
    }

    /// λ − eᵢ, if it is still a partition.
    pub fn remove_box(&self, i: usize) -> Option<Partition> {
        if i >= self.len() || self.0[i] == 0 || (i + 1 < self.len() && self.0[i + 1] == self.0[i]) {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Partition(v))
    }

    /// Cells in row-major order with their arm and leg lengths.
    pub fn cells(&self) -> Vec<CellStats> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight() as usize);
        for (i, &row) in self.0.iter().enumerate() {
            for j in 1..=row {
                out.push(CellStats {
                    row: i + 1,
                    col: j,
                    arm: row - j,
                    leg: conj.get(j as usize - 1) - (i as u32 + 1),
                });
            }
        }
        out
    }

    /// Number of distinct permutations of the parts (orbit size of the monomial).
    pub fn orbit_size(&self) -> u64 {
        let mut count = 1u64;
        let mut denom = 1u64;
        let mut run = 0u64;
        for (i, _) in self.0.iter().enumerate() {
            count *= i as u64 + 1;
            if i > 0 && self.0[i] == self.0[i - 1] {
                run += 1;
            } else {
                run = 1;
            }
            denom *= run;
            let g = gcd(count, denom);
            count /= g;
            denom /= g;
        }
        count / denom
    }

    /// All distinct rearrangements of the parts, lexicographically ascending.
    pub fn distinct_permutations(&self) -> Vec<Vec<u32>> {
        let mut cur = self.0.clone();
        cur.sort_unstable();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }

    /// Sort arbitrary nonnegative entries into a partition.
    pub fn from_unsorted(mut v: Vec<u32>) -> Partition {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All partitions of weight `m` with at most `n` parts, reverse-lexicographic.
pub fn enumerate_partitions(m: u32, n: usize) -> Vec<Partition> {
    assert!(n >= 1, "length bound must be at least 1");
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(m, m, 0, &mut cur, &mut out);
    out
}

fn fill(rest: u32, cap: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if i == cur.len() {
        if rest == 0 {
            out.push(Partition(cur.clone()));
        }
        return;
    }
    let slots = (cur.len() - i) as u32;
    // the remaining slots must be able to absorb `rest` with parts ≤ first
    let lo = rest.div_ceil(slots);
    let hi = rest.min(cap);
    if lo > hi {
        return;
    }
    for first in (lo..=hi).rev() {
        cur[i] = first;
        fill(rest - first, first, i + 1, cur, out);
    }
    cur[i] = 0;
}

/// All partitions of weight ≤ `max_weight`, grouped by weight.
pub fn partitions_up_to(max_weight: u32, n: usize) -> Vec<Vec<Partition>> {
    (0..=max_weight).map(|m| enumerate_partitions(m, n)).collect()
}

/// c′_λ = ∏ over cells (α(arm+1) + leg); 1 for the empty partition.
pub fn hook_cprime<T: Scalar>(lambda: &Partition, alpha: &T) -> Result<T> {
    if *alpha <= T::zero() {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    Ok(lambda.cells().iter().fold(T::one(), |acc, c| {
        acc * (alpha.clone() * T::from_int(c.arm as i64 + 1) + T::from_int(c.leg as i64))
    }))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        f.write_str(&s)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Ok(Partition(vec![]));
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition entry {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(0, 3), vec![p(&[0, 0, 0])]);
        assert_eq!(enumerate_partitions(3, 2), vec![p(&[3, 0]), p(&[2, 1])]);
        assert_eq!(enumerate_partitions(4, 1), vec![p(&[4])]);
        let five = enumerate_partitions(5, 3);
        assert_eq!(five.len(), 5);
        assert!(five.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn containment() {
        assert!(p(&[2, 1]).contains(&p(&[1, 1])));
        assert!(!p(&[2, 1]).contains(&p(&[2, 2])));
        assert!(p(&[2, 1]).contains(&p(&[2, 1])));
        assert!(p(&[2, 1, 0]).contains(&p(&[2])));
    }

    #[test]
    fn hooks() {
        let a = rat(3, 7);
        assert_eq!(hook_cprime(&p(&[1]), &a).unwrap(), a.clone());
        assert_eq!(hook_cprime(&p(&[2]), &a).unwrap(), rat(2, 1) * &a * &a);
        assert_eq!(hook_cprime(&p(&[1, 1]), &a).unwrap(), &a * (&a + rat(1, 1)));
        assert_eq!(hook_cprime(&p(&[0, 0]), &a).unwrap(), rat(1, 1));
        assert!(hook_cprime(&p(&[1]), &Rational::from_integer(0.into())).is_err());
    }

    #[test]
    fn arms_and_legs() {
        let cells = p(&[3, 1]).cells();
        let first = cells[0];
        assert_eq!((first.row, first.col, first.arm, first.leg), (1, 1, 2, 1));
        let last = cells[3];
        assert_eq!((last.row, last.col, last.arm, last.leg), (2, 1, 0, 0));
    }

    #[test]
    fn boxes_and_orbits() {
        assert_eq!(p(&[2, 2]).add_box(1), None);
        assert_eq!(p(&[2, 1]).add_box(1), Some(p(&[2, 2])));
        assert_eq!(p(&[2, 2]).remove_box(0), None);
        assert_eq!(p(&[2, 2]).remove_box(1), Some(p(&[2, 1])));
        assert_eq!(p(&[2, 1, 0]).orbit_size(), 6);
        assert_eq!(p(&[1, 1, 0]).orbit_size(), 3);
        assert_eq!(p(&[0, 0]).orbit_size(), 1);
        assert_eq!(p(&[2, 1, 1]).distinct_permutations().len(), 3);
    }

    #[test]
    fn string_round_trip() {
        let l = p(&[2, 1, 0]);
        assert_eq!(l.to_string(), "2,1,0");
        assert_eq!("2,1,0".parse::<Partition>().unwrap(), l);
        assert!("1,2".parse::<Partition>().is_err());
        assert_eq!(serde_json::to_string(&l).unwrap(), "\"2,1,0\"");
    }
}
