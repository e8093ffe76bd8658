//! Integer partitions and their combinatorial weights.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigUint;
use num::One;

/// A partition of `d`: a nonincreasing tuple of positive parts summing to `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, `|pi|`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Map from part value `i` to its multiplicity `m_i`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `d` in reverse-lexicographic order, starting at `(d)`
/// and ending at `(1,..,1)`. `d = 0` yields the single empty partition.
pub fn enumerate_partitions(d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(d, d, &mut current, &mut out);
    out
}

fn fill(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        current.push(part);
        fill(rest - part, part, current, out);
        current.pop();
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `y_pi = prod_i (i!)^{m_i} m_i!`, the denominator of `kappa_pi` in the
/// partition expansion of the norm.
pub fn y_of(p: &Partition) -> BigUint {
    p.multiplicities()
        .into_iter()
        .fold(BigUint::one(), |acc, (i, m)| {
            acc * num::pow(factorial(i), m) * factorial(m)
        })
}

/// `z_pi = prod_i i^{m_i} m_i!`, the size of the centralizer of a
/// permutation with cycle type `pi`.
pub fn z_of(p: &Partition) -> BigUint {
    p.multiplicities()
        .into_iter()
        .fold(BigUint::one(), |acc, (i, m)| {
            acc * num::pow(BigUint::from(i), m) * factorial(m)
        })
}

/// `c_pi = alpha! / ((alpha - |pi|)! prod m_i!)`, or zero when `pi` has more
/// than `alpha` parts.
pub fn hunter_coefficient(p: &Partition, alpha: usize) -> BigUint {
    if p.len() > alpha {
        return BigUint::default();
    }
    let denom = p
        .multiplicities()
        .values()
        .fold(factorial(alpha - p.len()), |acc, &m| acc * factorial(m));
    factorial(alpha) / denom
}
