//! Ordered integer partitions (compositions) and the exact combinatorial
//! coefficients built on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// An ordered partition `μ = (μ_1, …, μ_k)` of `total`, every part ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("a composition has at least one part"));
        }
        if parts.contains(&0) {
            return Err(invalid(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts, `|μ|`.
    pub fn size(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for Composition {
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

/// Lexicographic generator over the compositions of `total`.
///
/// Only the current composition is held; the successor of `(…, a, b)` is
/// `(…, a + 1)` followed by `b − 1` ones.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(total: u32) -> Result<Self> {
        if total == 0 {
            return Err(invalid("compositions are defined for m >= 1"));
        }
        Ok(Compositions { current: Some(vec![1; total as usize]) })
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.current.take()?;
        if current.len() > 1 {
            let mut succ = current.clone();
            let last = succ.pop().expect("len > 1");
            *succ.last_mut().expect("len > 0") += 1;
            succ.extend(std::iter::repeat_n(1, last as usize - 1));
            self.current = Some(succ);
        }
        Some(Composition { parts: current })
    }
}

/// All `2^(m−1)` compositions of `m` in lexicographic order.
pub fn enumerate_compositions(m: u32) -> Result<Vec<Composition>> {
    Ok(Compositions::new(m)?.collect())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `total! / Π parts_i!`, built from a chain of binomials.
pub fn multinomial(total: u64, parts: &[u64]) -> Result<BigInt> {
    let sum: u64 = parts.iter().sum();
    if sum != total {
        return Err(invalid(format!("parts {parts:?} sum to {sum}, not {total}")));
    }
    let mut remaining = total;
    let mut acc = BigInt::one();
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}
