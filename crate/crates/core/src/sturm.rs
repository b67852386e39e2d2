//! Exact real-root counting with Sturm chains and bisection isolation.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{invalid, Result};
use crate::polynomial::IntPolynomial;
use crate::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    /// The root is simple.
    Simple,
    /// The root may be repeated; only its distinctness is certified.
    Unresolved,
}

/// An open interval `(lo, hi)` holding exactly one distinct root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: ExactRational,
    pub hi: ExactRational,
    pub multiplicity: Multiplicity,
}

impl RootInterval {
    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / ExactRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        *x > self.lo && *x < self.hi
    }

    /// The image under `p ↦ 1 − p`.
    pub fn reflect(&self) -> RootInterval {
        let one = ExactRational::one();
        RootInterval { lo: &one - &self.hi, hi: &one - &self.lo, multiplicity: self.multiplicity }
    }
}

/// Sturm chain of the square-free part, built from primitive pseudo-remainders.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(poly: &IntPolynomial) -> Result<Self> {
        if poly.is_zero() {
            return Err(invalid("the zero polynomial has no Sturm chain"));
        }
        let base = poly.square_free_part();
        let mut chain = vec![base.clone()];
        let mut prev = base.clone();
        let mut cur = base.derivative().primitive_keep_sign();
        while !cur.is_zero() {
            let rem = prev.pseudo_rem(&cur);
            let next = (-&rem).primitive_keep_sign();
            chain.push(cur.clone());
            prev = cur;
            cur = next;
        }
        Ok(SturmChain { chain })
    }

    pub fn base(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Sign variations of the chain evaluated at `x`, zeros skipped.
    pub fn variations(&self, x: &ExactRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &ExactRational, hi: &ExactRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// The half of `interval` that keeps its root.
    pub fn halve(&self, interval: &RootInterval) -> RootInterval {
        let c = split_point(self.base(), &interval.lo, &interval.hi);
        let mut out = interval.clone();
        if self.count_open(&interval.lo, &c) == 1 {
            out.hi = c;
        } else {
            out.lo = c;
        }
        out
    }

    /// Distinct roots in the open interval `(lo, hi)`.
    pub fn count_open(&self, lo: &ExactRational, hi: &ExactRational) -> usize {
        let closed_right = self.count(lo, hi);
        if self.base().sign_at(hi) == 0 {
            closed_right - 1
        } else {
            closed_right
        }
    }
}

/// Number of distinct real roots of `poly` in `(lo, hi]`.
pub fn sturm_root_count(poly: &IntPolynomial, lo: &ExactRational, hi: &ExactRational) -> Result<usize> {
    if lo >= hi {
        return Err(invalid("sturm_root_count needs lo < hi"));
    }
    Ok(SturmChain::new(poly)?.count(lo, hi))
}

/// A split point of `(lo, hi)` that is not a root of `poly`, as close to the
/// midpoint as the dyadic grid allows.
fn split_point(poly: &IntPolynomial, lo: &ExactRational, hi: &ExactRational) -> ExactRational {
    let two = ExactRational::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    if poly.sign_at(&mid) != 0 {
        return mid;
    }
    let mut offset = (hi - lo) / ExactRational::from_integer(BigInt::from(8));
    loop {
        for cand in [&mid + &offset, &mid - &offset] {
            if poly.sign_at(&cand) != 0 {
                return cand;
            }
        }
        offset /= &two;
    }
}

/// Disjoint intervals of width at most `width`, each holding exactly one
/// distinct root of `poly` in the open interval `(lo, hi)`, in increasing order.
pub fn isolate_roots(
    poly: &IntPolynomial,
    lo: &ExactRational,
    hi: &ExactRational,
    width: &ExactRational,
) -> Result<Vec<RootInterval>> {
    if !width.is_positive() {
        return Err(invalid("isolation width must be positive"));
    }
    if lo >= hi {
        return Err(invalid("isolate_roots needs lo < hi"));
    }
    let chain = SturmChain::new(poly)?;
    let repeated = poly.gcd(&poly.derivative());
    let repeated_chain = if repeated.degree().unwrap_or(0) > 0 {
        Some(SturmChain::new(&repeated)?)
    } else {
        None
    };

    let mut out = Vec::new();
    // depth-first, right half pushed first so output comes out ascending
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count_open(lo, hi))];
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && &b - &a <= *width {
            let multiplicity = match &repeated_chain {
                Some(rc) if rc.count_open(&a, &b) > 0 => Multiplicity::Unresolved,
                _ => Multiplicity::Simple,
            };
            out.push(RootInterval { lo: a, hi: b, multiplicity });
            continue;
        }
        let c = split_point(chain.base(), &a, &b);
        let left = chain.count_open(&a, &c);
        let right = count - left;
        stack.push((c.clone(), b, right));
        stack.push((a, c, left));
    }
    Ok(out)
}

/// Halves `interval` around its root until it is no wider than `width`.
pub fn refine(poly: &IntPolynomial, interval: &RootInterval, width: &ExactRational) -> RootInterval {
    let chain = SturmChain::new(poly).expect("nonzero");
    let mut cur = interval.clone();
    while cur.width() > *width {
        cur = chain.halve(&cur);
    }
    cur
}
