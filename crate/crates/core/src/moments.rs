//! Even central moments `E S_n^{2m}(p)` of the centered binomial sum
//! `S_n(p) = Σ_j (X_j − p)`.
//!
//! Several independent routes are provided and kept in agreement by the
//! test-suite:
//!
//! * sum over compositions of `m` (only `p = 1/2`),
//! * weighted binomial sum of `(2k − n)^{2m}` (only `p = 1/2`, the default),
//! * a linear recurrence in `m` (see [`crate::recurrence`]),
//! * the definition-level sum over the number of successes (any `p`),
//! * a product expansion over compositions of `2m` (any `p`),
//! * brute-force enumeration of all `2^n` outcome tuples.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::composition::{binomial, factorial, multinomial, Compositions};
use crate::error::{invalid, Error, Result};
use crate::polynomial::IntPolynomial;
use crate::recurrence;
use crate::scalar::{is_unit_interval, Scalar};
use crate::ExactRational;

/// Largest `n` accepted by [`moment_bruteforce`].
pub const BRUTE_FORCE_CAP: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentMethod {
    Composition,
    BinomSum,
    Recurrence,
    BruteForce,
    General,
}

impl MomentMethod {
    pub const ALL: [MomentMethod; 5] = [
        MomentMethod::Composition,
        MomentMethod::BinomSum,
        MomentMethod::Recurrence,
        MomentMethod::BruteForce,
        MomentMethod::General,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MomentMethod::Composition => "composition",
            MomentMethod::BinomSum => "binomsum",
            MomentMethod::Recurrence => "recurrence",
            MomentMethod::BruteForce => "bruteforce",
            MomentMethod::General => "general",
        }
    }

    /// Whether the route can evaluate at `p ≠ 1/2`.
    pub fn supports_general_p(self) -> bool {
        matches!(self, MomentMethod::BruteForce | MomentMethod::General)
    }
}

impl fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MomentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MomentMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown moment method {s:?}")))
    }
}

/// An exact moment together with the inputs and route that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentValue {
    pub n: u64,
    pub m: u32,
    pub p: ExactRational,
    pub value: ExactRational,
    pub method: MomentMethod,
}

fn check_nm(n: u64, m: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    Ok(())
}

fn check_p<T: Scalar>(p: &T) -> Result<()> {
    if !is_unit_interval(p) {
        return Err(invalid(format!("p must lie in [0, 1], got {p:?}")));
    }
    Ok(())
}

fn half() -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::from(2))
}

fn value(n: u64, m: u32, p: ExactRational, value: ExactRational, method: MomentMethod) -> MomentValue {
    MomentValue { n, m, p, value, method }
}

// ---------------------------------------------------------------------------
// term-level pieces

/// `f(μ_i, p) = p q^{μ_i} + q (−p)^{μ_i}` with `q = 1 − p`.
pub fn f_term<T: Scalar>(mu_i: u32, p: &T) -> Result<T> {
    check_p(p)?;
    Ok(f_term_unchecked(mu_i, p))
}

fn f_term_unchecked<T: Scalar>(mu_i: u32, p: &T) -> T {
    let q = T::one() - p.clone();
    let e = u64::from(mu_i);
    p.clone() * q.powu(e) + q * (-p.clone()).powu(e)
}

/// Derivative of [`f_term`] in the closed form
/// `q^μ (1 − μ p/q) + (−1)^{μ+1} p^μ (1 − μ q/p)`, which needs `0 < p < 1`.
pub fn f_term_derivative<T: Scalar>(mu_i: u32, p: &T) -> Result<T> {
    if !(*p > T::zero() && *p < T::one()) {
        return Err(invalid(format!(
            "the closed-form derivative needs 0 < p < 1, got {p:?}; use the polynomial form"
        )));
    }
    let q = T::one() - p.clone();
    let mu = T::from_u64(u64::from(mu_i));
    let e = u64::from(mu_i);
    let first = q.powu(e) * (T::one() - p.clone() / q.clone() * mu.clone());
    let sign = if mu_i % 2 == 1 { T::one() } else { -T::one() };
    let second = sign * p.powu(e) * (T::one() - q / p.clone() * mu);
    Ok(first + second)
}

/// `f(μ_i, p)` as an integer polynomial in `p`.
pub fn f_term_polynomial(mu_i: u32) -> IntPolynomial {
    let p = IntPolynomial::x();
    let q = IntPolynomial::one_minus_x();
    let neg_p = -&p;
    &(&p * &q.pow(mu_i)) + &(&q * &neg_p.pow(mu_i))
}

// ---------------------------------------------------------------------------
// kernels, generic over the scalar field

/// `4^{−m} Σ_{μ ∈ π(m), |μ| ≤ n} multinomial(2m; 2μ) · C(n, |μ|)`.
pub fn composition_sum<T: Scalar>(n: u64, m: u32) -> T {
    let mut acc = BigInt::zero();
    for mu in Compositions::new(m).expect("m >= 1") {
        let k = mu.size() as u64;
        // C(n, k) vanishes for k > n; skip instead of multiplying by zero
        if k > n {
            continue;
        }
        let doubled: Vec<u64> = mu.parts().iter().map(|&x| 2 * u64::from(x)).collect();
        let coeff = multinomial(2 * u64::from(m), &doubled).expect("parts sum to 2m");
        acc += coeff * binomial(n, k);
    }
    T::from_integer(&acc) / T::from_integer(&(BigInt::one() << (2 * m as usize)))
}

/// `2^{−2m−n} Σ_{k=0}^{n} C(n, k) (2k − n)^{2m}`.
pub fn binomial_sum<T: Scalar>(n: u64, m: u32) -> T {
    let mut acc = BigInt::zero();
    let mut c = BigInt::one();
    for k in 0..=n {
        let d = BigInt::from(2 * k as i128 - n as i128);
        acc += &c * d.pow(2 * m);
        c = c * (n - k) / (k + 1);
    }
    T::from_integer(&acc) / T::from_integer(&(BigInt::one() << (2 * m as u64 + n) as usize))
}

/// `Σ_k C(n, k) p^k q^{n−k} (k − n p)^{2m}`, straight from the definition.
pub fn definition_sum<T: Scalar>(n: u64, m: u32, p: &T) -> T {
    let q = T::one() - p.clone();
    let np = T::from_u64(n) * p.clone();
    let mut acc = T::zero();
    let mut c = BigInt::one();
    for k in 0..=n {
        let w = T::from_integer(&c) * p.powu(k) * q.powu(n - k);
        if !w.is_zero() {
            acc = acc + w * (T::from_u64(k) - np.clone()).powu(2 * u64::from(m));
        }
        c = c * (n - k) / (k + 1);
    }
    acc
}

/// `Σ_{μ ∈ π(2m)} C(n, |μ|) multinomial(2m; μ) Π_i f(μ_i, p)`.
///
/// Enumerates `2^{2m−1}` compositions; meant for cross-checking small `m`.
pub fn composition_product_sum<T: Scalar>(n: u64, m: u32, p: &T) -> T {
    let total = 2 * m;
    let terms: Vec<T> = (0..=total).map(|j| f_term_unchecked(j, p)).collect();
    let mut acc = T::zero();
    for mu in Compositions::new(total).expect("2m >= 2") {
        let k = mu.size() as u64;
        if k > n || mu.parts().contains(&1) {
            // f(1, p) = 0 identically
            continue;
        }
        let parts: Vec<u64> = mu.parts().iter().map(|&x| u64::from(x)).collect();
        let coeff = multinomial(u64::from(total), &parts).expect("parts sum to 2m") * binomial(n, k);
        let prod = mu
            .parts()
            .iter()
            .fold(T::one(), |a, &j| a * terms[j as usize].clone());
        acc = acc + T::from_integer(&coeff) * prod;
    }
    acc
}

/// Enumerates every outcome tuple in `{0,1}^n` and sums
/// `P(x) · (Σ_j (x_j − p))^{2m}`. Tuples are tallied by their number of ones
/// first, since the summand depends on nothing else.
pub fn brute_force_sum<T: Scalar>(n: u64, m: u32, p: &T) -> T {
    assert!(n <= BRUTE_FORCE_CAP, "brute force is capped at n = {BRUTE_FORCE_CAP}");
    let mut tally = vec![0u64; n as usize + 1];
    for x in 0u64..(1u64 << n) {
        tally[x.count_ones() as usize] += 1;
    }
    let q = T::one() - p.clone();
    let np = T::from_u64(n) * p.clone();
    let mut acc = T::zero();
    for (ones, &count) in tally.iter().enumerate() {
        let ones = ones as u64;
        let weight = p.powu(ones) * q.powu(n - ones);
        let s = T::from_u64(ones) - np.clone();
        acc = acc + T::from_u64(count) * weight * s.powu(2 * u64::from(m));
    }
    acc
}

/// `w_k = Σ_{μ ∈ π(m), |μ| = k} multinomial(2m; 2μ)` for `k = 0..=m`, by
/// dynamic programming over the last part instead of enumeration.
pub fn size_weights(m: u32) -> Vec<BigInt> {
    let m = m as usize;
    // table[k][j]: sum over compositions of j into k parts of (2j)!/Π(2μ_i)!
    let mut table = vec![vec![BigInt::zero(); m + 1]; m + 1];
    table[0][0] = BigInt::one();
    for k in 1..=m {
        for j in k..=m {
            let mut s = BigInt::zero();
            for last in 1..=j - (k - 1) {
                let prev = &table[k - 1][j - last];
                if !prev.is_zero() {
                    s += prev * binomial(2 * j as u64, 2 * last as u64);
                }
            }
            table[k][j] = s;
        }
    }
    (0..=m).map(|k| table[k][m].clone()).collect()
}

/// The composition sum with compositions grouped by size; cost `O(m)` per `n`
/// once the weights are known, so it works for very large `n`.
#[derive(Debug, Clone)]
pub struct HalfMomentByN {
    m: u32,
    weights: Vec<BigInt>,
    scale: BigInt,
}

impl HalfMomentByN {
    pub fn new(m: u32) -> Self {
        HalfMomentByN { m, weights: size_weights(m), scale: BigInt::one() << (2 * m as usize) }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eval(&self, n: u64) -> ExactRational {
        let mut acc = BigInt::zero();
        for (k, w) in self.weights.iter().enumerate().skip(1) {
            if k as u64 > n {
                break;
            }
            acc += w * binomial(n, k as u64);
        }
        ExactRational::new(acc, self.scale.clone())
    }
}

// ---------------------------------------------------------------------------
// public operations

pub fn moment_half_composition(n: u64, m: u32) -> Result<MomentValue> {
    check_nm(n, m)?;
    Ok(value(n, m, half(), composition_sum(n, m), MomentMethod::Composition))
}

pub fn moment_half_binomsum(n: u64, m: u32) -> Result<MomentValue> {
    check_nm(n, m)?;
    Ok(value(n, m, half(), binomial_sum(n, m), MomentMethod::BinomSum))
}

pub fn moment_half_recurrence(n: u64, m: u32) -> Result<MomentValue> {
    check_nm(n, m)?;
    let v = recurrence::half_moment_by_recurrence(n, m)?;
    Ok(value(n, m, half(), v, MomentMethod::Recurrence))
}

/// `E S_n^{2m}(p)` from the definition-level sum; any `p ∈ [0, 1]`.
pub fn moment_general(n: u64, m: u32, p: &ExactRational) -> Result<MomentValue> {
    check_nm(n, m)?;
    check_p(p)?;
    Ok(value(n, m, p.clone(), definition_sum(n, m, p), MomentMethod::General))
}

/// `E S_n^{2m}(p)` through the composition product expansion.
pub fn moment_general_composition(n: u64, m: u32, p: &ExactRational) -> Result<MomentValue> {
    check_nm(n, m)?;
    check_p(p)?;
    Ok(value(n, m, p.clone(), composition_product_sum(n, m, p), MomentMethod::Composition))
}

pub fn moment_bruteforce(n: u64, m: u32, p: &ExactRational) -> Result<MomentValue> {
    check_nm(n, m)?;
    check_p(p)?;
    if n > BRUTE_FORCE_CAP {
        return Err(Error::ResourceLimit {
            what: format!("brute-force enumeration with n = {n}"),
            cap: BRUTE_FORCE_CAP,
        });
    }
    Ok(value(n, m, p.clone(), brute_force_sum(n, m, p), MomentMethod::BruteForce))
}

/// Dispatches on `method`. Routes restricted to `p = 1/2` reject other `p`.
pub fn moment(n: u64, m: u32, p: &ExactRational, method: MomentMethod) -> Result<MomentValue> {
    if !method.supports_general_p() && *p != half() {
        return Err(invalid(format!("method {method} only evaluates at p = 1/2")));
    }
    match method {
        MomentMethod::Composition => moment_half_composition(n, m),
        MomentMethod::BinomSum => moment_half_binomsum(n, m),
        MomentMethod::Recurrence => moment_half_recurrence(n, m),
        MomentMethod::BruteForce => moment_bruteforce(n, m, p),
        MomentMethod::General => moment_general(n, m, p),
    }
}

/// `E Z^{2m} = (2m)! / (2^m m!)` for a standard normal `Z`.
pub fn gaussian_even_moment(m: u32) -> ExactRational {
    let m = u64::from(m);
    ExactRational::new(factorial(2 * m), factorial(m) << m as usize)
}

/// `(n/2)^{2m}`, the almost-sure ceiling of `S_n(1/2)^{2m}`.
pub fn half_moment_ceiling(n: u64, m: u32) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(2)).powu(2 * u64::from(m))
}
