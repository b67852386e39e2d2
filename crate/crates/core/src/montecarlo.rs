//! Seeded Monte Carlo estimate of `P(|S_n(p)/n| > ε)`.
//!
//! Replicate `i` draws from ChaCha8 keyed by `seed` on stream `i`, so the
//! estimate does not depend on how replicates are scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};
use crate::number::parse_rational;
use crate::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McTail {
    pub estimate: f64,
    pub stderr: f64,
    pub exceedances: u64,
    pub samples: u64,
}

/// `exceeds[k]`: whether `k` successes give `|k − np| > nε`.
///
/// `p` and `ε` are read through their shortest decimal form, so `0.05` means
/// exactly `1/20` and lattice boundary cases are decided exactly.
fn exceedance_table(n: u64, p: f64, epsilon: f64) -> Result<Vec<bool>> {
    let p = parse_rational(&format!("{p}"))?;
    let eps = parse_rational(&format!("{epsilon}"))?;
    let nr = ExactRational::from_integer(BigInt::from(n));
    let np = &nr * &p;
    let radius = &nr * &eps;
    Ok((0..=n)
        .map(|k| (ExactRational::from_integer(BigInt::from(k)) - &np).abs() > radius)
        .collect())
}

fn successes(n: u64, p: f64, seed: u64, replicate: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    (0..n).filter(|_| rng.gen::<f64>() < p).count() as u64
}

fn check(n: u64, p: f64, epsilon: f64, samples: u64) -> Result<()> {
    if n == 0 || samples == 0 {
        return Err(invalid("n and samples must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p must lie in [0, 1], got {p}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

fn summarize(exceedances: u64, samples: u64) -> McTail {
    let estimate = exceedances as f64 / samples as f64;
    let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    McTail { estimate, stderr, exceedances, samples }
}

pub fn mc_tail(n: u64, p: f64, epsilon: f64, samples: u64, seed: u64) -> Result<McTail> {
    check(n, p, epsilon, samples)?;
    let exceeds = exceedance_table(n, p, epsilon)?;
    let exceedances = (0..samples)
        .into_par_iter()
        .filter(|&i| exceeds[successes(n, p, seed, i) as usize])
        .count() as u64;
    Ok(summarize(exceedances, samples))
}

/// Single-threaded twin of [`mc_tail`]; identical output.
pub fn mc_tail_serial(n: u64, p: f64, epsilon: f64, samples: u64, seed: u64) -> Result<McTail> {
    check(n, p, epsilon, samples)?;
    let exceeds = exceedance_table(n, p, epsilon)?;
    let exceedances = (0..samples).filter(|&i| exceeds[successes(n, p, seed, i) as usize]).count() as u64;
    Ok(summarize(exceedances, samples))
}

/// Number of standard errors between the estimate and `exact`; a zero
/// standard error counts as agreement only on an exact match.
pub fn z_score(mc: &McTail, exact: f64) -> f64 {
    let diff = (mc.estimate - exact).abs();
    if mc.stderr.is_zero() {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / mc.stderr
    }
}
