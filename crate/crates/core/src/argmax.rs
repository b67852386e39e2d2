//! Where in `p` is `E S_n^{2m}(p)` largest?
//!
//! The moment is an integer polynomial `P_{n,m}` of degree at most `2m`,
//! symmetric under `p ↦ 1 − p` and vanishing at both ends. Its critical
//! points in `(0, 1/2)` are isolated with Sturm chains; `p = 1/2` is always
//! critical by symmetry.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::composition::binomial;
use crate::error::{invalid, Error, Result};
use crate::moments::f_term_polynomial;
use crate::polynomial::IntPolynomial;
use crate::sturm::{isolate_roots, Multiplicity, RootInterval, SturmChain};
use crate::ExactRational;

/// Refinement stops once a contested interval is narrower than `2^-REFINEMENT_BITS`.
pub const REFINEMENT_BITS: usize = 200;

/// `P_{n,m}(p) = E S_n^{2m}(p)` with integer coefficients.
///
/// Uses the central-moment recurrence `μ_{r+1} = pq (n r μ_{r−1} + dμ_r/dp)`,
/// `μ_0 = 1`, `μ_1 = 0`; every `μ_r` has degree at most `r` in `p`.
pub fn moment_polynomial(n: u64, m: u32) -> Result<IntPolynomial> {
    if n == 0 || m == 0 {
        return Err(invalid("moment_polynomial needs n >= 1 and m >= 1"));
    }
    let pq = IntPolynomial::from_i64s(&[0, 1, -1]);
    let mut prev = IntPolynomial::constant(BigInt::one());
    let mut cur = IntPolynomial::zero();
    for r in 1..2 * u64::from(m) {
        let inner = &prev.scale(&BigInt::from(n * r)) + &cur.derivative();
        let next = &pq * &inner;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The same polynomial from the composition expansion
/// `Σ_{μ ∈ π(2m)} C(n,|μ|) multinomial(2m; μ) Π f(μ_i, p)`,
/// with compositions grouped by their number of parts.
pub fn moment_polynomial_by_compositions(n: u64, m: u32) -> Result<IntPolynomial> {
    if n == 0 || m == 0 {
        return Err(invalid("moment_polynomial needs n >= 1 and m >= 1"));
    }
    let total = 2 * m as usize;
    let f: Vec<IntPolynomial> = (0..=total as u32).map(f_term_polynomial).collect();
    // by_size[j]: Σ over compositions of j into k parts (all ≥ 2, since f(1, p) = 0)
    // of multinomial(j; μ) Π f(μ_i, p)
    let mut by_size: Vec<IntPolynomial> = vec![IntPolynomial::zero(); total + 1];
    by_size[0] = IntPolynomial::constant(BigInt::one());
    let mut result = IntPolynomial::zero();
    for k in 1..=(m as u64).min(n) {
        let mut next = vec![IntPolynomial::zero(); total + 1];
        for (j, slot) in next.iter_mut().enumerate().skip(2 * k as usize) {
            let mut acc = IntPolynomial::zero();
            for last in 2..=j - 2 * (k as usize - 1) {
                let prev = &by_size[j - last];
                if prev.is_zero() {
                    continue;
                }
                let term = (&f[last] * prev).scale(&binomial(j as u64, last as u64));
                acc = &acc + &term;
            }
            *slot = acc;
        }
        by_size = next;
        result = &result + &by_size[total].scale(&binomial(n, k));
    }
    Ok(result)
}

/// `Q` with `4^m P_{n,m}((1 + u)/2) = Q(u^2)`; symmetry about `1/2` kills the
/// odd powers of `u`, so `Q` has degree at most `m`.
pub fn folded_polynomial(n: u64, m: u32) -> Result<IntPolynomial> {
    let p = moment_polynomial(n, m)?;
    let top = 2 * m as usize;
    let scaled = IntPolynomial::new(
        (0..=top).map(|k| p.coeff(k) << (top - k)).collect(),
    );
    let r = scaled.compose(&IntPolynomial::from_i64s(&[1, 1]));
    let (even, odd): (Vec<_>, Vec<_>) = r.coeffs().iter().cloned().enumerate().partition(|(i, _)| i % 2 == 0);
    if odd.iter().any(|(_, c)| !c.is_zero()) {
        return Err(Error::Internal(format!("moment polynomial for n={n}, m={m} is not symmetric")));
    }
    Ok(IntPolynomial::new(even.into_iter().map(|(_, c)| c).collect()))
}

/// `P_{n,m}` increases strictly on `(0, 1/2)`, so `1/2` is the unique maximizer.
///
/// On `p ∈ (0, 1/2)` the sign of `P'` is the opposite of `Q'(v)` at `v = (2p − 1)^2 ∈ (0, 1)`,
/// and `Q'` has half the degree of `P'`, which keeps the Sturm chain cheap.
pub fn increasing_to_half(n: u64, m: u32) -> Result<bool> {
    let dq = folded_polynomial(n, m)?.derivative();
    if dq.is_zero() {
        return Ok(false);
    }
    let zero = ExactRational::zero();
    let one = ExactRational::one();
    let chain = SturmChain::new(&dq)?;
    Ok(chain.count_open(&zero, &one) == 0 && dq.sign_at(&q(1, 2)) < 0)
}

pub fn derivative(poly: &IntPolynomial) -> IntPolynomial {
    poly.derivative()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    LocalMax,
    LocalMin,
    /// The derivative touches zero without changing sign.
    Flat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Exact(ExactRational),
    Interval(RootInterval),
}

impl Location {
    pub fn reflect(&self) -> Location {
        match self {
            Location::Exact(x) => Location::Exact(ExactRational::one() - x),
            Location::Interval(r) => Location::Interval(r.reflect()),
        }
    }

    /// A representative rational point.
    pub fn center(&self) -> ExactRational {
        match self {
            Location::Exact(x) => x.clone(),
            Location::Interval(r) => r.midpoint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPoint {
    pub location: Location,
    pub kind: CriticalKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgmaxReport {
    pub n: u64,
    pub m: u32,
    /// `p = 1/2` is the unique global maximizer on `[0, 1]`.
    pub is_half_argmax: bool,
    /// The derivative has no root in `(0, 1/2)` and is positive at `1/4`.
    /// Sufficient for `is_half_argmax`, not necessary.
    pub derivative_criterion: bool,
    pub maximizers: Vec<Location>,
    pub critical_points: Vec<CriticalPoint>,
    /// `(lower, upper)` bracket of `max_p E S_n^{2m}(p)`.
    pub max_value_bounds: (ExactRational, ExactRational),
    pub value_at_half: ExactRational,
    pub notes: Vec<String>,
}

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

fn min_max(values: [ExactRational; 4]) -> (ExactRational, ExactRational) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

/// Interval Horner enclosure of `{P(x) : lo ≤ x ≤ hi}`.
fn horner_enclosure(poly: &IntPolynomial, lo: &ExactRational, hi: &ExactRational) -> (ExactRational, ExactRational) {
    let mut acc = (ExactRational::zero(), ExactRational::zero());
    for c in poly.coeffs().iter().rev() {
        let (a, b) = min_max([&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi]);
        let c = ExactRational::from_integer(c.clone());
        acc = (a + &c, b + c);
    }
    acc
}

/// Bracket of `P(c)` for the unique critical point `c` of a local maximum in `r`.
///
/// Lower bound: `P` rises to `c` then falls, so `P(c)` dominates both ends.
/// Upper bound: mean-value form around the midpoint.
fn local_max_bracket(p: &IntPolynomial, dp: &IntPolynomial, r: &RootInterval) -> (ExactRational, ExactRational) {
    let at_lo = p.eval_exact(&r.lo);
    let at_hi = p.eval_exact(&r.hi);
    let lower = if at_lo > at_hi { at_lo } else { at_hi };
    let mid = r.midpoint();
    let half_width = r.width() / q(2, 1);
    let (dlo, dhi) = horner_enclosure(dp, &r.lo, &r.hi);
    let slope = if dlo.abs() > dhi.abs() { dlo.abs() } else { dhi.abs() };
    let mvf = p.eval_exact(&mid) + slope * half_width;
    let (_, direct) = horner_enclosure(p, &r.lo, &r.hi);
    let upper = if mvf < direct { mvf } else { direct };
    (lower, upper)
}

/// Sign of `dp` just inside `end`, looking toward `toward`, with no root of
/// `dp` between `end` and the probe point.
fn sign_near(dp: &IntPolynomial, chain: &SturmChain, end: &ExactRational, toward: &ExactRational) -> i8 {
    let mut x = toward.clone();
    loop {
        x = (end + &x) / q(2, 1);
        let (lo, hi) = if *end < x { (end, &x) } else { (&x, end) };
        let s = dp.sign_at(&x);
        if s != 0 && chain.count_open(lo, hi) == 0 {
            return s;
        }
    }
}

/// Sign of `dp` just to the left / right of the single root inside `r`.
fn signs_around(dp: &IntPolynomial, chain: &SturmChain, r: &RootInterval) -> (i8, i8) {
    let left = match dp.sign_at(&r.lo) {
        0 => sign_near(dp, chain, &r.lo, &r.hi),
        s => s,
    };
    let right = match dp.sign_at(&r.hi) {
        0 => sign_near(dp, chain, &r.hi, &r.lo),
        s => s,
    };
    (left, right)
}

fn classify(left: i8, right: i8) -> CriticalKind {
    match (left, right) {
        (1, -1) => CriticalKind::LocalMax,
        (-1, 1) => CriticalKind::LocalMin,
        _ => CriticalKind::Flat,
    }
}

struct Candidate {
    interval: RootInterval,
    bracket: (ExactRational, ExactRational),
}

pub fn argmax_report(n: u64, m: u32, width: &ExactRational) -> Result<ArgmaxReport> {
    if !width.is_positive() {
        return Err(invalid("width must be positive"));
    }
    let p = moment_polynomial(n, m)?;
    let half = q(1, 2);
    let value_at_half = p.eval_exact(&half);
    if increasing_to_half(n, m)? {
        return Ok(ArgmaxReport {
            n,
            m,
            is_half_argmax: true,
            derivative_criterion: true,
            maximizers: vec![Location::Exact(half.clone())],
            critical_points: vec![CriticalPoint { location: Location::Exact(half), kind: CriticalKind::LocalMax }],
            max_value_bounds: (value_at_half.clone(), value_at_half.clone()),
            value_at_half,
            notes: Vec::new(),
        });
    }
    let dp = p.derivative();
    let chain = SturmChain::new(&dp)?;

    let left_roots = isolate_roots(&dp, &ExactRational::zero(), &half, width)?;
    let derivative_criterion = false;

    let mut left_points = Vec::new();
    let mut candidates = Vec::new();
    for r in &left_roots {
        let (l, rgt) = signs_around(&dp, &chain, r);
        let kind = classify(l, rgt);
        if kind == CriticalKind::LocalMax {
            candidates.push(Candidate { interval: r.clone(), bracket: local_max_bracket(&p, &dp, r) });
        }
        left_points.push(CriticalPoint { location: Location::Interval(r.clone()), kind });
    }
    let below_half = left_roots.last().map(|r| r.lo.clone()).unwrap_or_else(ExactRational::zero);
    let half_kind = match sign_near(&dp, &chain, &half, &below_half) {
        1 => CriticalKind::LocalMax,
        _ => CriticalKind::LocalMin,
    };

    let mut notes = Vec::new();
    // P(0) = 0 < P(1/2), so only interior local maxima can compete with 1/2
    let winner = resolve_maximum(n, m, &p, &chain, &value_at_half, &mut candidates)?;

    let (is_half_argmax, maximizers, max_value_bounds) = match winner {
        None => (true, vec![Location::Exact(half.clone())], (value_at_half.clone(), value_at_half.clone())),
        Some(i) => {
            let mut r = candidates[i].interval.clone();
            while r.width() > *width {
                r = chain.halve(&r);
            }
            let bracket = local_max_bracket(&p, &dp, &r);
            let bracket = (
                std::cmp::max(bracket.0, candidates[i].bracket.0.clone()),
                std::cmp::min(bracket.1, candidates[i].bracket.1.clone()),
            );
            (false, vec![Location::Interval(r.clone()), Location::Interval(r.reflect())], bracket)
        }
    };
    debug_assert!(!derivative_criterion || is_half_argmax);

    let mut critical_points = left_points.clone();
    critical_points.push(CriticalPoint { location: Location::Exact(half.clone()), kind: half_kind });
    critical_points.extend(left_points.iter().rev().map(|c| CriticalPoint {
        location: c.location.reflect(),
        kind: c.kind,
    }));

    if half_kind == CriticalKind::LocalMin {
        notes.push("p = 1/2 is a strict local minimum".to_string());
    }
    if let (1, 2, Some(Location::Interval(r))) = (n, m, maximizers.first()) {
        notes.push(quoted_location_note(r));
    }
    if !is_half_argmax && left_roots.iter().any(|r| r.multiplicity == Multiplicity::Unresolved) {
        notes.push("some critical points may be repeated roots of the derivative".to_string());
    }

    Ok(ArgmaxReport {
        n,
        m,
        is_half_argmax,
        derivative_criterion,
        maximizers,
        critical_points,
        max_value_bounds,
        value_at_half,
        notes,
    })
}

/// For a single Bernoulli variable the fourth moment peaks at `1/2 ± √3/6`,
/// the roots of `6p² − 6p + 1`; `1/2 ± √2/4` is sometimes quoted instead and
/// is not even a critical point. Both claims are checked exactly here.
fn quoted_location_note(r: &RootInterval) -> String {
    let half = q(1, 2);
    // for r ⊂ (0, 1/2): r contains 1/2 − √s  iff  (1/2 − hi)² < s < (1/2 − lo)²
    let contains = |s: &ExactRational| {
        let near = (&half - &r.hi) * (&half - &r.hi);
        let far = (&half - &r.lo) * (&half - &r.lo);
        near < *s && *s < far
    };
    let sqrt3_over_6 = contains(&q(1, 12));
    let sqrt2_over_4 = contains(&q(1, 8));
    format!(
        "maximizers are 1/2 ± √3/6 ≈ 0.2113249, 0.7886751 (roots of 6p^2 - 6p + 1; isolating interval contains 1/2 - √3/6: {sqrt3_over_6}); \
         the value 1/2 ± √2/4 ≈ 0.1464466, 0.8535534 that is sometimes stated is not a critical point \
         (isolating interval contains 1/2 - √2/4: {sqrt2_over_4})"
    )
}

/// Index of the unique global maximizer among `candidates`, or `None` when
/// `1/2` wins outright. Contested brackets are halved until separated.
fn resolve_maximum(
    n: u64,
    m: u32,
    p: &IntPolynomial,
    chain: &SturmChain,
    at_half: &ExactRational,
    candidates: &mut [Candidate],
) -> Result<Option<usize>> {
    let dp = p.derivative();
    let floor = ExactRational::new(BigInt::one(), BigInt::one() << REFINEMENT_BITS);
    loop {
        // best lower bound among all contenders, 1/2 included
        let mut best_lower = at_half.clone();
        let mut best: Option<usize> = None;
        for (i, c) in candidates.iter().enumerate() {
            if c.bracket.0 > best_lower {
                best_lower = c.bracket.0.clone();
                best = Some(i);
            }
        }
        let half_cleared = best.is_none() || *at_half < best_lower;
        let others_cleared = candidates
            .iter()
            .enumerate()
            .all(|(i, c)| Some(i) == best || c.bracket.1 < best_lower);
        if half_cleared && others_cleared {
            return Ok(best);
        }
        let mut refined_any = false;
        for (i, c) in candidates.iter_mut().enumerate() {
            let contested = Some(i) == best || c.bracket.1 >= best_lower;
            if !contested {
                continue;
            }
            if c.interval.width() < floor {
                return Err(Error::IndistinguishableMaxima {
                    n,
                    m,
                    detail: format!(
                        "maximum values agree to below 2^-{REFINEMENT_BITS} near p = {}",
                        crate::number::render_decimal(&c.interval.midpoint(), 12)
                    ),
                });
            }
            c.interval = chain.halve(&c.interval);
            let fresh = local_max_bracket(p, &dp, &c.interval);
            c.bracket = (
                std::cmp::max(fresh.0, c.bracket.0.clone()),
                std::cmp::min(fresh.1, c.bracket.1.clone()),
            );
            refined_any = true;
        }
        if !refined_any {
            return Err(Error::Internal("maximum resolution made no progress".to_string()));
        }
    }
}

/// Largest `m ≤ m_cap` such that `1/2` is the argmax for every `m' ≤ m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MnResult {
    pub n: u64,
    pub m_n: u32,
    /// The property still held at `m_cap`; the true `m_n` may be larger.
    pub capped: bool,
    /// Set when even `m = 1` fails, which `n p q` rules out.
    pub warning: bool,
}

/// Coarse width for the sweep; the verdict does not depend on it.
fn sweep_width() -> ExactRational {
    q(1, 1 << 20)
}

pub fn compute_mn(n: u64, m_cap: u32) -> Result<MnResult> {
    if n == 0 || m_cap == 0 {
        return Err(invalid("compute_mn needs n >= 1 and m_cap >= 1"));
    }
    let width = sweep_width();
    for m in 1..=m_cap {
        if !argmax_report(n, m, &width)?.is_half_argmax {
            return Ok(MnResult { n, m_n: m - 1, capped: false, warning: m == 1 });
        }
    }
    Ok(MnResult { n, m_n: m_cap, capped: true, warning: false })
}

/// Whether `1/2` is the argmax for every half order `1..=m`, without the
/// report bookkeeping.
pub fn half_is_argmax_through(n: u64, m: u32) -> Result<bool> {
    let width = sweep_width();
    for k in 1..=m {
        if !argmax_report(n, k, &width)?.is_half_argmax {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnTable {
    pub m_cap: u32,
    pub rows: Vec<MnResult>,
}

/// `compute_mn` for every `n` in `n_min..=n_max`; rows run in parallel but
/// come back ordered by `n`.
pub fn mn_table(n_min: u64, n_max: u64, m_cap: u32) -> Result<MnTable> {
    if n_min == 0 || n_min > n_max {
        return Err(invalid("mn_table needs 1 <= n_min <= n_max"));
    }
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| compute_mn(n, m_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(MnTable { m_cap, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturm::sturm_root_count;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(moment_polynomial(1, 2).unwrap(), poly(&[0, 1, -4, 6, -3]));
        assert_eq!(moment_polynomial(1, 1).unwrap(), poly(&[0, 1, -1]));
        assert_eq!(moment_polynomial(2, 1).unwrap(), poly(&[0, 2, -2]));
        assert!(moment_polynomial(0, 1).is_err());
    }

    #[test]
    fn recurrence_matches_composition_expansion() {
        for n in 1..=12 {
            for m in 1..=6 {
                let a = moment_polynomial(n, m).unwrap();
                assert_eq!(a, moment_polynomial_by_compositions(n, m).unwrap(), "n={n} m={m}");
                assert!(a.degree().unwrap() <= 2 * m as usize);
            }
        }
    }

    #[test]
    fn folded_form_matches_the_derivative_criterion() {
        assert_eq!(folded_polynomial(1, 1).unwrap(), poly(&[1, -1]));
        for n in 1..=16 {
            for m in 1..=7 {
                let dp = moment_polynomial(n, m).unwrap().derivative();
                let roots = isolate_roots(&dp, &ExactRational::zero(), &q(1, 2), &q(1, 1 << 20)).unwrap();
                let slow = roots.is_empty() && dp.sign_at(&q(1, 4)) > 0;
                assert_eq!(increasing_to_half(n, m).unwrap(), slow, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(&poly(&[0, 1, -4, 6, -3])), poly(&[1, -8, 18, -12]));
        assert!(derivative(&poly(&[5])).is_zero());
        assert_eq!(derivative(&poly(&[0, 1, -1])), poly(&[1, -2]));
    }

    #[test]
    fn single_variable_fourth_moment() {
        let r = argmax_report(1, 2, &q(1, 1_000_000_000_000)).unwrap();
        assert!(!r.is_half_argmax);
        assert!(!r.derivative_criterion);
        assert_eq!(r.maximizers.len(), 2);
        assert_eq!(r.value_at_half, q(1, 16));
        assert!(r.max_value_bounds.0 > q(1, 16));
        assert_eq!(r.critical_points.len(), 3);
        assert_eq!(r.critical_points[1].kind, CriticalKind::LocalMin);
        assert!(r.notes.iter().any(|s| s.contains("√3/6") && s.contains("1/2 - √3/6: true")));
        assert!(r.notes.iter().any(|s| s.contains("1/2 - √2/4: false")));
    }

    #[test]
    fn small_cases_at_half() {
        assert!(argmax_report(1, 1, &q(1, 1000)).unwrap().is_half_argmax);
        let r = argmax_report(10, 2, &q(1, 1000)).unwrap();
        assert!(r.is_half_argmax && r.derivative_criterion);
        assert_eq!(r.maximizers, vec![Location::Exact(q(1, 2))]);
        let d = moment_polynomial(10, 2).unwrap().derivative();
        assert_eq!(sturm_root_count(&d, &q(0, 1), &q(1, 2)).unwrap(), 1); // only 1/2 itself
    }

    #[test]
    fn first_row_of_the_table() {
        assert_eq!(compute_mn(1, 5).unwrap(), MnResult { n: 1, m_n: 1, capped: false, warning: false });
        let t = mn_table(1, 1, 5).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!((t.rows[0].n, t.rows[0].m_n), (1, 1));
        assert!(mn_table(3, 2, 5).is_err());
    }

    #[test]
    fn enclosures_contain_samples() {
        let p = moment_polynomial(6, 3).unwrap();
        let (lo, hi) = (q(1, 7), q(2, 5));
        let (a, b) = horner_enclosure(&p, &lo, &hi);
        for j in 0..=20 {
            let x = &lo + (&hi - &lo) * q(j, 20);
            let v = p.eval_exact(&x);
            assert!(a <= v && v <= b);
        }
    }
}
