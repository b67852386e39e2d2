//! Moment-optimized Chebyshev bounds and sample-size planning.
//!
//! For `m ≤ m_n` the order-`2m` moment is largest at `p = 1/2`, so
//!
//! ```text
//! P(|S_n(p)/n| > ε) ≤ E S_n^{2m}(1/2) / (nε)^{2m}
//! ```
//!
//! holds uniformly in `p`. Bounds above one are kept as they are.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::argmax::{compute_mn, half_is_argmax_through};
use crate::composition::{binomial, factorial};
use crate::error::{invalid, Error, Result};
use crate::moments::HalfMomentByN;
use crate::scalar::Scalar;
use crate::ExactRational;

/// Largest sample size `min_sample_size` will search.
pub const MAX_SAMPLE_SIZE: u64 = 1_000_000_000;

pub const DEFAULT_M_CAP: u32 = 25;

fn check_epsilon(epsilon: &ExactRational) -> Result<()> {
    if !epsilon.is_positive() {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// `E S_n^{2m}(1/2) / (nε)^{2m}` for a fixed `(ε, m)` and varying `n`.
#[derive(Debug, Clone)]
pub struct ChebyshevBound {
    moment: HalfMomentByN,
    epsilon: ExactRational,
}

impl ChebyshevBound {
    pub fn new(epsilon: &ExactRational, m: u32) -> Result<Self> {
        check_epsilon(epsilon)?;
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        Ok(ChebyshevBound { moment: HalfMomentByN::new(m), epsilon: epsilon.clone() })
    }

    pub fn at(&self, n: u64) -> ExactRational {
        let scale = ExactRational::from_integer(BigInt::from(n)) * &self.epsilon;
        self.moment.eval(n) / scale.powu(2 * u64::from(self.moment.m()))
    }
}

pub fn cheb_bound(n: u64, epsilon: &ExactRational, m: u32) -> Result<ExactRational> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(ChebyshevBound::new(epsilon, m)?.at(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub m: u32,
    pub bound: ExactRational,
    /// `false` when `m` exceeds the validity cap `m_n`.
    pub selectable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundProfile {
    pub n: u64,
    pub epsilon: ExactRational,
    pub rows: Vec<ProfileRow>,
    pub best_m: u32,
    pub best_bound: ExactRational,
    /// `m_n` (capped at `m_cap`) when validity was enforced.
    pub validity_cap: Option<u32>,
}

/// Bounds for `m = 1..=m_cap`. With `strict`, rows beyond `m_n` are kept
/// but cannot be chosen as the best.
pub fn bound_profile(n: u64, epsilon: &ExactRational, m_cap: u32, strict: bool) -> Result<BoundProfile> {
    if n == 0 || m_cap == 0 {
        return Err(invalid("bound_profile needs n >= 1 and m_cap >= 1"));
    }
    check_epsilon(epsilon)?;
    let validity_cap = if strict { Some(compute_mn(n, m_cap)?.m_n) } else { None };
    let rows: Vec<ProfileRow> = (1..=m_cap)
        .map(|m| {
            let bound = cheb_bound(n, epsilon, m)?;
            let selectable = validity_cap.is_none_or(|cap| m <= cap);
            Ok(ProfileRow { m, bound, selectable })
        })
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .filter(|r| r.selectable)
        .fold(None::<&ProfileRow>, |best, r| match best {
            Some(b) if b.bound <= r.bound => Some(b),
            _ => Some(r),
        })
        .ok_or_else(|| Error::Internal(format!("no moment order is valid at n = {n}")))?;
    Ok(BoundProfile {
        n,
        epsilon: epsilon.clone(),
        best_m: best.m,
        best_bound: best.bound.clone(),
        rows,
        validity_cap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanResult {
    pub n_star: u64,
    pub m_used: u32,
    pub achieved_bound: ExactRational,
    /// `ñ = n_star · ε²`.
    pub effective_sample_size: ExactRational,
}

/// Smallest `n` with `cheb_bound(n, ε, m) ≤ δ`.
///
/// Exponential bracketing plus bisection, which presumes the bound falls with
/// `n`; the crossing is then checked and a linear scan takes over if it fails.
pub fn min_sample_size(epsilon: &ExactRational, delta: &ExactRational, m: u32) -> Result<PlanResult> {
    check_unit(epsilon, "epsilon", false)?;
    check_unit(delta, "delta", true)?;
    let bound = ChebyshevBound::new(epsilon, m)?;
    let ok = |n: u64| bound.at(n) <= *delta;

    let mut lo = 0u64;
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= MAX_SAMPLE_SIZE {
            return Err(Error::ResourceLimit {
                what: format!("sample size for epsilon = {epsilon}, delta = {delta}, m = {m}"),
                cap: MAX_SAMPLE_SIZE,
            });
        }
        lo = hi;
        hi = (hi * 2).min(MAX_SAMPLE_SIZE);
    }
    // invariant: ok(hi), and !ok(lo) unless lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut n_star = hi;
    if n_star > 1 && ok(n_star - 1) {
        n_star = (1..n_star).find(|&n| ok(n)).expect("ok(n_star - 1) holds");
    }
    let achieved_bound = bound.at(n_star);
    debug_assert!(achieved_bound <= *delta);
    Ok(PlanResult {
        n_star,
        m_used: m,
        achieved_bound,
        effective_sample_size: ExactRational::from_integer(BigInt::from(n_star)) * epsilon * epsilon,
    })
}

fn check_unit(x: &ExactRational, name: &str, allow_one: bool) -> Result<()> {
    let one = ExactRational::one();
    let upper_ok = if allow_one { *x <= one } else { *x < one };
    if !x.is_positive() || !upper_ok {
        let range = if allow_one { "(0, 1]" } else { "(0, 1)" };
        return Err(invalid(format!("{name} must lie in {range}, got {x}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanQuery {
    pub epsilon: ExactRational,
    pub delta: ExactRational,
    /// Pin a single moment order instead of searching `1..=m_cap`.
    pub m: Option<u32>,
    pub m_cap: u32,
    /// Only accept `m` with `m ≤ m_{n_star}`.
    pub strict: bool,
}

impl PlanQuery {
    pub fn new(epsilon: ExactRational, delta: ExactRational) -> Self {
        PlanQuery { epsilon, delta, m: None, m_cap: DEFAULT_M_CAP, strict: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanCandidate {
    pub m: u32,
    pub n_star: u64,
    /// `1/2` is the argmax for every order up to `m` at `n_star`.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestPlan {
    pub plan: PlanResult,
    pub candidates: Vec<PlanCandidate>,
    /// Some order below `m_cap` was rejected for exceeding `m_n`.
    pub validity_binding: bool,
}

/// Minimum sample size over the candidate orders; ties go to the smaller `m`.
pub fn best_plan(query: &PlanQuery) -> Result<BestPlan> {
    if query.m_cap == 0 && query.m.is_none() {
        return Err(invalid("m_cap must be at least 1"));
    }
    let orders: Vec<u32> = match query.m {
        Some(m) => vec![m],
        None => (1..=query.m_cap).collect(),
    };
    let mut candidates = Vec::new();
    let mut best: Option<PlanResult> = None;
    for m in orders {
        let plan = min_sample_size(&query.epsilon, &query.delta, m)?;
        let valid = !query.strict || half_is_argmax_through(plan.n_star, m)?;
        candidates.push(PlanCandidate { m, n_star: plan.n_star, valid });
        if valid && best.as_ref().is_none_or(|b| plan.n_star < b.n_star) {
            best = Some(plan);
        }
    }
    let plan = best.ok_or_else(|| invalid("no candidate moment order is valid at its sample size"))?;
    let validity_binding = candidates.iter().any(|c| !c.valid);
    Ok(BestPlan { plan, candidates, validity_binding })
}

/// `P(|S_n(p)| > nε)`, summed exactly over the binomial distribution.
pub fn exact_tail(n: u64, p: &ExactRational, epsilon: &ExactRational) -> Result<ExactRational> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if p.is_negative() || *p > ExactRational::one() {
        return Err(invalid(format!("p must lie in [0, 1], got {p}")));
    }
    check_epsilon(epsilon)?;
    let nr = ExactRational::from_integer(BigInt::from(n));
    let np = &nr * p;
    let radius = &nr * epsilon;
    let q = ExactRational::one() - p;
    let mut acc = ExactRational::zero();
    for k in 0..=n {
        let dev = (ExactRational::from_integer(BigInt::from(k)) - &np).abs();
        if dev > radius {
            acc += ExactRational::from_integer(binomial(n, k)) * p.powu(k) * q.powu(n - k);
        }
    }
    Ok(acc)
}

/// Large-`n` limit of the order-`2m` bound at fixed `ñ = nε²`:
/// `B_m = (2m)! / (m! 8^m) · ñ^{−m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticProfile {
    pub ntilde: ExactRational,
    pub rows: Vec<(u32, ExactRational)>,
    /// Smallest minimizer of `B_m` over the rows.
    pub m_star: u32,
    /// `2ñ − 1/2`: `B` decreases through `m` exactly while `m ≤` this.
    pub threshold: ExactRational,
}

pub fn asymptotic_bound(ntilde: &ExactRational, m: u32) -> ExactRational {
    let m64 = u64::from(m);
    let coeff = ExactRational::new(factorial(2 * m64), factorial(m64) << (3 * m64) as usize);
    coeff / ntilde.powu(m64)
}

pub fn asymptotic_profile(ntilde: &ExactRational, m_cap: u32) -> Result<AsymptoticProfile> {
    if !ntilde.is_positive() {
        return Err(invalid(format!("effective sample size must be positive, got {ntilde}")));
    }
    if m_cap == 0 {
        return Err(invalid("m_cap must be at least 1"));
    }
    let rows: Vec<(u32, ExactRational)> = (1..=m_cap).map(|m| (m, asymptotic_bound(ntilde, m))).collect();
    let mut m_star = 1;
    let mut best = rows[0].1.clone();
    for (m, b) in &rows[1..] {
        if *b < best {
            best = b.clone();
            m_star = *m;
        }
    }
    let threshold = ntilde * ExactRational::from_integer(BigInt::from(2)) - ExactRational::new(1.into(), 2.into());
    Ok(AsymptoticProfile { ntilde: ntilde.clone(), rows, m_star, threshold })
}

/// `B_{m+1} / B_m = (2m + 1) / (4ñ)`.
pub fn asymptotic_ratio(ntilde: &ExactRational, m: u32) -> ExactRational {
    ExactRational::from_integer(BigInt::from(2 * u64::from(m) + 1)) / (ntilde * ExactRational::from_integer(4.into()))
}

/// Optimal even moment order `2 m*` from the ratio criterion: `m*` is the
/// first `m ≥ 1` with `(2m + 1) / (4ñ) ≥ 1`, so ties go to the smaller order.
pub fn rule_of_thumb_order(ntilde: &ExactRational) -> Result<u64> {
    if !ntilde.is_positive() {
        return Err(invalid(format!("effective sample size must be positive, got {ntilde}")));
    }
    // smallest integer m with 2m + 1 >= 4ñ, i.e. m >= (4ñ − 1)/2
    let target = (ntilde * ExactRational::from_integer(4.into()) - ExactRational::one())
        / ExactRational::from_integer(2.into());
    let m_star = target.ceil().to_integer().max(BigInt::one());
    let m_star: u64 = m_star
        .try_into()
        .map_err(|_| Error::ResourceLimit { what: "moment order".to_string(), cap: u64::MAX })?;
    Ok(2 * m_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn bound_examples() {
        assert_eq!(cheb_bound(2000, &q(1, 20), 1).unwrap(), q(1, 20));
        assert_eq!(cheb_bound(775, &q(1, 20), 2).unwrap(), q(28_805_200, 577_200_625));
        assert_eq!(cheb_bound(1, &q(1, 1), 1).unwrap(), q(1, 4));
        assert!(cheb_bound(10, &q(0, 1), 1).is_err());
        assert!(cheb_bound(10, &q(-1, 3), 1).is_err());
    }

    #[test]
    fn second_order_closed_form() {
        for n in [1u64, 7, 100, 12345] {
            for eps in [q(1, 20), q(1, 3), q(7, 5)] {
                let expected = (ExactRational::from_integer((4 * n).into()) * &eps * &eps).recip();
                assert_eq!(cheb_bound(n, &eps, 1).unwrap(), expected);
            }
        }
    }

    #[test]
    fn sample_sizes() {
        let p1 = min_sample_size(&q(1, 20), &q(1, 20), 1).unwrap();
        assert_eq!((p1.n_star, p1.achieved_bound.clone()), (2000, q(1, 20)));
        assert_eq!(p1.effective_sample_size, q(5, 1));
        let p2 = min_sample_size(&q(1, 20), &q(1, 20), 2).unwrap();
        assert_eq!(p2.n_star, 775);
        assert!(cheb_bound(774, &q(1, 20), 2).unwrap() > q(1, 20));
        let p3 = min_sample_size(&q(1, 2), &q(1, 1), 1).unwrap();
        assert_eq!(p3.n_star, 1);
        assert!(min_sample_size(&q(1, 1), &q(1, 2), 1).is_err());
        assert!(min_sample_size(&q(1, 2), &q(0, 1), 1).is_err());
        assert!(min_sample_size(&q(1, 2), &q(3, 2), 1).is_err());
    }

    #[test]
    fn resource_limit() {
        match min_sample_size(&q(1, 1_000_000), &q(1, 1_000_000), 1) {
            Err(Error::ResourceLimit { cap, .. }) => assert_eq!(cap, MAX_SAMPLE_SIZE),
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn trivial_profile() {
        let prof = bound_profile(1, &q(1, 2), 3, false).unwrap();
        assert!(prof.rows.iter().all(|r| r.bound == q(1, 1)));
        assert_eq!(prof.best_m, 1);
    }

    #[test]
    fn tails() {
        assert_eq!(exact_tail(1, &q(1, 2), &q(2, 5)).unwrap(), q(1, 1));
        assert_eq!(exact_tail(2, &q(1, 2), &q(2, 5)).unwrap(), q(1, 2));
        // |k − 1| > 1 never happens for n = 2 at ε = 1/2: the inequality is strict
        assert_eq!(exact_tail(2, &q(1, 2), &q(1, 2)).unwrap(), q(0, 1));
        assert!(exact_tail(2, &q(3, 2), &q(1, 2)).is_err());
    }

    #[test]
    fn asymptotics() {
        assert_eq!(asymptotic_profile(&q(1, 1), 5).unwrap().m_star, 2);
        assert_eq!(asymptotic_profile(&q(1, 8), 5).unwrap().m_star, 1);
        let five = asymptotic_profile(&q(5, 1), 15).unwrap();
        assert_eq!(five.m_star, 10);
        assert_eq!(five.threshold, q(19, 2));
        assert_eq!(rule_of_thumb_order(&q(1, 1)).unwrap(), 4);
        assert_eq!(rule_of_thumb_order(&q(5, 1)).unwrap(), 20);
        assert_eq!(rule_of_thumb_order(&q(1, 4)).unwrap(), 2);
        assert_eq!(rule_of_thumb_order(&q(1, 8)).unwrap(), 2);
        assert!(rule_of_thumb_order(&q(0, 1)).is_err());
        // B_1 = (2!/1!)/8 / ñ = 1/(4ñ): the second-moment bound at every n
        assert_eq!(asymptotic_bound(&q(3, 1), 1), q(1, 12));
    }

    #[test]
    fn ratio_tie_goes_to_smaller_order() {
        // ñ = 3/4: 2ñ − 1/2 = 1, so B_2 = B_1
        let prof = asymptotic_profile(&q(3, 4), 4).unwrap();
        assert_eq!(prof.rows[0].1, prof.rows[1].1);
        assert_eq!(prof.m_star, 1);
        assert_eq!(rule_of_thumb_order(&q(3, 4)).unwrap(), 2);
    }
}
