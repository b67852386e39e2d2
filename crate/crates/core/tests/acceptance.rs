//! Acceptance criteria 1–12, one PASS/FAIL line each, with wall-clock budgets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chebmom::argmax::{argmax_report, compute_mn, mn_table, Location};
use chebmom::montecarlo::{mc_tail, mc_tail_serial, z_score};
use chebmom::moments::{gaussian_even_moment, moment, MomentMethod};
use chebmom::planner::{asymptotic_profile, best_plan, cheb_bound, exact_tail, rule_of_thumb_order, PlanQuery};
use chebmom::recurrence::recurrence_coeffs;
use chebmom::scalar::rational_to_f64;
use chebmom::sturm::RootInterval;
use chebmom::ExactRational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn plan_pinned(m: u32) -> std::result::Result<chebmom::planner::PlanResult, String> {
    let mut query = PlanQuery::new(q(1, 20), q(1, 20));
    query.m = Some(m);
    Ok(ok(best_plan(&query))?.plan)
}

fn ac1() -> Check {
    let plan = plan_pinned(1)?;
    ensure(plan.n_star == 2000, format!("n_star = {}", plan.n_star))?;
    ensure(plan.achieved_bound == q(1, 20), format!("bound = {}", plan.achieved_bound))?;
    Ok("n_star = 2000, bound = 1/20".into())
}

fn ac2() -> Check {
    let plan = plan_pinned(2)?;
    ensure(plan.n_star == 775, format!("n_star = {}", plan.n_star))?;
    let eps = q(1, 20);
    let before = ok(cheb_bound(774, &eps, 2))?;
    let at = ok(cheb_bound(775, &eps, 2))?;
    ensure(before > eps && eps >= at, format!("bound(774) = {before}, bound(775) = {at}"))?;
    Ok(format!("n_star = 775, bound(774) = {before} > 1/20 >= bound(775) = {at}"))
}

fn ac3() -> Check {
    for n in 1..=100u64 {
        for method in MomentMethod::ALL {
            if method == MomentMethod::BruteForce && n > chebmom::moments::BRUTE_FORCE_CAP {
                continue;
            }
            let v = ok(moment(n, 1, &q(1, 2), method))?.value;
            ensure(v == q(n as i64, 4), format!("n={n} {method}: {v}"))?;
        }
    }
    Ok("E S_n^2(1/2) = n/4 for n = 1..100".into())
}

fn ac4() -> Check {
    let one = ok(asymptotic_profile(&q(1, 1), 25))?;
    ensure(one.m_star == 2, format!("m_star(1) = {}", one.m_star))?;
    let five = ok(asymptotic_profile(&q(5, 1), 25))?;
    ensure(five.m_star == 10, format!("m_star(5) = {}", five.m_star))?;
    let order = ok(rule_of_thumb_order(&q(5, 1)))?;
    ensure(order == 20, format!("order(5) = {order}"))?;
    Ok("m_star(1) = 2, m_star(5) = 10, order 20".into())
}

fn ac5() -> Check {
    let half = q(1, 2);
    for n in 1..=12u64 {
        for m in 1..=8u32 {
            let values: Vec<ExactRational> = MomentMethod::ALL
                .iter()
                .map(|&method| moment(n, m, &half, method).map(|v| v.value))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            ensure(values.windows(2).all(|w| w[0] == w[1]), format!("n={n} m={m}: {values:?}"))?;
        }
    }
    Ok("5 routes agree on 96 cases".into())
}

/// `c` lies in `[lo, hi]` where `c = 1/2 ± √s`, decided by squaring.
fn brackets_sqrt(r: &RootInterval, s: &ExactRational) -> bool {
    let half = q(1, 2);
    let (a, b) = if r.hi <= half {
        (&half - &r.hi, &half - &r.lo)
    } else {
        (&r.lo - &half, &r.hi - &half)
    };
    !a.is_negative() && &a * &a <= *s && *s <= &b * &b
}

fn ac6() -> Check {
    let r = ok(argmax_report(1, 2, &q(1, 1_000_000_000_000)))?;
    ensure(!r.is_half_argmax, "1/2 reported as argmax")?;
    ensure(r.value_at_half == q(1, 16), format!("P(1/2) = {}", r.value_at_half))?;
    ensure(r.value_at_half < r.max_value_bounds.0, "P(1/2) not below the bracketed maximum")?;
    ensure(r.maximizers.len() == 2, format!("{} maximizers", r.maximizers.len()))?;
    let intervals: Vec<&RootInterval> = r
        .maximizers
        .iter()
        .filter_map(|l| match l {
            Location::Interval(i) => Some(i),
            Location::Exact(_) => None,
        })
        .collect();
    ensure(intervals.len() == 2, "maximizers are not isolating intervals")?;
    ensure(*intervals[1] == intervals[0].reflect(), "maximizers not symmetric")?;
    let twelfth = q(1, 12);
    for i in &intervals {
        ensure(i.width() <= q(1, 10_000_000_000), "interval wider than 1e-10")?;
        ensure(brackets_sqrt(i, &twelfth), "interval misses 1/2 ± √3/6")?;
        ensure(!brackets_sqrt(i, &q(1, 8)), "interval contains 1/2 ± √2/4")?;
    }
    ensure(r.notes.iter().any(|n| n.contains("√2/4")), "no note on 1/2 ± √2/4")?;
    Ok(format!("maximizers at 1/2 ± √3/6, P(1/2) = 1/16 < {:.10}", rational_to_f64(&r.max_value_bounds.0)))
}

fn ac7() -> Check {
    ensure(ok(compute_mn(1, 5))?.m_n == 1, "m_1 != 1")?;
    let table = ok(mn_table(1, 20, 15))?;
    let width = q(1, 1 << 20);
    for row in &table.rows {
        for m in 1..=row.m_n {
            ensure(ok(argmax_report(row.n, m, &width))?.is_half_argmax, format!("n={} fails at m={m}", row.n))?;
        }
        if !row.capped {
            let next = ok(argmax_report(row.n, row.m_n + 1, &width))?;
            ensure(!next.is_half_argmax, format!("n={} holds at m={}", row.n, row.m_n + 1))?;
        }
    }
    let mns: Vec<String> = table.rows.iter().map(|r| r.m_n.to_string()).collect();
    Ok(format!("m_n for n = 1..20: {}", mns.join(" ")))
}

fn ac8() -> Check {
    let mut checked = 0usize;
    for n in [10u64, 50, 200] {
        let mn = ok(compute_mn(n, 40))?;
        ensure(!mn.capped, format!("m_n for n={n} exceeds the cap"))?;
        for eps in [q(1, 10), q(1, 20)] {
            let tails: Vec<ExactRational> =
                (0..=40).map(|j| exact_tail(n, &q(j, 40), &eps)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            for m in 1..=mn.m_n {
                let bound = ok(cheb_bound(n, &eps, m))?;
                for (j, t) in tails.iter().enumerate() {
                    ensure(*t <= bound, format!("n={n} eps={eps} m={m} p={j}/40"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} exact comparisons"))
}

fn ac9() -> Check {
    let n = 10_000u64;
    let mut worst = 0f64;
    for m in 1..=4u32 {
        let v = ok(moment(n, m, &q(1, 2), MomentMethod::Composition))?.value;
        let scale = q(n as i64, 4).pow(m as i32) * gaussian_even_moment(m);
        let rel = rational_to_f64(&(v / scale - q(1, 1))).abs();
        ensure(rel < 1e-2, format!("m={m}: relative error {rel}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("largest relative error {worst:.3e}"))
}

fn ac10() -> Check {
    for n in 1..=9u64 {
        let coeffs = ok(recurrence_coeffs(n))?;
        ensure(coeffs.residual().iter().all(Zero::is_zero), format!("n={n}: nonzero residual"))?;
        for m in 1..=12u32 {
            let a = ok(moment(n, m, &q(1, 2), MomentMethod::Recurrence))?.value;
            let b = ok(moment(n, m, &q(1, 2), MomentMethod::BinomSum))?.value;
            ensure(a == b, format!("n={n} m={m}"))?;
        }
    }
    Ok("recurrence = binomial sum, residuals zero".into())
}

fn ac11() -> Check {
    for nt in [q(1, 4), q(1, 1), q(5, 1), q(100, 1)] {
        let profile = ok(asymptotic_profile(&nt, 21))?;
        for w in profile.rows.windows(2) {
            let m = w[0].0;
            let expect = q(2 * i64::from(m) + 1, 1) / (q(4, 1) * &nt);
            ensure(&w[1].1 / &w[0].1 == expect, format!("ñ={nt} m={m}"))?;
        }
    }
    Ok("80 exact ratios".into())
}

fn ac12() -> Check {
    let cases = [(1u64, 0.5, 0.4, 10_000u64, 42u64), (100, 0.5, 0.05, 100_000, 1), (10, 0.3, 0.2, 100_000, 7)];
    let mut zs = Vec::new();
    for (n, p, eps, samples, seed) in cases {
        let a = ok(mc_tail(n, p, eps, samples, seed))?;
        let b = ok(mc_tail(n, p, eps, samples, seed))?;
        let c = ok(mc_tail_serial(n, p, eps, samples, seed))?;
        ensure(a == b && a == c, format!("n={n}: runs differ"))?;
        let pr = ok(chebmom::number::parse_rational(&p.to_string()))?;
        let er = ok(chebmom::number::parse_rational(&eps.to_string()))?;
        let exact = rational_to_f64(&ok(exact_tail(n, &pr, &er))?);
        let z = z_score(&a, exact);
        ensure(z <= 4.0, format!("n={n}: {} vs {exact}, z = {z}", a.estimate))?;
        zs.push(format!("{z:.2}"));
    }
    Ok(format!("z-scores {}", zs.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("AC1 plan m=1 gives n = 2000", ac1, 1),
        ("AC2 plan m=2 gives n = 775", ac2, 1),
        ("AC3 second moment n/4", ac3, 1),
        ("AC4 asymptotic optimum", ac4, 1),
        ("AC5 five-way agreement", ac5, 120),
        ("AC6 single-trial counterexample", ac6, 5),
        ("AC7 m_n table", ac7, 600),
        ("AC8 bound validity", ac8, 120),
        ("AC9 Gaussian limit", ac9, 30),
        ("AC10 recurrence identity", ac10, 30),
        ("AC11 ratio identity", ac11, 1),
        ("AC12 Monte Carlo", ac12, 60),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
