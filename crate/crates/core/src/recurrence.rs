//! Linear recurrence in `m` for the half moments `E S_n^{2m}(1/2)`.
//!
//! With `ℓ = ⌊(n−1)/2⌋` and `a_k = (2k − n)^2`, the coefficients `c` solve
//! the Vandermonde system `Σ_j c_j a_k^j = a_k^{ℓ+1}` (`k = 0..=ℓ`), and
//!
//! ```text
//! E S^{2m+2ℓ+2} = Σ_j c_j 2^{2j−2ℓ−2} E S^{2m+2j}
//! ```
//!
//! The system is solved through `x^{ℓ+1} − Σ_j c_j x^j = Π_k (x − a_k)`, then
//! checked by substituting back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::moments::binomial_sum;
use crate::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCoeffs {
    pub n: u64,
    pub ell: usize,
    pub a: Vec<ExactRational>,
    pub c: Vec<ExactRational>,
}

impl RecurrenceCoeffs {
    /// `V c − rhs`, entry by entry, with each row `Σ_j c_j a_k^j − a_k^{ℓ+1}`
    /// evaluated by Horner's rule.
    pub fn residual(&self) -> Vec<ExactRational> {
        // a and c are integral here, so the rational arithmetic can stay on the numerators
        let integral = self.a.iter().chain(&self.c).all(|x| x.is_integer());
        self.a
            .iter()
            .map(|ak| {
                if integral {
                    let a = ak.to_integer();
                    let r = self.c.iter().rev().fold(-BigInt::one(), |h, cj| h * &a + cj.numer());
                    ExactRational::from_integer(r)
                } else {
                    self.c.iter().rev().fold(-ExactRational::one(), |h, cj| h * ak + cj)
                }
            })
            .collect()
    }
}

#[cfg(test)]
fn vandermonde_system(a: &[ExactRational]) -> (Vec<Vec<ExactRational>>, Vec<ExactRational>) {
    use crate::scalar::Scalar;
    let dim = a.len();
    let matrix = a
        .iter()
        .map(|ak| (0..dim).map(|j| ak.powu(j as u64)).collect())
        .collect();
    let rhs = a.iter().map(|ak| ak.powu(dim as u64)).collect();
    (matrix, rhs)
}

/// Gaussian elimination with exact pivots. `None` if singular.
pub fn solve_exact(
    mut matrix: Vec<Vec<ExactRational>>,
    mut rhs: Vec<ExactRational>,
) -> Option<Vec<ExactRational>> {
    let dim = rhs.len();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].recip();
        for x in &mut matrix[col][col..] {
            *x *= &inv;
        }
        rhs[col] *= &inv;
        for r in 0..dim {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            let pivot_row = matrix[col].clone();
            for (x, pv) in matrix[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * pv;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

pub fn recurrence_coeffs(n: u64) -> Result<RecurrenceCoeffs> {
    if n == 0 {
        return Err(crate::error::invalid("n must be at least 1"));
    }
    let ell = ((n - 1) / 2) as usize;
    let a: Vec<ExactRational> = (0..=ell as u64)
        .map(|k| {
            let d = BigInt::from(2 * i128::from(k) - i128::from(n));
            ExactRational::from_integer(&d * &d)
        })
        .collect();
    debug_assert!(a.windows(2).all(|w| w[0] > w[1]), "a_k strictly decreasing");
    // monic Π (x − a_k), lowest degree first
    let mut char_poly = vec![BigInt::one()];
    for ak in &a {
        let ak = ak.to_integer();
        let mut next = vec![BigInt::zero(); char_poly.len() + 1];
        for (i, coef) in char_poly.iter().enumerate() {
            next[i + 1] += coef;
            next[i] -= coef * &ak;
        }
        char_poly = next;
    }
    let c = char_poly[..=ell].iter().map(|x| ExactRational::from_integer(-x)).collect();
    let coeffs = RecurrenceCoeffs { n, ell, a, c };
    if coeffs.residual().iter().any(|r| !r.is_zero()) {
        return Err(Error::Internal(format!("nonzero Vandermonde residual for n = {n}")));
    }
    Ok(coeffs)
}

/// Seeds `E S^2, …, E S^{2(ℓ+1)}` from the binomial sum and steps the
/// recurrence up to half order `m`.
pub fn half_moment_by_recurrence(n: u64, m: u32) -> Result<ExactRational> {
    let coeffs = recurrence_coeffs(n)?;
    let ell = coeffs.ell;
    let order = ell + 1;
    let m = m as usize;
    let mut moments: Vec<ExactRational> = (1..=order.min(m))
        .map(|h| binomial_sum::<ExactRational>(n, h as u32))
        .collect();
    // weights[j] = c_j 2^{2j − 2ℓ − 2}
    let weights: Vec<ExactRational> = coeffs
        .c
        .iter()
        .enumerate()
        .map(|(j, c)| c / ExactRational::from_integer(BigInt::one() << (2 * (order - j))))
        .collect();
    while moments.len() < m {
        let base = moments.len() - order;
        let next = weights
            .iter()
            .zip(&moments[base..])
            .fold(ExactRational::zero(), |s, (w, e)| s + w * e);
        moments.push(next);
    }
    Ok(moments.swap_remove(m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn closed_form_matches_elimination() {
        for n in 1..=15 {
            let coeffs = recurrence_coeffs(n).unwrap();
            let (matrix, rhs) = vandermonde_system(&coeffs.a);
            assert_eq!(solve_exact(matrix, rhs).unwrap(), coeffs.c, "n={n}");
        }
    }

    #[test]
    fn coefficient_examples() {
        let c3 = recurrence_coeffs(3).unwrap();
        assert_eq!(c3.ell, 1);
        assert_eq!(c3.a, vec![q(9, 1), q(1, 1)]);
        assert_eq!(c3.c, vec![q(-9, 1), q(10, 1)]);

        let c1 = recurrence_coeffs(1).unwrap();
        assert_eq!((c1.ell, c1.a.clone(), c1.c.clone()), (0, vec![q(1, 1)], vec![q(1, 1)]));

        let c2 = recurrence_coeffs(2).unwrap();
        assert_eq!((c2.ell, c2.a.clone(), c2.c.clone()), (0, vec![q(4, 1)], vec![q(4, 1)]));
        assert!(recurrence_coeffs(0).is_err());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(half_moment_by_recurrence(3, 3).unwrap(), q(183, 64));
        assert_eq!(half_moment_by_recurrence(1, 5).unwrap(), q(1, 1024));
        assert_eq!(half_moment_by_recurrence(4, 6).unwrap(), binomial_sum::<ExactRational>(4, 6));
    }

    #[test]
    fn residuals_vanish() {
        for n in 1..=25 {
            let c = recurrence_coeffs(n).unwrap();
            assert!(c.residual().iter().all(Zero::is_zero));
            assert_eq!(c.a.len(), c.ell + 1);
        }
    }

    #[test]
    fn solver_detects_singular() {
        let m = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve_exact(m, vec![q(1, 1), q(2, 1)]).is_none());
        let m = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(solve_exact(m, vec![q(3, 1), q(5, 1)]).unwrap(), vec![q(5, 1), q(3, 1)]);
    }
}
