//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;
use crate::ExactRational;

/// `coeffs[i]` is the coefficient of `p^i`; trailing zeros are trimmed so the
/// last stored coefficient is the leading one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `p`
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `1 − p`
    pub fn one_minus_x() -> Self {
        Self::from_i64s(&[1, -1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(BigInt::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Horner evaluation in any scalar field.
    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + T::from_integer(c);
        }
        acc
    }

    /// Exact evaluation at a rational point, done over the integers:
    /// returns `den^deg · P(num/den)` folded back into a rational.
    pub fn eval_exact(&self, x: &ExactRational) -> ExactRational {
        let Some(deg) = self.degree() else {
            return ExactRational::zero();
        };
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        ExactRational::new(acc, den.pow(deg as u32))
    }

    /// Sign of `P(x)` without forming the reduced rational.
    pub fn sign_at(&self, x: &ExactRational) -> i8 {
        let Some(_) = self.degree() else { return 0 };
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        sign_of(&acc)
    }

    /// `P(q(p))`.
    pub fn compose(&self, inner: &IntPolynomial) -> Self {
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPolynomial::constant(c.clone());
        }
        acc
    }

    /// `P(1 − p)`.
    pub fn reflect(&self) -> Self {
        self.compose(&Self::one_minus_x())
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divides out the content, keeping the sign of every coefficient.
    pub fn primitive_keep_sign(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.content();
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `|lc(d)|^(deg a − deg d + 1) · a mod d`.
    ///
    /// Scaling by a positive power keeps the sign of the true remainder, which
    /// is what a Sturm chain needs.
    pub fn pseudo_rem(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let dd = divisor.degree().expect("pseudo_rem by zero polynomial");
        let lc = divisor.leading().expect("nonzero").abs();
        let lc_signed = divisor.leading().expect("nonzero").clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            // r <- |lc| r − sgn(lc) r_lead x^(dr−dd) d
            let lead = r.leading().expect("nonzero").clone();
            let factor = if lc_signed.is_negative() { -lead } else { lead };
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                next[i + dr - dd] -= &factor * c;
            }
            r = IntPolynomial::new(next);
        }
        r
    }

    /// Exact division over the rationals, result made primitive.
    ///
    /// Intended for cases where `divisor` divides `self` exactly (square-free
    /// parts); the quotient is then an integer polynomial up to a constant.
    pub fn exact_quotient_primitive(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let dd = divisor.degree().expect("division by zero polynomial");
        let Some(dn) = self.degree() else { return IntPolynomial::zero() };
        if dn < dd {
            return IntPolynomial::zero();
        }
        let lc = ExactRational::from_integer(divisor.leading().expect("nonzero").clone());
        let mut rem: Vec<ExactRational> =
            self.coeffs.iter().map(|c| ExactRational::from_integer(c.clone())).collect();
        let mut quot = vec![ExactRational::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let q = &rem[k + dd] / &lc;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * ExactRational::from_integer(c.clone());
            }
            quot[k] = q;
        }
        let den_lcm = quot.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        IntPolynomial::new(
            quot.into_iter()
                .map(|q| (q * ExactRational::from_integer(den_lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// Primitive gcd via the primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// `P / gcd(P, P′)`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> IntPolynomial {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.primitive()
        } else {
            self.exact_quotient_primitive(&g)
        }
    }

    /// Upper bound on `max |P(p)|` over `[0, 1]`: the sum of absolute coefficients.
    pub fn abs_coeff_sum(&self) -> BigInt {
        self.coeffs.iter().map(Signed::abs).sum()
    }
}

pub(crate) fn sign_of(v: &BigInt) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "p")?,
                (1, false) => write!(f, "{mag}p")?,
                (_, true) => write!(f, "p^{i}")?,
                (_, false) => write!(f, "{mag}p^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(poly(&[0, 1, -4, 6, -3]).derivative(), poly(&[1, -8, 18, -12]));
        assert!(poly(&[7]).derivative().is_zero());
        assert_eq!(poly(&[0, 1, -1]).derivative(), poly(&[1, -2]));
    }

    #[test]
    fn trimming_and_degree() {
        assert_eq!(poly(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(poly(&[0, 0]).degree(), None);
        assert_eq!(format!("{}", poly(&[0, 1, -4, 6, -3])), "p - 4p^2 + 6p^3 - 3p^4");
    }

    #[test]
    fn evaluation_routes_agree() {
        let p = poly(&[3, -7, 0, 11, -2, 5]);
        for (n, d) in [(1, 2), (-3, 7), (22, 5), (0, 1)] {
            let x = q(n, d);
            assert_eq!(p.eval_exact(&x), p.eval(&x));
            let s = p.sign_at(&x);
            let v = p.eval_exact(&x);
            assert_eq!(s, sign_of(&v.numer().clone()));
        }
        assert_eq!(p.eval(&2.0f64), 3.0 - 14.0 + 88.0 - 32.0 + 160.0);
    }

    #[test]
    fn reflection() {
        // p(1-p) is symmetric
        let pq = poly(&[0, 1, -1]);
        assert_eq!(pq.reflect(), pq);
        assert_eq!(poly(&[0, 1]).reflect(), poly(&[1, -1]));
    }

    #[test]
    fn gcd_and_square_free() {
        // (p-1)^2 (p+2) and (p-1)(p-3)
        let a = &poly(&[-1, 1]).pow(2) * &poly(&[2, 1]);
        let b = &poly(&[-1, 1]) * &poly(&[-3, 1]);
        assert_eq!(a.gcd(&b), poly(&[-1, 1]));
        assert_eq!(a.square_free_part(), &poly(&[-1, 1]) * &poly(&[2, 1]));
        let c = &poly(&[1, -2]).pow(3) * &poly(&[1, 0, 1]);
        assert_eq!(c.square_free_part(), (&poly(&[1, -2]) * &poly(&[1, 0, 1])).primitive());
    }

    #[test]
    fn pseudo_remainder_sign() {
        // x^2 - 2 by -2x + 1: true remainder is 1/4 - 2 = -7/4, negative
        let r = poly(&[-2, 0, 1]).pseudo_rem(&poly(&[1, -2]));
        assert_eq!(r.degree(), Some(0));
        assert!(r.leading().unwrap().is_negative());
    }
}
