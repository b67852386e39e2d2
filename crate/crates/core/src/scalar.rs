use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

/// Field elements the moment kernels can be evaluated in.
///
/// `BigRational` is exact; `f64` and `f32` are provided for quick
/// approximate evaluation and are never used to decide anything.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> + PartialOrd {
    fn from_integer(v: &BigInt) -> Self;

    fn from_rational(v: &BigRational) -> Self;

    fn from_u64(v: u64) -> Self {
        Self::from_integer(&BigInt::from(v))
    }

    fn from_i64(v: i64) -> Self {
        Self::from_integer(&BigInt::from(v))
    }

    /// `self^exp` by repeated squaring.
    fn powu(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl Scalar for BigRational {
    fn from_integer(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }

    fn powu(&self, exp: u64) -> Self {
        // powers of coprime parts stay coprime
        let e = u32::try_from(exp).expect("exponent fits in u32");
        BigRational::new_raw(self.numer().pow(e), self.denom().pow(e))
    }
}

impl Scalar for f64 {
    fn from_integer(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn from_rational(v: &BigRational) -> Self {
        rational_to_f64(v)
    }
}

impl Scalar for f32 {
    fn from_integer(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }

    fn from_rational(v: &BigRational) -> Self {
        rational_to_f64(v) as f32
    }
}

/// Nearest-ish `f64` of a rational whose numerator and denominator may both
/// overflow `f64` on their own.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let num = v.numer();
    let den = v.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // scale so the quotient carries ~64 significant bits
    let (n, d) = if shift > 64 {
        (num.clone(), den.clone() << (shift - 64) as usize)
    } else if shift < 64 {
        (num.clone() << (64 - shift) as usize, den.clone())
    } else {
        (num.clone(), den.clone())
    };
    let q = (n / d).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi((shift - 64) as i32)
}

pub(crate) fn is_unit_interval<T: Scalar>(p: &T) -> bool {
    *p >= T::zero() && *p <= T::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn powu_matches_repeated_multiplication() {
        let x = BigRational::new(BigInt::from(-3), BigInt::from(7));
        let mut acc = BigRational::one();
        for e in 0..12u64 {
            assert_eq!(x.powu(e), acc);
            assert_eq!(Scalar::powu(&-2.5f64, e), (-2.5f64).powi(e as i32));
            acc *= &x;
        }
    }

    #[test]
    fn huge_rational_converts() {
        let big = BigInt::from(3u8).pow(800);
        let v = BigRational::new(big.clone() * 2, big);
        assert!((rational_to_f64(&v) - 2.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(2u8).pow(1100));
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let third = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert!((rational_to_f64(&third) + 1.0 / 3.0).abs() < 1e-16);
    }
}
