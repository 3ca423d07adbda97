//! Exact complex rationals and rational square-root bounds, used to certify
//! numerical root enclosures.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ComplexRat { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        ComplexRat::real(BigRational::zero())
    }

    pub fn one() -> Self {
        ComplexRat::real(BigRational::one())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        ComplexRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Exact quotient; panics on division by zero.
    pub fn div(&self, other: &ComplexRat) -> ComplexRat {
        let n = other.norm_sqr();
        assert!(!n.is_zero(), "complex division by zero");
        let num = self * &other.conj();
        ComplexRat { re: num.re / &n, im: num.im / n }
    }

    pub fn scale(&self, c: &BigRational) -> ComplexRat {
        ComplexRat { re: &self.re * c, im: &self.im * c }
    }

    pub fn powu(&self, mut n: u32) -> ComplexRat {
        let mut acc = ComplexRat::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Round both parts to the nearest multiple of `2^-bits`.
    pub fn round_dyadic(&self, bits: u32) -> ComplexRat {
        ComplexRat { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn from_f64(re: f64, im: f64) -> Option<ComplexRat> {
        Some(ComplexRat { re: BigRational::from_float(re)?, im: BigRational::from_float(im)? })
    }
}

impl Add for &ComplexRat {
    type Output = ComplexRat;
    fn add(self, rhs: &ComplexRat) -> ComplexRat {
        ComplexRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexRat {
    type Output = ComplexRat;
    fn sub(self, rhs: &ComplexRat) -> ComplexRat {
        ComplexRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexRat {
    type Output = ComplexRat;
    fn mul(self, rhs: &ComplexRat) -> ComplexRat {
        ComplexRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ComplexRat {
    type Output = ComplexRat;
    fn neg(self) -> ComplexRat {
        ComplexRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

pub fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

pub fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

/// Rational bounds `lo <= sqrt(q) < hi` with `hi - lo = 2^-bits`.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    let scale = pow2(bits);
    let n = (q * BigRational::from_integer(&scale * &scale)).floor().to_integer();
    let s = n.sqrt();
    (BigRational::new(s.clone(), scale.clone()), BigRational::new(s + 1, scale))
}

/// Evaluate an integer polynomial (ascending coefficients) at a complex point.
pub fn eval_poly(coeffs: &[BigInt], z: &ComplexRat) -> ComplexRat {
    let mut acc = ComplexRat::zero();
    for c in coeffs.iter().rev() {
        acc = &acc * z;
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_bounds_bracket() {
        let two = BigRational::from_integer(BigInt::from(2));
        let (lo, hi) = sqrt_bounds(&two, 40);
        assert!(&lo * &lo <= two && &hi * &hi > two);
        let four = BigRational::from_integer(BigInt::from(4));
        let (lo, _) = sqrt_bounds(&four, 10);
        assert_eq!(lo, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn complex_ops() {
        let z = ComplexRat::from_f64(1.0, 1.0).unwrap();
        assert_eq!(z.powu(4), ComplexRat::real(BigRational::from_integer(BigInt::from(-4))));
        let w = z.div(&z.conj());
        assert_eq!(w, ComplexRat::new(BigRational::zero(), BigRational::one()));
    }
}
