//! Exact scalar fields: rationals and Gaussian rationals.
//!
//! Both fields carry a conjugation; on plain rationals it is the identity.
//! All arithmetic is exact — no floating point anywhere in the crate.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

fn rzero() -> BigRational {
    <BigRational as Zero>::zero()
}
fn rone() -> BigRational {
    <BigRational as One>::one()
}
fn r_is_zero(r: &BigRational) -> bool {
    Zero::is_zero(r)
}

/// An exact scalar field with a conjugation involution.
///
/// `conj` is the identity on `Rat` and complex conjugation on `GaussRat`;
/// `conj(conj(s)) = s` always holds.
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Construct from a `(numerator, denominator)` pair of the real part
    /// and a pair for the imaginary part. Fields without an imaginary unit
    /// must reject nonzero imaginary input by returning `None`.
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; `None` on zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    /// Real and imaginary parts as exact rationals.
    fn parts(&self) -> (BigRational, BigRational);

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Exact rational scalar.
pub type Rat = BigRational;

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        rzero()
    }
    fn one() -> Self {
        rone()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self> {
        if r_is_zero(&im) {
            Some(re)
        } else {
            None
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn parts(&self) -> (BigRational, BigRational) {
        (self.clone(), rzero())
    }
}

/// Gaussian rational `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }
    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(rzero(), rone())
    }
    /// Squared modulus `re² + im²` (a nonnegative rational).
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if r_is_zero(&self.im) {
            write!(f, "{}", fmt_rat(&self.re))
        } else if r_is_zero(&self.re) {
            write!(f, "{}i", fmt_rat(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", fmt_rat(&self.re), fmt_rat(&-&self.im))
        } else {
            write!(f, "{}+{}i", fmt_rat(&self.re), fmt_rat(&self.im))
        }
    }
}

impl Scalar for GaussRat {
    fn zero() -> Self {
        GaussRat::new(rzero(), rzero())
    }
    fn one() -> Self {
        GaussRat::new(rone(), rzero())
    }
    fn from_i64(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), rzero())
    }
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self> {
        Some(GaussRat::new(re, im))
    }
    fn is_zero(&self) -> bool {
        r_is_zero(&self.re) && r_is_zero(&self.im)
    }
    fn add(&self, other: &Self) -> Self {
        GaussRat::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }
    fn mul(&self, other: &Self) -> Self {
        GaussRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if r_is_zero(&n) {
            return None;
        }
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }
    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }
    fn parts(&self) -> (BigRational, BigRational) {
        (self.re.clone(), self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_laws() {
        let a = Rat::from_i64(3).div(&Rat::from_i64(7)).unwrap();
        let b = Rat::from_i64(-2).div(&Rat::from_i64(5)).unwrap();
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        assert_eq!(a.conj(), a);
        assert!(<Rat as Scalar>::zero().inv().is_none());
    }

    #[test]
    fn gaussian_conjugation_is_involutive() {
        let z = GaussRat::new(
            BigRational::new(BigInt::from(3), BigInt::from(4)),
            BigRational::new(BigInt::from(-5), BigInt::from(2)),
        );
        assert_eq!(z.conj().conj(), z);
        // z · conj(z) = |z|² is real.
        let n = z.mul(&z.conj());
        assert!(r_is_zero(&n.im));
        assert_eq!(n.re, z.norm_sq());
    }

    #[test]
    fn gaussian_inverse() {
        let z = GaussRat::new(<Rat as Scalar>::from_i64(1), <Rat as Scalar>::from_i64(2));
        let w = z.inv().unwrap();
        assert!(z.mul(&w).is_one());
        assert_eq!(GaussRat::i().mul(&GaussRat::i()), GaussRat::from_i64(-1));
    }
}
