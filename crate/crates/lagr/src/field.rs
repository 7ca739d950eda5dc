//! Scalar fields for the exact linear algebra.
//!
//! Everything in the crate is written against [`Field`]. The concrete
//! instances are the rationals (the default), a quadratic extension
//! `Q(sqrt D)` and a small prime field used for random sampling.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse. Panics on zero, like integer division.
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Rational number from a numerator/denominator pair.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational square root, if it exists.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Squarefree integer `D` with `x = D * s^2` for a rational `s`.
pub fn squarefree_part(x: &BigRational) -> i64 {
    // x = p/q ~ p*q modulo squares
    let mut m: BigInt = x.numer() * x.denom();
    let neg = m.is_negative();
    m = m.abs();
    let mut out = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= m {
        let mut e = 0u32;
        while (&m % &f).is_zero() {
            m /= &f;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &f;
        }
        f += 1;
    }
    out *= m;
    let v: i64 = out.try_into().unwrap_or(i64::MAX);
    if neg {
        -v
    } else {
        v
    }
}

/// Element `a + b sqrt(D)` of the quadratic extension `Q(sqrt D)`.
///
/// `D` must not be a rational square; the constructors do not check it.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct QuadExt<const D: i64> {
    pub a: BigRational,
    pub b: BigRational,
}

impl<const D: i64> QuadExt<D> {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn sqrt_d() -> Self {
        QuadExt { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a^2 - D b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - qi(D) * &self.b * &self.b
    }
}

impl<const D: i64> From<BigRational> for QuadExt<D> {
    fn from(a: BigRational) -> Self {
        QuadExt { a, b: BigRational::zero() }
    }
}

impl<const D: i64> fmt::Display for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, D)
        }
    }
}

impl<const D: i64> Zero for QuadExt<D> {
    fn zero() -> Self {
        QuadExt { a: BigRational::zero(), b: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<const D: i64> One for QuadExt<D> {
    fn one() -> Self {
        QuadExt { a: BigRational::one(), b: BigRational::zero() }
    }
}

impl<const D: i64> Add for QuadExt<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadExt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<const D: i64> Sub for QuadExt<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuadExt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<const D: i64> Neg for QuadExt<D> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadExt { a: -self.a, b: -self.b }
    }
}

impl<const D: i64> Mul for QuadExt<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.a * &o.a + qi(D) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b }
    }
}

impl<const D: i64> Div for QuadExt<D> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt {D})");
        let c = o.conj();
        let p = self * c;
        QuadExt { a: p.a / &n, b: p.b / n }
    }
}

impl<const D: i64> Field for QuadExt<D> {
    fn from_i64(v: i64) -> Self {
        qi(v).into()
    }
}

/// Residue class modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero mod {P}");
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_ext_inverse() {
        type K = QuadExt<2>;
        let x = K::new(qi(3), qi(1));
        let y = x.clone().inv();
        assert_eq!(x * y, K::one());
        let s = K::sqrt_d();
        assert_eq!(s.clone() * s, K::from_i64(2));
    }

    #[test]
    fn prime_field() {
        type F = Fp<10007>;
        let x = F::from_i64(-5);
        assert_eq!(x + F::from_i64(5), F::zero());
        assert_eq!(x * x.inv(), F::one());
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(&q(8, 1)), 2);
        assert_eq!(squarefree_part(&q(-2, 9)), -2);
        assert_eq!(squarefree_part(&q(1, 12)), 3);
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
    }
}
