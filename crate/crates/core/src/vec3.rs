//! Integer triples and the handful of exact vector operations the
//! minimal-point machinery needs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

/// A triple of ring elements. [`Vec3Z`] is the integer case used everywhere
/// points are concerned; other rings (polynomials) reuse the same forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vec3<R>(pub [R; 3]);

pub type Vec3Z = Vec3<BigInt>;

impl<R> Vec3<R> {
    pub fn new(x0: R, x1: R, x2: R) -> Self {
        Vec3([x0, x1, x2])
    }

    pub fn x0(&self) -> &R {
        &self.0[0]
    }

    pub fn x1(&self) -> &R {
        &self.0[1]
    }

    pub fn x2(&self) -> &R {
        &self.0[2]
    }
}

impl Vec3Z {
    pub fn from_i64(x0: i64, x1: i64, x2: i64) -> Self {
        Vec3([x0.into(), x1.into(), x2.into()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Sup norm `max |x_i|`.
    pub fn sup_norm(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> BigInt {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// gcd of the absolute values of the coordinates; zero only for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content() == BigInt::from(1)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Vec3([&self.0[0] * k, &self.0[1] * k, &self.0[2] * k])
    }

    /// Representative with positive first nonzero coordinate.
    pub fn sign_normalized(&self) -> Self {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }
}

impl<R: fmt::Display> fmt::Display for Vec3<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for Vec3Z {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<R: Clone + Add<Output = R>> Add for Vec3<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Vec3([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<R: Clone + Sub<Output = R>> Sub for Vec3<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Vec3([a0 - b0, a1 - b1, a2 - b2])
    }
}

impl<R: Neg<Output = R>> Neg for Vec3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2] = self.0;
        Vec3([-a0, -a1, -a2])
    }
}

impl<'a, R> Mul<&'a R> for Vec3<R>
where
    R: Clone + Mul<Output = R>,
{
    type Output = Self;
    fn mul(self, k: &'a R) -> Self {
        let [a0, a1, a2] = self.0;
        Vec3([a0 * k.clone(), a1 * k.clone(), a2 * k.clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_and_primitivity() {
        assert_eq!(Vec3Z::from_i64(2, 4, 6).content(), BigInt::from(2));
        assert_eq!(Vec3Z::from_i64(0, 0, 0).content(), BigInt::from(0));
        assert_eq!(Vec3Z::from_i64(-3, 1, 1).content(), BigInt::from(1));
        assert!(Vec3Z::from_i64(-3, 1, 1).is_primitive());
        assert!(!Vec3Z::from_i64(0, 0, 0).is_primitive());
        assert!(!Vec3Z::from_i64(0, -4, 2).is_primitive());
    }

    #[test]
    fn sign_normalization() {
        assert_eq!(
            Vec3Z::from_i64(-1, 2, -3).sign_normalized(),
            Vec3Z::from_i64(1, -2, 3)
        );
        assert_eq!(
            Vec3Z::from_i64(0, -2, 3).sign_normalized(),
            Vec3Z::from_i64(0, 2, -3)
        );
    }

    #[test]
    fn norms() {
        let v = Vec3Z::from_i64(4, -5, 7);
        assert_eq!(v.sup_norm(), BigInt::from(7));
        assert_eq!(v.norm_sq(), BigInt::from(90));
    }
}
