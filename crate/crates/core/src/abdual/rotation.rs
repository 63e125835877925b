use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A point `e^{2πiq}` of finite order on the circle, stored as the exact
/// reduced fraction `q ∈ [0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation<T: Scalar> {
    q: Ratio<T>,
}

impl<T: Scalar> Rotation<T> {
    pub fn zero() -> Self {
        Rotation { q: Ratio::from_integer(T::zero()) }
    }

    /// `num / den` reduced modulo 1. Panics if `den == 0`.
    pub fn new(num: T, den: T) -> Self {
        assert!(!den.is_zero(), "rotation with zero denominator");
        let r = Ratio::new(num, den);
        Rotation { q: r.clone() - r.floor() }
    }

    pub fn numer(&self) -> &T {
        self.q.numer()
    }

    pub fn denom(&self) -> &T {
        self.q.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.q.numer().is_zero()
    }

    /// Multiplicative order of the circle value.
    pub fn order(&self) -> T {
        self.q.denom().clone()
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.q.numer().clone() * k, self.q.denom().clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.q.numer().to_f64().unwrap_or(f64::NAN) / self.q.denom().to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Scalar> Add for Rotation<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.q + rhs.q;
        Rotation { q: s.clone() - s.floor() }
    }
}

impl<T: Scalar> Neg for Rotation<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let s = -self.q;
        Rotation { q: s.clone() - s.floor() }
    }
}

impl<T: Scalar> Sub for Rotation<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> std::iter::Sum for Rotation<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Scalar> fmt::Debug for Rotation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q.numer(), self.q.denom())
    }
}

impl<T: Scalar> fmt::Display for Rotation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RotationJson<T> {
    num: T,
    den: T,
}

impl<T: Scalar + Serialize> Serialize for Rotation<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RotationJson { num: self.q.numer().clone(), den: self.q.denom().clone() }.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Rotation<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = RotationJson::<T>::deserialize(d)?;
        if j.den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rotation::new(j.num, j.den))
    }
}
