use std::fmt;

use super::Rational;

/// Commutative ring with exact arithmetic.
///
/// Every scalar and polynomial type of the crate implements this; matrix
/// multiplication, Kronecker products and symmetric powers only need it.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let step = if n >= 0 { one.clone() } else { one.neg() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&step);
        }
        acc
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

/// Integral domain with exact division (used by fraction-free elimination).
pub trait ExactDivRing: Ring {
    /// Returns `self / rhs` when the division is exact.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// Field with exact arithmetic.
pub trait Field: Ring + fmt::Display {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    fn from_rational(q: &Rational) -> Self;
}

impl<F: Field> ExactDivRing for F {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self.div(rhs))
        }
    }
}
