use std::fmt;

use super::field::{Field, Ring};
use super::poly::Poly;
use super::Rational;

/// Element of the rational function field `F(x)`, stored as `num/den` with
/// `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den.leading().inv();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    /// Value at `x = a`, `None` at a pole.
    pub fn eval(&self, a: &F) -> Option<F> {
        let d = self.den.eval(a);
        (!d.is_zero()).then(|| self.num.eval(a).div(&d))
    }
}

impl<F: Field> Ring for RatFunc<F> {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RatFunc::new(self.num.add(&rhs.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_int(n: i64) -> Self {
        RatFunc::constant(F::from_int(n))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn from_rational(q: &Rational) -> Self {
        RatFunc::constant(F::from_rational(q))
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
