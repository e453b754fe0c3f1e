use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{Field, Ring};
use crate::error::Error;

/// Arbitrary-precision rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in `i64` are stored inline and
/// computed with `i128` intermediates; everything else falls back to
/// `BigRational`. The representation is canonical, so equality and hashing
/// work on it directly.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational::from_big(BigRational::new(num.into(), den))
    }

    pub fn int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational::from_big(BigRational::from_integer(n))
    }

    fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(q)),
        }
    }

    /// `n/d` for `d ≠ 0`, reduced.
    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        if n == 0 {
            return Rational::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs());
        let (mut n, mut d) = (n / g as i128, d / g as i128);
        if d < 0 {
            (n, d) = (-n, -d);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Repr::Big(q) => q.clone(),
        }
    }

    fn binop(
        &self,
        rhs: &Self,
        small: impl Fn(i128, i128, i128, i128) -> (i128, i128),
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (n, d) = small(*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(n, d)
            }
            _ => Rational::from_big(big(self.to_big(), rhs.to_big())),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => (*n).into(),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => (*d).into(),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(q) => q.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(q) => q.is_positive(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            Ring::neg(self)
        } else {
            self.clone()
        }
    }

    /// Exact conversion to `i64` when the value is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        self.to_big()
    }

    /// Halves an integer, used for logarithmic norm exponents.
    pub fn half(n: i64) -> Self {
        Rational::from_i128(n as i128, 2)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
    fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.binop(rhs, |a, b, c, d| if b == d { (a + c, b) } else { (a * d + c * b, b * d) }, |x, y| x + y)
    }
    fn sub(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        self.binop(rhs, |a, b, c, d| if b == d { (a - c, b) } else { (a * d - c * b, b * d) }, |x, y| x - y)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        self.binop(rhs, |a, b, c, d| (a * c, b * d), |x, y| x * y)
    }
    fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Rational::from_i128(-(*n as i128), *d as i128),
            },
            Repr::Big(q) => Rational::from_big(-q),
        }
    }
    fn from_int(n: i64) -> Self {
        Rational::int(n)
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.0 {
            Repr::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Repr::Big(q) => Rational::from_big(q.recip()),
        }
    }
    fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        self.binop(rhs, |a, b, c, d| (a * d, b * c), |x, y| x / y)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational::from_big(q)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `"p"`, `"p/q"` or a terminating decimal such as `"-1.25"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::from_big(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(Rational::from_big(BigRational::new(if neg { -n } else { n }, den)));
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_bigint(p))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::int(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:path) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, Ring::add);
forward_binop!(Sub, sub, Ring::sub);
forward_binop!(Mul, mul, Ring::mul);
forward_binop!(Div, div, Field::div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Ring::neg(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Ring::neg(self)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::int(*other)))
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::int(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_in_lowest_terms() {
        let q: Rational = "6/-4".parse().unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert!(q.denom() > BigInt::zero());
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::int(7));
        assert_eq!("-1.25".parse::<Rational>().unwrap(), Rational::new(-5, 4));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn json_accepts_strings_and_integers() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/3", 2, "-4"]"#).unwrap();
        assert_eq!(v, vec![Rational::new(1, 3), Rational::int(2), Rational::int(-4)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3","2","-4"]"#);
    }

    #[test]
    fn field_ops() {
        let a = Rational::new(2, 3);
        let b = Rational::new(-1, 6);
        assert_eq!(Ring::add(&a, &b), Rational::new(1, 2));
        assert_eq!(Ring::mul(&a, &b), Rational::new(-1, 9));
        assert_eq!(Field::div(&a, &b), Rational::int(-4));
        assert_eq!(a.inv(), Rational::new(3, 2));
        assert_eq!(Ring::pow(&a, 3), Rational::new(8, 27));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::int(i64::MAX);
        let sq = Ring::mul(&big, &big);
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = Field::div(&sq, &big);
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let min = Rational::int(i64::MIN);
        assert_eq!(Ring::neg(&min).numer(), -BigInt::from(i64::MIN));
        assert_eq!(Ring::add(&Ring::neg(&min), &min), Rational::zero());
        assert_eq!(Rational::new(BigInt::from(i64::MAX) * 4, BigInt::from(i64::MAX) * 6), Rational::new(2, 3));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Ring::mul(&sq, &Rational::int(-1)) < Rational::int(i64::MIN));
    }
}
