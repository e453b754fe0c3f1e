use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{ExactDivRing, Field, Ring};

/// Univariate polynomial, coefficients stored from degree 0 upward without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(F::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// `c·xᵏ`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    /// Lowest power of `x` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn monic(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        self.scale(&self.leading().inv())
    }

    pub fn divrem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![F::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub(&c.mul(di));
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quo), Poly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.mul(&F::from_int(k as i64))).collect())
    }
}

impl<F: Field> Ring for Poly<F> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Poly::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }
    fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }
    fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(F::neg).collect() }
    }
    fn from_int(n: i64) -> Self {
        Poly::constant(F::from_int(n))
    }
}

impl<F: Field> ExactDivRing for Poly<F> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.divrem(rhs);
        r.is_zero().then_some(q)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 if c.is_one() => "x".to_string(),
                1 => format!("({c})x"),
                _ if c.is_one() => format!("x^{k}"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Same shape as a Laurent polynomial: `{"<exponent>": <coefficient>}`.
impl<F: Field + Serialize> Serialize for Poly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.to_string(), c)))
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for Poly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, F>::deserialize(d)?;
        let mut coeffs = Vec::new();
        for (k, c) in raw {
            let e: usize = k.trim().parse().map_err(|_| D::Error::custom(format!("invalid exponent {k:?}")))?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, F::zero());
            }
            coeffs[e] = coeffs[e].add(&c);
        }
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| Rational::int(x)).collect())
    }

    #[test]
    fn division_with_remainder() {
        let a = p(&[-1, 0, 1]);
        let (q, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[1, 0, 1]).divrem(&p(&[0, 1]));
        assert_eq!((q, r), (p(&[0, 1]), p(&[1])));
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[-2, 0, 2]);
        let b = p(&[3, 3]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[]).gcd(&p(&[])), p(&[]));
    }

    #[test]
    fn eval_and_trim() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[1, 2, 3]).eval(&Rational::int(2)), Rational::int(17));
    }
}
