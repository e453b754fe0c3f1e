use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use super::field::{Field, Ring};
use super::Rational;
use crate::error::Error;

/// Element `re + im·i` of the Gaussian rationals ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn ints(re: i64, im: i64) -> Self {
        GaussianRational { re: Rational::int(re), im: Rational::int(im) }
    }

    pub fn i() -> Self {
        GaussianRational::ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: self.im.neg() }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> Rational {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        GaussianRational { re: self.re.mul(q), im: self.im.mul(q) }
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn one() -> Self {
        GaussianRational::real(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussianRational { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }
    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }
    fn neg(&self) -> Self {
        GaussianRational { re: self.re.neg(), im: self.im.neg() }
    }
    fn from_int(n: i64) -> Self {
        GaussianRational::real(Rational::int(n))
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        let ninv = n.inv();
        GaussianRational { re: self.re.mul(&ninv), im: self.im.neg().mul(&ninv) }
    }
    fn from_rational(q: &Rational) -> Self {
        GaussianRational::real(q.clone())
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        GaussianRational::real(q)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, self.im.neg())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Parses the `Display` forms: `"3/2"`, `"-i"`, `"2i"`, `"1-1/2i"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GaussianRational::real(t.parse()?));
        };
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let (re, im) = match split {
            Some(k) => (body[..k].parse()?, &body[k..]),
            None => (Rational::zero(), body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => Rational::int(-1),
            x => x.strip_prefix('+').unwrap_or(x).parse()?,
        };
        Ok(GaussianRational { re, im })
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    /// Accepts `{"re": .., "im": ..}` (either part optional) or a bare rational.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            #[serde(default)]
            re: Rational,
            #[serde(default)]
            im: Rational,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Parts(Parts),
            Real(Rational),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Parts(p) => GaussianRational { re: p.re, im: p.im },
            Repr::Real(q) => GaussianRational::real(q),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_display_forms() {
        for z in [
            GaussianRational::ints(0, 0),
            GaussianRational::ints(3, -1),
            GaussianRational::ints(0, 1),
            GaussianRational::new(Rational::new(-1, 2), Rational::new(7, 3)),
        ] {
            assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
        }
        assert_eq!("-i".parse::<GaussianRational>().unwrap(), GaussianRational::ints(0, -1));
        assert_eq!("1 + 2i".parse::<GaussianRational>().unwrap(), GaussianRational::ints(1, 2));
        assert!("1+xi".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn conjugation_is_an_involution_and_multiplicative() {
        let z = GaussianRational::new(Rational::new(1, 2), Rational::int(-3));
        let w = GaussianRational::ints(2, 5);
        assert_eq!(z.conj().conj(), z);
        assert_eq!(z.mul(&w).conj(), z.conj().mul(&w.conj()));
        assert_eq!(z.mul(&z.conj()), GaussianRational::real(z.norm_sqr()));
    }

    #[test]
    fn inverse() {
        let z = GaussianRational::ints(3, -4);
        assert_eq!(z.mul(&z.inv()), GaussianRational::one());
        assert_eq!(GaussianRational::i().mul(&GaussianRational::i()), GaussianRational::from_int(-1));
    }

    #[test]
    fn json_forms() {
        let z: GaussianRational = serde_json::from_str(r#"{"re": "1/2", "im": "-3"}"#).unwrap();
        assert_eq!(z, GaussianRational::new(Rational::new(1, 2), Rational::int(-3)));
        let r: GaussianRational = serde_json::from_str(r#""5""#).unwrap();
        assert_eq!(r, GaussianRational::from_int(5));
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"re":"1/2","im":"-3"}"#);
    }
}
