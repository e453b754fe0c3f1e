use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{ExactDivRing, Field, Ring};
use super::Rational;

/// Multivariate polynomial over a field (ℚ by default). Monomials are exponent vectors; the map
/// order is lexicographic, so the last entry is the leading term.
///
/// The number of variables is implied by the exponent vectors; the zero
/// polynomial and constants are compatible with any variable count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<F = Rational> {
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F> Default for MPoly<F> {
    fn default() -> Self {
        MPoly { terms: BTreeMap::new() }
    }
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl<F: Field> MPoly<F> {
    pub fn constant(c: F) -> Self {
        MPoly::from_terms([(Vec::new(), c)])
    }

    /// The variable `t_i` (0-based).
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        MPoly::from_terms([(e, F::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut out = MPoly::default();
        for (e, c) in terms {
            out.add_term(trim(e), &c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: &F) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&e).map_or_else(|| c.clone(), |old| old.add(c));
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.terms
    }

    pub fn scale(&self, c: &F) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))))
    }

    /// Evaluates at a point (missing coordinates are treated as 0).
    pub fn eval(&self, point: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (e, c)| {
            let m = e.iter().enumerate().fold(c.clone(), |m, (i, &k)| {
                if k == 0 {
                    m
                } else {
                    m.mul(&point.get(i).cloned().unwrap_or_else(F::zero).pow(k))
                }
            });
            acc.add(&m)
        })
    }

    /// Substitutes `t_i ↦ a_i` for the listed variables, keeping the others.
    pub fn partial_eval(&self, var: usize, value: &F) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            let k = e.get(var).copied().unwrap_or(0);
            if var < e.len() {
                e[var] = 0;
            }
            (e, c.mul(&value.pow(k)))
        }))
    }

    fn leading(&self) -> Option<(&Vec<u32>, &F)> {
        self.terms.iter().next_back()
    }
}

fn add_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
}

fn sub_exp(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).unwrap_or(&0).checked_sub(*b.get(i).unwrap_or(&0))).collect()
}

impl<F: Field> Ring for MPoly<F> {
    fn zero() -> Self {
        MPoly::default()
    }
    fn one() -> Self {
        MPoly::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = MPoly::default();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(trim(add_exp(a, b)), &x.mul(y));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }
    fn from_int(n: i64) -> Self {
        MPoly::constant(F::from_int(n))
    }
}

impl<F: Field> ExactDivRing for MPoly<F> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (le, lc) = rhs.leading()?;
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quo = MPoly::default();
        while let Some((e, c)) = rem.leading() {
            let qe = trim(sub_exp(e, le)?);
            let qc = c.mul(&lc_inv);
            let term = MPoly::from_terms([(qe.clone(), qc.clone())]);
            rem = rem.sub(&term.mul(rhs));
            quo.add_term(qe, &qc);
        }
        Some(quo)
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("t{}", i + 1) } else { format!("t{}^{k}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{"<e1,e2,…>": <coefficient>}`; the empty key is the constant term.
impl<F: Field + Serialize> Serialize for MPoly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let key = |e: &Vec<u32>| e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        s.collect_map(self.terms.iter().map(|(e, c)| (key(e), c)))
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for MPoly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, F>::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            let k = k.trim().trim_start_matches('(').trim_end_matches(')');
            let e = if k.is_empty() {
                Vec::new()
            } else {
                k.split(',')
                    .map(|x| x.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| D::Error::custom(format!("invalid monomial {k:?}")))?
            };
            terms.push((e, c));
        }
        Ok(MPoly::from_terms(terms))
    }
}
