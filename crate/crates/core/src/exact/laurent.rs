use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bareiss::bareiss_det;
use super::field::{ExactDivRing, Field, Ring};
use super::matrix::Matrix;
use super::poly::Poly;
use super::ratfunc::RatFunc;

/// Laurent polynomial in one variable `λ`: finitely many nonzero coefficients
/// indexed by integer exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent<F> {
    terms: BTreeMap<i64, F>,
}

pub type LaurentMatrix<F> = Matrix<Laurent<F>>;

impl<F: Field> Laurent<F> {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, F)>) -> Self {
        let mut out = Laurent::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn monomial(c: F, k: i64) -> Self {
        Laurent::from_terms([(k, c)])
    }

    pub fn constant(c: F) -> Self {
        Laurent::monomial(c, 0)
    }

    /// The variable `λ`.
    pub fn lambda() -> Self {
        Laurent::monomial(F::one(), 1)
    }

    /// `λᵏ`.
    pub fn lambda_pow(k: i64) -> Self {
        Laurent::monomial(F::one(), k)
    }

    fn add_term(&mut self, k: i64, c: &F) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&k).map_or_else(|| c.clone(), |old| old.add(c));
        if v.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, F> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> F {
        self.terms.get(&k).cloned().unwrap_or_else(F::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `(c, k)` when the polynomial is the single term `c·λᵏ`.
    pub fn as_monomial(&self) -> Option<(F, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(&k, c)| (c.clone(), k))
    }

    /// Value at `λ = a`; `None` when `a = 0` and a negative power is present.
    pub fn eval(&self, a: &F) -> Option<F> {
        if a.is_zero() {
            if self.min_exp().is_some_and(|k| k < 0) {
                return None;
            }
            return Some(self.coeff(0));
        }
        let inv = a.inv();
        Some(self.terms.iter().fold(F::zero(), |acc, (&k, c)| {
            let p = if k >= 0 { a.pow(k as u32) } else { inv.pow((-k) as u32) };
            acc.add(&c.mul(&p))
        }))
    }

    /// Substitutes `λ ↦ λ⁻¹`.
    pub fn invert_var(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    /// Multiplies by `λᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Laurent::from_terms(self.terms.iter().map(|(&k, a)| (k, a.mul(c))))
    }

    /// The polynomial with the same coefficients, if no negative powers occur.
    pub fn to_poly(&self) -> Option<Poly<F>> {
        if self.min_exp().is_some_and(|k| k < 0) {
            return None;
        }
        let n = self.max_exp().map_or(0, |k| k as usize + 1);
        Some(Poly::new((0..n).map(|k| self.coeff(k as i64)).collect()))
    }

    pub fn from_poly(p: &Poly<F>) -> Self {
        Laurent::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    pub fn to_ratfunc(&self) -> RatFunc<F> {
        match self.min_exp() {
            Some(k) if k < 0 => {
                let num = self.shift(-k).to_poly().expect("shifted to nonnegative powers");
                RatFunc::new(num, Poly::monomial(F::one(), (-k) as usize))
            }
            _ => RatFunc::from_poly(self.to_poly().expect("no negative powers")),
        }
    }

    /// Inverse of [`Laurent::to_ratfunc`]: succeeds when the denominator is a power of `λ`.
    pub fn from_ratfunc(f: &RatFunc<F>) -> Option<Self> {
        let den = f.den();
        let k = den.degree()?;
        if den.valuation() != Some(k) {
            return None;
        }
        Some(Laurent::from_poly(f.num()).shift(-(k as i64)))
    }

    /// `(λ^{-v} self, v)` with `v` the lowest exponent, so the first part is a
    /// polynomial with nonzero constant term.
    fn normalized(&self) -> (Poly<F>, i64) {
        let v = self.min_exp().unwrap_or(0);
        (self.shift(-v).to_poly().expect("normalized"), v)
    }
}

impl<F: Field> Ring for Laurent<F> {
    fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Laurent::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Laurent::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.add_term(i + j, &a.mul(b));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect() }
    }
    fn from_int(n: i64) -> Self {
        Laurent::constant(F::from_int(n))
    }
}

impl<F: Field> ExactDivRing for Laurent<F> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (pa, va) = self.normalized();
        let (pb, vb) = rhs.normalized();
        let q = pa.div_exact(&pb)?;
        Some(Laurent::from_poly(&q).shift(va - vb))
    }
}

impl<F: Field> Matrix<Laurent<F>> {
    pub fn eval_at(&self, a: &F) -> Option<Matrix<F>> {
        let entries: Option<Vec<F>> = self.entries().iter().map(|e| e.eval(a)).collect();
        Some(Matrix::new(self.rows(), self.cols(), entries?))
    }

    pub fn invert_var(&self) -> Self {
        self.map(Laurent::invert_var)
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|e| e.shift(k))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.entries().iter().filter_map(Laurent::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.entries().iter().filter_map(Laurent::max_exp).max()
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc<F>> {
        self.map(Laurent::to_ratfunc)
    }

    pub fn from_ratfunc(m: &Matrix<RatFunc<F>>) -> Option<Self> {
        let entries: Option<Vec<Laurent<F>>> = m.entries().iter().map(Laurent::from_ratfunc).collect();
        Some(Matrix::new(m.rows(), m.cols(), entries?))
    }

    pub fn from_poly_matrix(m: &Matrix<Poly<F>>) -> Self {
        m.map(Laurent::from_poly)
    }

    /// The polynomial matrix with the same entries, if no negative powers occur.
    pub fn to_poly_matrix(&self) -> Option<Matrix<Poly<F>>> {
        let entries: Option<Vec<Poly<F>>> = self.entries().iter().map(Laurent::to_poly).collect();
        Some(Matrix::new(self.rows(), self.cols(), entries?))
    }

    pub fn laurent_det(&self) -> Laurent<F> {
        bareiss_det(self)
    }

    /// Inverse over the Laurent ring, when the determinant is a monomial.
    pub fn laurent_inverse(&self) -> Option<Self> {
        self.laurent_det().as_monomial()?;
        let inv = self.to_ratfunc().inverse()?;
        Matrix::from_ratfunc(&inv)
    }
}

impl<F: Field> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&k, c)| match k {
                0 => format!("{c}"),
                1 if c.is_one() => "λ".to_string(),
                _ if c.is_one() => format!("λ^{k}"),
                1 => format!("({c})λ"),
                _ => format!("({c})λ^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field + Serialize> Serialize for Laurent<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.terms.iter().map(|(k, c)| (k.to_string(), c)))
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for Laurent<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, F>::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            let e: i64 = k.trim().parse().map_err(|_| D::Error::custom(format!("invalid exponent {k:?}")))?;
            terms.push((e, c));
        }
        Ok(Laurent::from_terms(terms))
    }
}
