use crate::error::{Error, Result};
use crate::exact::{Field, Laurent, LaurentMatrix, Matrix, Poly, Subspace};

use super::poly_ops::{laurent_of_poly_matrix, poly_inverse};

/// Vector bundle on `ℙ¹` glued from trivial bundles on the `λ`- and
/// `μ`-charts by `v† = v·A(λ)`. A section is `x(λ) = A(λ)·y(λ⁻¹)` with `x`
/// polynomial in `λ` and `y` polynomial in `μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistorBundle<F: Field> {
    gluing: LaurentMatrix<F>,
    inverse: LaurentMatrix<F>,
    degree: i64,
    unit: F,
}

impl<F: Field> TwistorBundle<F> {
    pub fn new(gluing: LaurentMatrix<F>) -> Result<Self> {
        if !gluing.is_square() {
            return Err(Error::DimensionMismatch { expected: gluing.rows(), found: gluing.cols() });
        }
        let det = gluing.laurent_det();
        let (unit, degree) =
            det.as_monomial().ok_or_else(|| Error::InvalidGluing(format!("determinant {det} is not a monomial")))?;
        let inverse =
            gluing.laurent_inverse().ok_or_else(|| Error::InvalidGluing("gluing is not invertible over F[λ, λ⁻¹]".into()))?;
        Ok(TwistorBundle { gluing, inverse, degree, unit })
    }

    /// `O(k)`.
    pub fn line(k: i64) -> Self {
        TwistorBundle::new(Matrix::from_rows(vec![vec![Laurent::lambda_pow(k)]])).expect("monomial gluing")
    }

    pub fn trivial(rank: usize) -> Self {
        TwistorBundle::new(Matrix::identity(rank)).expect("identity gluing")
    }

    pub fn rank(&self) -> usize {
        self.gluing.rows()
    }

    pub fn gluing(&self) -> &LaurentMatrix<F> {
        &self.gluing
    }

    pub fn gluing_inverse(&self) -> &LaurentMatrix<F> {
        &self.inverse
    }

    /// `(m, c)` with `det A = c·λ^m`.
    pub fn validate(&self) -> (i64, F) {
        (self.degree, self.unit.clone())
    }

    /// First Chern class.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `V ⊗ O(k)`.
    pub fn twisted(&self, k: i64) -> Self {
        TwistorBundle {
            gluing: self.gluing.shift(k),
            inverse: self.inverse.shift(-k),
            degree: self.degree + k * self.rank() as i64,
            unit: self.unit.clone(),
        }
    }

    pub fn direct_sum(&self, other: &TwistorBundle<F>) -> Self {
        TwistorBundle::new(Matrix::block_diag(&[self.gluing.clone(), other.gluing.clone()])).expect("block gluing")
    }

    /// Global sections of `V ⊗ O(n)` as coefficient vectors of `y(μ)`: entry
    /// `j·(cap+1) + m` is the `μ^m` coefficient of `y_j`. Returns `(cap, basis)`.
    pub fn sections(&self, n: i64) -> (i64, Matrix<F>) {
        let r = self.rank();
        let bmin = self.inverse.min_exp().unwrap_or(0);
        let cap = n - bmin;
        if cap < 0 || r == 0 {
            return (cap, Matrix::zeros(r * (cap.max(-1) + 1) as usize, 0));
        }
        let width = (cap + 1) as usize;
        let amin = self.gluing.min_exp().unwrap_or(0);
        let lowest = n + amin - cap;
        let mut rows = Vec::new();
        for i in 0..r {
            for e in lowest..0 {
                let mut row = vec![F::zero(); r * width];
                for j in 0..r {
                    for m in 0..width {
                        let c = self.gluing[(i, j)].coeff(e - n + m as i64);
                        if !c.is_zero() {
                            row[j * width + m] = c;
                        }
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return (cap, Matrix::identity(r * width));
        }
        (cap, Matrix::from_rows(rows).kernel_basis())
    }

    /// `h⁰(V ⊗ O(n))`.
    pub fn h0(&self, n: i64) -> usize {
        self.sections(n).1.cols()
    }

    /// Grothendieck splitting `{k_1 ≥ … ≥ k_r}` from second differences of
    /// `n ↦ h⁰(V(n))`.
    pub fn splitting_type(&self) -> Result<Vec<i64>> {
        let r = self.rank();
        if r == 0 {
            return Ok(Vec::new());
        }
        let bmin = self.inverse.min_exp().unwrap_or(0);
        let limit = (r as i64 - 1) * (-bmin).max(0) - self.degree + 1;
        let mut n = bmin - 1;
        let mut prev_h = 0;
        let mut prev_count = 0;
        let mut out = Vec::new();
        while prev_count < r {
            n += 1;
            if n > limit.max(bmin) + 1 {
                return Err(Error::Internal("h⁰ profile did not stabilise".into()));
            }
            let h = self.h0(n);
            let count = h - prev_h;
            if count < prev_count {
                return Err(Error::Internal(format!("h⁰ differences decrease at n = {n}")));
            }
            out.extend(std::iter::repeat_n(-n, count - prev_count));
            prev_h = h;
            prev_count = count;
        }
        if prev_count != r || out.iter().sum::<i64>() != self.degree {
            return Err(Error::Internal("splitting type does not add up to the degree".into()));
        }
        Ok(out)
    }

    /// Pure of weight `w`: isomorphic to `O(w)^r`.
    pub fn is_pure(&self, w: i64) -> Result<bool> {
        Ok(self.splitting_type()?.iter().all(|&k| k == w))
    }

    /// `A = P(λ)·diag(λ^{k_i})·Q(λ⁻¹)` with `P ∈ GL(F[λ])`, `Q ∈ GL(F[μ])`.
    pub fn birkhoff(&self) -> Result<Birkhoff<F>> {
        let r = self.rank();
        let kinds = self.splitting_type()?;
        let mut chosen: Vec<(i64, i64, Vec<F>)> = Vec::new();
        let mut distinct = kinds.clone();
        distinct.dedup();
        for &k in &distinct {
            let (cap, basis) = self.sections(-k);
            let width = (cap + 1) as usize;
            let mut lifted = Vec::new();
            for (ki, cap_i, y) in &chosen {
                let w_i = (*cap_i + 1) as usize;
                for shift in 0..=(ki - k) as usize {
                    let mut v = vec![F::zero(); r * width];
                    for j in 0..r {
                        for m in 0..w_i {
                            v[j * width + m + shift] = y[j * w_i + m].clone();
                        }
                    }
                    lifted.push(v);
                }
            }
            let all = Subspace::span(&basis);
            let prev = Subspace::span_vectors(r * width, &lifted);
            let fresh = all.quotient_basis(&prev)?;
            let need = kinds.iter().filter(|&&x| x == k).count();
            if fresh.cols() != need {
                return Err(Error::Internal(format!("found {} new sections for O({k}), expected {need}", fresh.cols())));
            }
            for y in fresh.columns() {
                chosen.push((k, cap, y));
            }
        }
        let y_poly = Matrix::from_fn(r, r, |j, i| {
            let (_, cap, y) = &chosen[i];
            let w = (*cap + 1) as usize;
            Poly::new(y[j * w..(j + 1) * w].to_vec())
        });
        let y_mu = laurent_of_poly_matrix(&y_poly);
        let exps: Vec<i64> = chosen.iter().map(|(k, _, _)| *k).collect();
        let diag_inv = Matrix::diagonal(&exps.iter().map(|&k| Laurent::lambda_pow(-k)).collect::<Vec<_>>());
        let p = self.gluing.mul(&y_mu.invert_var()).mul(&diag_inv);
        let q_poly = poly_inverse(&y_poly).ok_or_else(|| Error::Internal("section matrix is not unimodular in μ".into()))?;
        let out = Birkhoff { p, exponents: exps, q: laurent_of_poly_matrix(&q_poly) };
        out.check(self)?;
        Ok(out)
    }
}

/// Birkhoff factorization; `q` is stored as a polynomial matrix in `μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Birkhoff<F: Field> {
    pub p: LaurentMatrix<F>,
    pub exponents: Vec<i64>,
    pub q: LaurentMatrix<F>,
}

impl<F: Field> Birkhoff<F> {
    /// `P·diag(λ^k)·Q(λ⁻¹)`.
    pub fn reconstruct(&self) -> LaurentMatrix<F> {
        let d = Matrix::diagonal(&self.exponents.iter().map(|&k| Laurent::lambda_pow(k)).collect::<Vec<_>>());
        self.p.mul(&d).mul(&self.q.invert_var())
    }

    fn check(&self, b: &TwistorBundle<F>) -> Result<()> {
        let unit = |m: &LaurentMatrix<F>| {
            m.min_exp().is_none_or(|k| k >= 0) && m.laurent_det().as_monomial().is_some_and(|(_, k)| k == 0)
        };
        if !unit(&self.p) || !unit(&self.q) {
            return Err(Error::Internal("Birkhoff factors are not unimodular".into()));
        }
        if &self.reconstruct() != b.gluing() {
            return Err(Error::Internal("Birkhoff factors do not reproduce the gluing".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn lp(terms: &[(i64, i64)]) -> Laurent<Rational> {
        Laurent::from_terms(terms.iter().map(|&(k, c)| (k, Rational::int(c))))
    }

    fn mod2(p: i64) -> TwistorBundle<Rational> {
        TwistorBundle::new(Matrix::from_rows(vec![vec![lp(&[]), lp(&[(1, 1)])], vec![lp(&[(-1, -1)]), lp(&[(0, p)])]])).unwrap()
    }

    #[test]
    fn lines() {
        assert_eq!(TwistorBundle::<Rational>::line(-1).h0(0), 0);
        assert_eq!(TwistorBundle::<Rational>::line(0).h0(0), 1);
        assert_eq!(TwistorBundle::<Rational>::line(3).h0(0), 4);
        assert_eq!(TwistorBundle::<Rational>::line(3).splitting_type().unwrap(), vec![3]);
    }

    #[test]
    fn validation() {
        let b = TwistorBundle::new(Matrix::diagonal(&[lp(&[(2, 1)]), lp(&[(-1, 1)])])).unwrap();
        assert_eq!(b.validate(), (1, Rational::int(1)));
        assert_eq!(b.splitting_type().unwrap(), vec![2, -1]);
        assert_eq!(mod2(3).validate(), (0, Rational::int(1)));
        let bad = Matrix::from_rows(vec![vec![lp(&[(0, 1), (1, 1)])]]);
        assert!(matches!(TwistorBundle::new(bad), Err(Error::InvalidGluing(_))));
    }

    #[test]
    fn mod2_splits() {
        for p in [0, 1, -3] {
            let b = mod2(p);
            let expected = if p == 0 { vec![1, -1] } else { vec![0, 0] };
            assert_eq!(b.splitting_type().unwrap(), expected);
            assert_eq!(b.h0(0), 2);
            assert_eq!(b.h0(-1), usize::from(p == 0));
            let f = b.birkhoff().unwrap();
            assert_eq!(f.exponents, expected);
            assert_eq!(&f.reconstruct(), b.gluing());
        }
    }

    #[test]
    fn twisting() {
        assert_eq!(mod2(0).twisted(1).splitting_type().unwrap(), vec![2, 0]);
        assert_eq!(mod2(2).twisted(-3).splitting_type().unwrap(), vec![-3, -3]);
        assert!(TwistorBundle::<Rational>::trivial(3).is_pure(0).unwrap());
    }
}
