use super::product::{induced_derivation, ProductKind};
use super::weight_filtration;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix};
use crate::filtration::Filtration;

/// Pairwise commuting nilpotent maps `(N_1, …, N_n)` on one space, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingTuple<F> {
    dim: usize,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> CommutingTuple<F> {
    pub fn new(maps: Vec<Matrix<F>>) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::Precondition("a commuting tuple needs at least one map".into()));
        };
        let dim = first.rows();
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: if m.rows() != dim { m.rows() } else { m.cols() } });
            }
            if m.nilpotency_index().is_none() {
                return Err(Error::NotNilpotent(format!("map {}", i + 1)));
            }
        }
        for i in 0..maps.len() {
            for j in i + 1..maps.len() {
                if !maps[i].commutator(&maps[j]).is_zero() {
                    return Err(Error::NotCommuting(i + 1, j + 1));
                }
            }
        }
        Ok(CommutingTuple { dim, maps })
    }

    /// A tuple of maps already known to commute and be nilpotent.
    pub(crate) fn from_trusted(dim: usize, maps: Vec<Matrix<F>>) -> Self {
        CommutingTuple { dim, maps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    /// `N(j) = N_1 + … + N_j`, for `1 ≤ j ≤ n`.
    pub fn partial_sum(&self, j: usize) -> Matrix<F> {
        assert!(j >= 1 && j <= self.len(), "partial sum index out of range");
        self.maps[1..j].iter().fold(self.maps[0].clone(), |acc, m| acc.add(m))
    }

    /// `Σ a_i N_i`.
    pub fn combination(&self, a: &[F]) -> Result<Matrix<F>> {
        if a.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: a.len() });
        }
        Ok(self.maps.iter().zip(a).fold(Matrix::zeros(self.dim, self.dim), |acc, (m, c)| acc.add(&m.scale(c))))
    }

    /// `W(1), …, W(n)`.
    pub fn filtrations(&self) -> Vec<Filtration<F>> {
        (1..=self.len())
            .map(|j| weight_filtration(&self.partial_sum(j)).expect("sums of commuting nilpotent maps are nilpotent"))
            .collect()
    }

    /// `(N_{σ(1)}, …, N_{σ(n)})`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if sigma.len() != self.len() || sigma.iter().any(|&i| i >= self.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Precondition(format!("{sigma:?} is not a permutation of 0..{}", self.len())));
        }
        Ok(CommutingTuple::from_trusted(self.dim, sigma.iter().map(|&i| self.maps[i].clone()).collect()))
    }

    /// `(N_1 + N_2, N_3, …, N_n)`.
    pub fn merge_first_two(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::Precondition("merging needs at least two maps".into()));
        }
        let mut maps = vec![self.maps[0].add(&self.maps[1])];
        maps.extend(self.maps[2..].iter().cloned());
        Ok(CommutingTuple::from_trusted(self.dim, maps))
    }

    /// `(N_1^{∧m}, …, N_n^{∧m})` acting as derivations on `∧^m V`.
    pub fn exterior_power(&self, m: usize) -> Self {
        let maps: Vec<Matrix<F>> = self.maps.iter().map(|n| induced_derivation(n, m, ProductKind::Wedge)).collect();
        let dim = maps[0].rows();
        CommutingTuple::from_trusted(dim, maps)
    }

    /// Same maps after a change of basis `B⁻¹·N·B`.
    pub fn conjugated(&self, basis: &Matrix<F>, basis_inv: &Matrix<F>) -> Self {
        CommutingTuple::from_trusted(self.dim, self.maps.iter().map(|m| basis_inv.mul(&m.mul(basis))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn j2() -> Matrix<Rational> {
        Matrix::from_fn(2, 2, |r, c| Rational::int((c == r + 1) as i64))
    }

    #[test]
    fn validation_errors() {
        let a = Matrix::block_diag(&[j2(), Matrix::zeros(1, 1)]);
        let b = Matrix::from_fn(3, 3, |r, c| Rational::int((r == 1 && c == 2) as i64));
        assert!(matches!(CommutingTuple::new(vec![a.clone(), b]), Err(Error::NotCommuting(1, 2))));
        assert!(matches!(CommutingTuple::new(vec![a, Matrix::identity(3)]), Err(Error::NotNilpotent(_))));
        assert!(matches!(CommutingTuple::new(vec![j2(), Matrix::zeros(3, 3)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tensor_pair_filtrations() {
        let i = Matrix::identity(2);
        let t = CommutingTuple::new(vec![j2().kron(&i), i.kron(&j2())]).unwrap();
        let w = t.filtrations();
        assert_eq!(w[0].graded_dims(), [(-1, 2), (1, 2)].into_iter().collect());
        assert_eq!(w[1].graded_dims(), [(-2, 1), (0, 2), (2, 1)].into_iter().collect());
        assert_eq!(t.exterior_power(2).dim(), 6);
        assert!(t.permuted(&[0, 0]).is_err());
    }
}
