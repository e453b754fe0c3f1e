use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Linear subspace of `F^n` stored as a reduced column echelon basis.
///
/// Column `k` of the basis has a `1` in row `pivots[k]` and zeros in every
/// other pivot row, with pivots strictly increasing. Two equal subspaces
/// therefore have identical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Column span of `m`.
    pub fn span(m: &Matrix<F>) -> Self {
        let r = m.transpose().rref();
        let basis = r.matrix.submatrix(0..r.rank, 0..m.rows()).transpose();
        Subspace { ambient: m.rows(), basis, pivots: r.pivots }
    }

    pub fn span_vectors(ambient: usize, vs: &[Vec<F>]) -> Self {
        Subspace::span(&Matrix::from_columns(ambient, vs))
    }

    /// Span of a set of columns already known to be independent; still canonicalised.
    pub(crate) fn from_basis_unchecked(ambient: usize, m: Matrix<F>) -> Self {
        debug_assert_eq!(m.rows(), ambient);
        Subspace::span(&m)
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let basis = Matrix::from_fn(ambient, idx.len(), |i, k| if idx[k] == i { F::one() } else { F::zero() });
        Subspace { ambient, basis, pivots: idx }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.columns()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let c: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.basis.mul_vec(&c) == v).then_some(c)
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace<F>) -> bool {
        self.check_ambient(other);
        other.dim() <= self.dim() && other.basis.columns().iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        self.check_ambient(other);
        if other.dim() == 0 || self.is_full() {
            return self.clone();
        }
        if self.dim() == 0 || other.is_full() {
            return other.clone();
        }
        Subspace::span(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        self.check_ambient(other);
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() || self == other {
            return self.clone();
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // [A | -B] (x, y) = 0  ⇔  A x = B y
        let k = self.basis.hstack(&other.basis.neg()).kernel_basis();
        let x = k.submatrix(0..self.dim(), 0..k.cols());
        Subspace::span(&self.basis.mul(&x))
    }

    /// Columns completing a basis of `sub` to a basis of `self`, chosen greedily
    /// from the canonical basis of `self` in pivot order.
    pub fn quotient_basis(&self, sub: &Subspace<F>) -> Result<Matrix<F>> {
        if sub.ambient != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: sub.ambient });
        }
        if !self.contains(sub) {
            return Err(Error::Precondition("quotient by a subspace that is not contained".into()));
        }
        Ok(self.complement_columns(sub))
    }

    fn complement_columns(&self, sub: &Subspace<F>) -> Matrix<F> {
        let mut acc = sub.clone();
        let mut picked = Vec::new();
        for v in self.basis.columns() {
            if acc.dim() == self.dim() {
                break;
            }
            if !acc.contains_vector(&v) {
                acc = acc.sum(&Subspace::span_vectors(self.ambient, std::slice::from_ref(&v)));
                picked.push(v);
            }
        }
        Matrix::from_columns(self.ambient, &picked)
    }

    /// A complement of `self` inside `F^n` made of standard basis vectors.
    pub fn coordinate_complement(&self) -> Matrix<F> {
        let free: Vec<usize> = (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect();
        Subspace::<F>::coordinate(self.ambient, &free).basis
    }

    /// Image of the subspace under the linear map `m`.
    pub fn image_under(&self, m: &Matrix<F>) -> Subspace<F> {
        assert_eq!(m.cols(), self.ambient, "ambient dimension mismatch");
        if self.is_zero() {
            return Subspace::zero(m.rows());
        }
        Subspace::span(&m.mul(&self.basis))
    }

    /// Preimage `{v : m v ∈ self}`.
    pub fn preimage_under(&self, m: &Matrix<F>) -> Subspace<F> {
        assert_eq!(m.rows(), self.ambient, "ambient dimension mismatch");
        let proj = self.annihilator();
        proj.mul(m).kernel()
    }

    /// Matrix whose kernel is exactly this subspace (rows span the annihilator).
    pub fn annihilator(&self) -> Matrix<F> {
        let k = self.basis.transpose().kernel_basis();
        k.transpose()
    }

    /// Expresses every column of `m` (assumed in the subspace) in the canonical basis.
    pub fn coordinates_of(&self, m: &Matrix<F>) -> Matrix<F> {
        m.select_rows(&self.pivots)
    }

    fn check_ambient(&self, other: &Subspace<F>) {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
    }
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        let cols: Vec<String> = self
            .basis
            .columns()
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "{{{}}}", cols.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn r(x: i64) -> Rational {
        Rational::int(x)
    }

    fn span(ambient: usize, vs: &[&[i64]]) -> Subspace<Rational> {
        let cols: Vec<Vec<Rational>> = vs.iter().map(|v| v.iter().map(|&x| r(x)).collect()).collect();
        Subspace::span_vectors(ambient, &cols)
    }

    #[test]
    fn coordinate_lines() {
        let a = span(2, &[&[1, 0]]);
        let b = span(2, &[&[0, 1]]);
        assert_eq!(a.sum(&b), Subspace::full(2));
        assert_eq!(a.intersect(&b), Subspace::zero(2));
    }

    #[test]
    fn equal_subspaces_have_identical_bases() {
        let a = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = span(3, &[&[1, 3, 4], &[2, 5, 7]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), b.basis());
        assert_eq!(a.intersect(&b), a);
        assert_eq!(a.quotient_basis(&b).unwrap().cols(), 0);
    }

    #[test]
    fn quotient_requires_containment() {
        let a = span(3, &[&[1, 0, 0]]);
        let b = span(3, &[&[0, 1, 0]]);
        assert!(a.quotient_basis(&b).is_err());
        let full = Subspace::<Rational>::full(3);
        let q = full.quotient_basis(&a).unwrap();
        assert_eq!(q.cols(), 2);
        assert_eq!(a.sum(&Subspace::span(&q)), full);
    }

    #[test]
    fn preimage_and_annihilator() {
        let n = Matrix::from_rows(vec![vec![r(0), r(1), r(0)], vec![r(0), r(0), r(1)], vec![r(0), r(0), r(0)]]);
        let line = span(3, &[&[1, 0, 0]]);
        assert_eq!(line.preimage_under(&n), span(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(line.annihilator().mul(line.basis()).is_zero());
    }
}
