use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{Field, Ring};
use super::subspace::Subspace;

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

/// Reduced row echelon form together with its rank profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; an empty list gives a `0 × 0` matrix.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vec<R>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == n), "column length mismatch");
        Matrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { R::zero() })
    }

    pub fn column_vector(v: &[R]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<R>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out: Matrix<R> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(R::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, R::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, R::sub)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(R::neg)
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)].clone())
    }

    pub fn block_diag(blocks: &[Matrix<R>]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product in lexicographic order: `(i₁,i₂) ↦ i₁·dim₂ + i₂`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].mul(&rhs[(i % rhs.rows, j % rhs.cols)])
        })
    }

    pub fn trace(&self) -> R {
        assert!(self.is_square());
        (0..self.rows).fold(R::zero(), |acc, i| acc.add(&self[(i, i)]))
    }
}

impl<F: Field> Matrix<F> {
    /// Exact reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].mul(&inv);
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    if !m[(row, j)].is_zero() {
                        let t = m[(row, j)].mul(&factor);
                        m[(r, j)] = m[(r, j)].sub(&t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space `{x : self·x = 0}` as a canonical subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace<F> {
        Subspace::from_basis_unchecked(self.cols, self.kernel_basis())
    }

    /// Basis of the null space read off the RREF (one vector per free column).
    pub fn kernel_basis(&self) -> Matrix<F> {
        let Rref { matrix, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Matrix::from_fn(self.cols, free.len(), |i, k| {
            let f = free[k];
            if i == f {
                F::one()
            } else if let Some(r) = pivots.iter().position(|&p| p == i) {
                matrix[(r, f)].neg()
            } else {
                F::zero()
            }
        })
    }

    /// Column space as a canonical subspace of `F^rows`.
    pub fn image(&self) -> Subspace<F> {
        Subspace::span(self)
    }

    /// Solves `self·x = b` for a matrix right-hand side; `None` if inconsistent.
    pub fn solve(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let aug = self.hstack(b);
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some(Matrix::from_fn(self.cols, b.cols, |i, j| match pivots.iter().position(|&p| p == i) {
            Some(r) => matrix[(r, self.cols + j)].clone(),
            None => F::zero(),
        }))
    }

    pub fn solve_vec(&self, b: &[F]) -> Option<Vec<F>> {
        self.solve(&Matrix::column_vector(b)).map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Rref { matrix, rank, .. } = self.hstack(&Matrix::identity(n)).rref();
        if rank < n || (0..n).any(|i| !matrix[(i, i)].is_one()) {
            return None;
        }
        Some(matrix.submatrix(0..n, n..2 * n))
    }

    /// A matrix `L` with `L·self = I`, for `self` of full column rank.
    pub fn left_inverse(&self) -> Option<Matrix<F>> {
        if self.rank() < self.cols {
            return None;
        }
        let mut square = self.clone();
        for e in 0..self.rows {
            if square.cols == self.rows {
                break;
            }
            let mut unit = vec![F::zero(); self.rows];
            unit[e] = F::one();
            let candidate = square.hstack(&Matrix::column_vector(&unit));
            if candidate.rank() == candidate.cols {
                square = candidate;
            }
        }
        let inv = square.inverse()?;
        Some(inv.submatrix(0..self.cols, 0..self.rows))
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = det.neg();
            }
            let pivot = m[(col, col)].clone();
            det = det.mul(&pivot);
            let inv = pivot.inv();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].mul(&inv);
                for j in col..n {
                    let t = m[(col, j)].mul(&factor);
                    m[(r, j)] = m[(r, j)].sub(&t);
                }
            }
        }
        det
    }

    /// Smallest `k` with `selfᵏ = 0`, if the matrix is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        let n = self.rows;
        let mut p = Matrix::identity(n);
        for k in 0..=n {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }
}

impl<R: Ring + Serialize> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Matrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &self.to_rows())?;
        st.end()
    }
}

impl<'de, R: Ring + Deserialize<'de>> Deserialize<'de> for Matrix<R> {
    /// `{"rows": r, "cols": c, "entries": [[...], ...]}`; `rows`/`cols` may be
    /// omitted and are then read off `entries`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw<R> {
            rows: Option<usize>,
            cols: Option<usize>,
            entries: Vec<Vec<R>>,
        }
        let raw = Raw::<R>::deserialize(d)?;
        let rows = raw.rows.unwrap_or(raw.entries.len());
        let cols = raw.cols.unwrap_or_else(|| raw.entries.first().map_or(0, Vec::len));
        if raw.entries.len() != rows {
            return Err(D::Error::custom(format!("expected {rows} rows, found {}", raw.entries.len())));
        }
        if let Some((i, r)) = raw.entries.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(D::Error::custom(format!("row {i} has {} entries, expected {cols}", r.len())));
        }
        Ok(Matrix { rows, cols, data: raw.entries.into_iter().flatten().collect() })
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::int(x)).collect()).collect())
    }

    #[test]
    fn rref_identity_and_jordan_block() {
        let id = Matrix::<Rational>::identity(2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!((r.rank, r.pivots), (2, vec![0, 1]));

        let j = q(&[&[0, 1], &[0, 0]]);
        let r = j.rref();
        assert_eq!(r.matrix, j);
        assert_eq!((r.rank, r.pivots), (1, vec![1]));
    }

    #[test]
    fn kernel_and_image_of_jordan_block() {
        let j = q(&[&[0, 1], &[0, 0]]);
        let e1 = Subspace::span(&q(&[&[1], &[0]]));
        assert_eq!(j.kernel(), e1);
        assert_eq!(j.image(), e1);

        let z = Matrix::<Rational>::zeros(3, 3);
        assert_eq!(z.kernel().dim(), 3);
        assert_eq!(z.image().dim(), 0);
    }

    #[test]
    fn square_of_size_three_block() {
        let j3 = q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let sq = j3.pow(2);
        assert_eq!(sq.kernel().dim(), 2);
        assert_eq!(sq.image().dim(), 1);
        assert_eq!(j3.nilpotency_index(), Some(3));
    }

    #[test]
    fn solve_inverse_det() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.det(), Rational::int(1));
        let x = a.solve_vec(&[Rational::int(3), Rational::int(2)]).unwrap();
        assert_eq!(x, vec![Rational::int(1), Rational::int(1)]);
        assert!(q(&[&[1, 1], &[1, 1]]).solve_vec(&[Rational::int(1), Rational::int(2)]).is_none());
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let a = q(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = a.left_inverse().unwrap();
        assert_eq!(l.mul(&a), Matrix::identity(2));
    }

    #[test]
    fn kron_order_is_lexicographic() {
        let a = q(&[&[0, 1], &[0, 0]]);
        let i = Matrix::<Rational>::identity(2);
        let k = a.kron(&i);
        assert_eq!(k[(0, 2)], Rational::int(1));
        assert_eq!(k[(1, 3)], Rational::int(1));
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[["1","2"],["3","4"]]}"#);
        assert_eq!(serde_json::from_str::<Matrix<Rational>>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Matrix<Rational>>(r#"{"rows":2,"cols":2,"entries":[["1"],["3","4"]]}"#).is_err());
    }
}
