use super::field::{Field, Ring};
use super::matrix::Matrix;
use super::poly::Poly;

/// `U·M·V = D` with `U`, `V` invertible over `F[x]` and `D` diagonal,
/// monic invariant factors dividing each other in order.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm<F: Field> {
    pub u: Matrix<Poly<F>>,
    pub d: Matrix<Poly<F>>,
    pub v: Matrix<Poly<F>>,
}

impl<F: Field> SmithForm<F> {
    /// Diagonal entries `d_1 | d_2 | …` (zeros at the end).
    pub fn invariant_factors(&self) -> Vec<Poly<F>> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|p| !p.is_zero()).count()
    }
}

fn row_axpy<F: Field>(m: &mut Matrix<Poly<F>>, dst: usize, src: usize, q: &Poly<F>) {
    for j in 0..m.cols() {
        let t = m[(src, j)].mul(q);
        if !t.is_zero() {
            m[(dst, j)] = m[(dst, j)].sub(&t);
        }
    }
}

fn col_axpy<F: Field>(m: &mut Matrix<Poly<F>>, dst: usize, src: usize, q: &Poly<F>) {
    for i in 0..m.rows() {
        let t = m[(i, src)].mul(q);
        if !t.is_zero() {
            m[(i, dst)] = m[(i, dst)].sub(&t);
        }
    }
}

fn swap_rows<F: Field>(m: &mut Matrix<Poly<F>>, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols() {
            let t = m[(a, j)].clone();
            m[(a, j)] = m[(b, j)].clone();
            m[(b, j)] = t;
        }
    }
}

fn swap_cols<F: Field>(m: &mut Matrix<Poly<F>>, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows() {
            let t = m[(i, a)].clone();
            m[(i, a)] = m[(i, b)].clone();
            m[(i, b)] = t;
        }
    }
}

/// Smith normal form of a polynomial matrix.
pub fn smith_form<F: Field>(m: &Matrix<Poly<F>>) -> SmithForm<F> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(d) = a[(i, j)].degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return SmithForm { u, d: a, v };
            };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = a[(i, t)].divrem(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= r.is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = a[(t, j)].divrem(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_zero() && !a[(i, j)].divrem(&a[(t, t)]).1.is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = Poly::constant(F::one().neg());
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        let lead_inv = a[(t, t)].leading().inv();
        let c = Poly::constant(lead_inv);
        for j in 0..cols {
            a[(t, j)] = a[(t, j)].mul(&c);
        }
        for j in 0..rows {
            u[(t, j)] = u[(t, j)].mul(&c);
        }
    }
    SmithForm { u, d: a, v }
}
