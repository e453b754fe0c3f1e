//! Helpers moving between polynomial, Laurent and rational-function matrices.

use crate::exact::{smith_form, Field, Laurent, LaurentMatrix, Matrix, Poly, RatFunc, Ring, Subspace};

pub(crate) type PolyMatrix<F> = Matrix<Poly<F>>;
pub(crate) type RatMatrix<F> = Matrix<RatFunc<F>>;

pub(crate) fn laurent_of_poly_matrix<F: Field>(m: &PolyMatrix<F>) -> LaurentMatrix<F> {
    LaurentMatrix::from_poly_matrix(m)
}

pub(crate) fn rat_of_poly<F: Field>(m: &PolyMatrix<F>) -> RatMatrix<F> {
    m.map(|p| RatFunc::from_poly(p.clone()))
}

/// Entries with constant denominators, as polynomials.
pub(crate) fn poly_of_rat<F: Field>(m: &RatMatrix<F>) -> Option<PolyMatrix<F>> {
    let entries: Option<Vec<Poly<F>>> =
        m.entries().iter().map(|f| f.den().is_constant().then(|| f.num().scale(&f.den().leading().inv()))).collect();
    Some(Matrix::new(m.rows(), m.cols(), entries?))
}

/// Inverse over `F[x]`, when the determinant is a nonzero constant.
pub(crate) fn poly_inverse<F: Field>(m: &PolyMatrix<F>) -> Option<PolyMatrix<F>> {
    if m.rows() == 0 {
        return Some(m.clone());
    }
    poly_of_rat(&rat_of_poly(m).inverse()?)
}

/// Each column multiplied by the lcm of its denominators.
pub(crate) fn clear_denominators<F: Field>(m: &RatMatrix<F>) -> PolyMatrix<F> {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for j in 0..m.cols() {
        let mut l = Poly::one();
        for i in 0..m.rows() {
            let d = m[(i, j)].den();
            let g = l.gcd(d);
            l = l.mul(&d.divrem(&g).0);
        }
        for i in 0..m.rows() {
            let e = &m[(i, j)];
            out[(i, j)] = e.num().mul(&l.divrem(e.den()).0);
        }
    }
    out
}

/// Basis of a subspace of `F(x)^n` as polynomial generators.
pub(crate) fn generators<F: Field>(s: &Subspace<RatFunc<F>>) -> PolyMatrix<F> {
    clear_denominators(s.basis())
}

/// `(S, C)` with `[S | C]` unimodular over `F[x]` and `S` a basis of the
/// saturation of the column module of `g`.
pub(crate) fn saturate_columns<F: Field>(g: &PolyMatrix<F>) -> (PolyMatrix<F>, PolyMatrix<F>) {
    let r = g.rows();
    if g.cols() == 0 || g.is_zero() {
        return (Matrix::zeros(r, 0), Matrix::identity(r));
    }
    let sf = smith_form(g);
    let s = sf.rank();
    let u_inv = poly_inverse(&sf.u).expect("Smith transform is unimodular");
    (u_inv.submatrix(0..r, 0..s), u_inv.submatrix(0..r, s..r))
}

/// Whether all nonzero invariant factors are units, i.e. the rank of
/// `g(x₀)` is the generic rank at every `x₀`.
pub(crate) fn has_constant_rank<F: Field>(g: &PolyMatrix<F>) -> bool {
    if g.cols() == 0 || g.rows() == 0 {
        return true;
    }
    smith_form(g).invariant_factors().iter().all(|p| p.is_zero() || p.is_constant())
}

pub(crate) fn eval_poly_matrix<F: Field>(m: &PolyMatrix<F>, x: &F) -> Matrix<F> {
    m.map(|p| p.eval(x))
}

/// `x ↦ x⁻¹` on a polynomial matrix, multiplied by the least power of `x`
/// making it polynomial again.
pub(crate) fn reverse_chart<F: Field>(m: &LaurentMatrix<F>) -> PolyMatrix<F> {
    let flipped = m.invert_var();
    let lo = flipped.min_exp().unwrap_or(0);
    flipped.shift(-lo).to_poly_matrix().expect("shifted to nonnegative exponents")
}

pub(crate) fn laurent_of_rat<F: Field>(m: &RatMatrix<F>) -> Option<LaurentMatrix<F>> {
    LaurentMatrix::from_ratfunc(m)
}

pub(crate) fn monomial_exponent<F: Field>(l: &Laurent<F>) -> Option<i64> {
    l.as_monomial().map(|(_, k)| k)
}
