use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{sl2_splitting, weight_filtration};
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Ring};
use crate::filtration::Filtration;

/// Which product of `V` the induced map acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Tensor,
    Sym,
    Wedge,
}

impl std::str::FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(ProductKind::Tensor),
            "sym" => Ok(ProductKind::Sym),
            "wedge" => Ok(ProductKind::Wedge),
            other => Err(Error::Parse(format!("unknown product kind `{other}`"))),
        }
    }
}

/// Basis multi-indices of the product space in its fixed order: all tuples
/// in lexicographic (Kronecker) order, sorted multisets, or strictly
/// increasing tuples.
pub fn product_indices(dim: usize, power: usize, kind: ProductKind) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..power {
        let mut next = Vec::new();
        for p in &out {
            let start = match (kind, p.last()) {
                (ProductKind::Tensor, _) | (_, None) => 0,
                (ProductKind::Sym, Some(&x)) => x,
                (ProductKind::Wedge, Some(&x)) => x + 1,
            };
            for i in start..dim {
                let mut q: Vec<usize> = p.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Sends the word `e_{s_1}·…·e_{s_p}` to `±` a basis index.
fn normalize(kind: ProductKind, mut seq: Vec<usize>) -> Option<(bool, Vec<usize>)> {
    match kind {
        ProductKind::Tensor => Some((false, seq)),
        ProductKind::Sym => {
            seq.sort_unstable();
            Some((false, seq))
        }
        ProductKind::Wedge => {
            let mut odd = false;
            for i in 0..seq.len() {
                for j in i + 1..seq.len() {
                    if seq[i] == seq[j] {
                        return None;
                    }
                    if seq[i] > seq[j] {
                        odd = !odd;
                    }
                }
            }
            seq.sort_unstable();
            Some((odd, seq))
        }
    }
}

struct ProductSpace {
    kind: ProductKind,
    indices: Vec<Vec<usize>>,
    position: HashMap<Vec<usize>, usize>,
}

impl ProductSpace {
    fn new(dim: usize, power: usize, kind: ProductKind) -> Self {
        let indices = product_indices(dim, power, kind);
        let position = indices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        ProductSpace { kind, indices, position }
    }

    fn accumulate<R: Ring>(&self, out: &mut Matrix<R>, col: usize, seq: Vec<usize>, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        if let Some((odd, idx)) = normalize(self.kind, seq) {
            let row = self.position[&idx];
            let c = if odd { coeff.neg() } else { coeff };
            out[(row, col)] = out[(row, col)].add(&c);
        }
    }
}

/// Matrix of `g ⊗ … ⊗ g` (resp. `Sym^p g`, `∧^p g`) in the fixed product basis.
pub fn induced_group<R: Ring>(g: &Matrix<R>, power: usize, kind: ProductKind) -> Matrix<R> {
    assert!(g.is_square(), "induced action of a non-square matrix");
    let space = ProductSpace::new(g.rows(), power, kind);
    let d = space.indices.len();
    let mut out = Matrix::zeros(d, d);
    for (col, idx) in space.indices.iter().enumerate() {
        // expand Π_k g·e_{idx_k} term by term
        let mut terms: Vec<(Vec<usize>, R)> = vec![(Vec::new(), R::one())];
        for &i in idx {
            let mut next = Vec::new();
            for (seq, c) in &terms {
                for r in 0..g.rows() {
                    if !g[(r, i)].is_zero() {
                        let mut s = seq.clone();
                        s.push(r);
                        next.push((s, c.mul(&g[(r, i)])));
                    }
                }
            }
            terms = next;
        }
        for (seq, c) in terms {
            space.accumulate(&mut out, col, seq, c);
        }
    }
    out
}

/// Matrix of the derivation `Σ_k 1 ⊗ … ⊗ N ⊗ … ⊗ 1` on the product space.
pub fn induced_derivation<R: Ring>(n: &Matrix<R>, power: usize, kind: ProductKind) -> Matrix<R> {
    assert!(n.is_square(), "induced action of a non-square matrix");
    let space = ProductSpace::new(n.rows(), power, kind);
    let d = space.indices.len();
    let mut out = Matrix::zeros(d, d);
    for (col, idx) in space.indices.iter().enumerate() {
        for k in 0..idx.len() {
            for r in 0..n.rows() {
                let c = n[(r, idx[k])].clone();
                if c.is_zero() {
                    continue;
                }
                let mut seq = idx.clone();
                seq[k] = r;
                space.accumulate(&mut out, col, seq, c);
            }
        }
    }
    out
}

pub fn product_endo<F: Field>(n: &Matrix<F>, power: usize, kind: ProductKind) -> Result<Matrix<F>> {
    super::NilpotentEndo::new(n.clone())?;
    Ok(induced_derivation(n, power, kind))
}

/// Weight filtration of the product map from the eigenvalue formula: the
/// product of `sl₂` eigenvectors `e_I` has weight `Σ_k w_{i_k}`. The result
/// is compared with the weight filtration of the product map itself.
pub fn product_weight_filtration<F: Field>(n: &Matrix<F>, power: usize, kind: ProductKind) -> Result<Filtration<F>> {
    let sl2 = sl2_splitting(n)?;
    let basis = induced_group(&sl2.basis, power, kind);
    let weights: Vec<i64> =
        product_indices(n.rows(), power, kind).iter().map(|idx| idx.iter().map(|&i| sl2.weights[i]).sum()).collect();
    let formula = Filtration::from_weighted_basis(&basis, &weights)?;
    let direct = weight_filtration(&induced_derivation(n, power, kind))?;
    if formula != direct {
        return Err(Error::Internal(format!("{kind:?}^{power}: eigenvalue formula disagrees with the direct weight filtration")));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use std::collections::BTreeMap;

    fn j(n: usize) -> Matrix<Rational> {
        Matrix::from_fn(n, n, |r, c| Rational::int((c == r + 1) as i64))
    }

    #[test]
    fn tensor_square_is_kronecker_sum() {
        let n = j(2);
        let i = Matrix::identity(2);
        let t = induced_derivation(&n, 2, ProductKind::Tensor);
        assert_eq!(t, n.kron(&i).add(&i.kron(&n)));
        assert_eq!(t.nilpotency_index(), Some(3));
        let w = product_weight_filtration(&n, 2, ProductKind::Tensor).unwrap();
        assert_eq!(w.graded_dims(), BTreeMap::from([(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn wedge_and_sym() {
        assert!(induced_derivation(&j(2), 2, ProductKind::Wedge).is_zero());
        let s = induced_derivation(&j(2), 2, ProductKind::Sym);
        assert_eq!((s.rows(), s.rank()), (3, 2));
        let w = product_weight_filtration(&j(3), 2, ProductKind::Wedge).unwrap();
        assert_eq!(w.graded_dims(), BTreeMap::from([(-2, 1), (0, 1), (2, 1)]));
        let p0 = product_weight_filtration(&j(3), 0, ProductKind::Sym).unwrap();
        assert_eq!(p0, Filtration::trivial(1, 0));
    }

    #[test]
    fn group_action_is_multiplicative() {
        let a = Matrix::from_rows(vec![
            vec![Rational::int(1), Rational::int(2), Rational::int(0)],
            vec![Rational::int(0), Rational::int(1), Rational::int(-1)],
            vec![Rational::int(3), Rational::int(0), Rational::int(1)],
        ]);
        let b = Matrix::from_fn(3, 3, |r, c| Rational::int((r * 2 + c) as i64 % 3 - 1));
        for kind in [ProductKind::Tensor, ProductKind::Sym, ProductKind::Wedge] {
            let lhs = induced_group(&a.mul(&b), 2, kind);
            let rhs = induced_group(&a, 2, kind).mul(&induced_group(&b, 2, kind));
            assert_eq!(lhs, rhs, "{kind:?}");
        }
        assert_eq!(induced_group(&a, 3, ProductKind::Wedge).entries(), &[a.det()]);
    }
}
