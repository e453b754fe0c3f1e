//! Model fixtures: the parameters of the rank-one models `L(a, α)` and the
//! `Mod(l+1)` bundles with their nilpotent morphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Field, GaussianRational, Laurent, LaurentMatrix, Matrix, Poly, Rational, Ring, Subspace};
use crate::twistor::{BundleMorphism, TwistorBundle};

/// `L(a, α)` at the twistor parameter `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LParams {
    pub a: Rational,
    pub alpha: GaussianRational,
    pub lambda: GaussianRational,
}

/// Parabolic weight `A` and residue `B` of the prolongment at `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueData {
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: GaussianRational,
}

/// `A = a − 2·Re(λ·ᾱ)`, `B = −λ²·ᾱ + α + λ·a`.
pub fn l_forward(p: &LParams) -> ResidueData {
    let la = p.lambda.mul(&p.alpha.conj());
    let a = p.a.sub(&la.re.add(&la.re));
    let b = p.lambda.mul(&la).neg().add(&p.alpha).add(&p.lambda.scale(&p.a));
    ResidueData { a, b }
}

/// Inverse of [`l_forward`] for fixed `λ`.
pub fn l_inverse(r: &ResidueData, lambda: &GaussianRational) -> LParams {
    let n = lambda.norm_sqr();
    let denom = Rational::one().add(&n);
    let re = lambda.conj().mul(&r.b).re;
    let a = Rational::one().sub(&n).mul(&r.a).add(&re).add(&re).div(&denom);
    let alpha = r.b.sub(&lambda.scale(&r.a)).scale(&denom.inv());
    LParams { a, alpha, lambda: lambda.clone() }
}

fn binom(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    (0..k).fold(Rational::one(), |acc, j| acc.mul(&Rational::new((n - j) as i64, (j + 1) as i64)))
}

/// `[[0, λ], [−λ⁻¹, p]]` in the frame `(v^{1,0}, v^{0,1})`; `p` stands for `y + c`.
pub fn mod2_gluing(p: &Rational) -> TwistorBundle<Rational> {
    mod_sym_gluing(1, p)
}

/// `(1, λ/p; 0, 1)`, `diag(1/p, p)` and `(1, 0; −λ⁻¹/p, 1)`, whose product is
/// the `Mod(2)` gluing. Needs `p ≠ 0`.
pub fn mod2_factors(p: &Rational) -> Result<[LaurentMatrix<Rational>; 3]> {
    if p.is_zero() {
        return Err(Error::Precondition("the factorization needs p ≠ 0".into()));
    }
    let q = p.inv();
    let c = |x: Rational| Laurent::constant(x);
    let upper = Matrix::from_rows(vec![
        vec![c(Rational::one()), Laurent::monomial(q.clone(), 1)],
        vec![c(Rational::zero()), c(Rational::one())],
    ]);
    let middle = Matrix::diagonal(&[c(q.clone()), c(p.clone())]);
    let lower = Matrix::from_rows(vec![
        vec![c(Rational::one()), c(Rational::zero())],
        vec![Laurent::monomial(q.neg(), -1), c(Rational::one())],
    ]);
    Ok([upper, middle, lower])
}

/// `Symˡ Mod(2)`. Row `k` is `v^{l−k,k}`, column `m` is `v†^{l−m,m}`, and
/// `v†^{a,l−a} = (−λ⁻¹·v^{0,1})^a·(λ·v^{1,0} + p·v^{0,1})^{l−a}`.
pub fn mod_sym_gluing(l: usize, p: &Rational) -> TwistorBundle<Rational> {
    let a = Matrix::from_fn(l + 1, l + 1, |k, m| {
        if k + m < l {
            return Laurent::zero();
        }
        let i = l - k;
        let coeff = binom(m, i).mul(&p.pow((k + m - l) as u32));
        let sign = if (l - m) % 2 == 1 { coeff.neg() } else { coeff };
        Laurent::monomial(sign, i as i64 - (l - m) as i64)
    });
    TwistorBundle::new(a).expect("determinant is ±λ^0")
}

/// Anti-diagonal coefficients `c_i` of `A_{i,l−i} = c_i·λ^{2i−l}`, indexed by `i`;
/// `None` if an entry is not of that shape.
pub fn antidiagonal_pattern(b: &TwistorBundle<Rational>) -> Option<Vec<Rational>> {
    let l = b.rank().checked_sub(1)?;
    (0..=l)
        .map(|i| {
            let (c, k) = b.gluing()[(l - i, i)].as_monomial()?;
            (k == 2 * i as i64 - l as i64).then_some(c)
        })
        .collect()
}

/// Whether every entry strictly above the anti-diagonal vanishes.
pub fn is_anti_triangular(b: &TwistorBundle<Rational>) -> bool {
    let r = b.rank();
    (0..r).all(|k| (0..r).all(|m| k + m + 1 >= r || b.gluing()[(k, m)].is_zero()))
}

/// The lowering morphism `v^{i,l−i} ↦ i·v^{i−1,l−i+1}` on `Symˡ Mod(2)`,
/// of twist 2.
pub fn model_nilpotent(l: usize, p: &Rational) -> Result<BundleMorphism<Rational>> {
    let b = mod_sym_gluing(l, p);
    let n = l + 1;
    let lambda =
        Matrix::from_fn(n, n, |r, c| if r == c + 1 { Poly::constant(Rational::int((l - c) as i64)) } else { Poly::zero() });
    let mu = Matrix::from_fn(n, n, |r, c| if c == r + 1 { Poly::constant(Rational::int(-(c as i64))) } else { Poly::zero() });
    BundleMorphism::new(&b, &b, 2, lambda, mu)
}

/// Dimension of the space of twist-2 morphisms of `Symˡ Mod(2)` whose
/// `λ`-chart matrix is constant and strictly lowers the index `i` of `v^{i,l−i}`.
pub fn lowering_solution_dim(l: usize, p: &Rational) -> usize {
    let b = mod_sym_gluing(l, p);
    let n = l + 1;
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|c| (c + 1..n).map(move |r| (r, c))).collect();
    // F ↦ positive-λ part of λ⁻²·A⁻¹·F·A, which must vanish
    let mut constraints: BTreeMap<(usize, usize, i64), Vec<Rational>> = BTreeMap::new();
    for (s, &(r, c)) in slots.iter().enumerate() {
        let mut e = Matrix::<Laurent<Rational>>::zeros(n, n);
        e[(r, c)] = Laurent::one();
        let image = b.gluing_inverse().mul(&e).mul(b.gluing()).shift(-2);
        for i in 0..n {
            for j in 0..n {
                for (k, v) in image[(i, j)].terms() {
                    if *k > 0 {
                        constraints.entry((i, j, *k)).or_insert_with(|| vec![Rational::zero(); slots.len()])[s] = v.clone();
                    }
                }
            }
        }
    }
    if constraints.is_empty() {
        return slots.len();
    }
    Matrix::from_rows(constraints.into_values().collect()).kernel_basis().cols()
}

/// `W^△_h = ⟨v^{i,l−i} | 2i − l ≤ h⟩` as coordinate subspaces.
pub fn w_triangle(l: usize) -> BTreeMap<i64, Subspace<Rational>> {
    let n = l + 1;
    (0..=l)
        .map(|i| {
            let h = 2 * i as i64 - l as i64;
            let vecs: Vec<Vec<Rational>> = (0..n).filter(|&k| 2 * (l - k) as i64 - (l as i64) <= h).map(|k| unit(n, k)).collect();
            (h, Subspace::span_vectors(n, &vecs))
        })
        .collect()
}

fn unit<F: Field>(n: usize, k: usize) -> Vec<F> {
    (0..n).map(|j| if j == k { F::one() } else { F::zero() }).collect()
}

/// `Mod(2) ⊗ Mod(2)` with `N₁ = N ⊗ 1` and `N₂ = 1 ⊗ N`.
pub fn mod2_tensor_square(p: &Rational) -> Result<(TwistorBundle<Rational>, [BundleMorphism<Rational>; 2])> {
    let b = mod2_gluing(p);
    let n = model_nilpotent(1, p)?;
    let sq = TwistorBundle::new(b.gluing().kron(b.gluing()))?;
    let i = Matrix::<Poly<Rational>>::identity(2);
    let n1 = BundleMorphism::new(&sq, &sq, 2, n.lambda.kron(&i), n.mu.kron(&i))?;
    let n2 = BundleMorphism::new(&sq, &sq, 2, i.kron(&n.lambda), i.kron(&n.mu))?;
    Ok((sq, [n1, n2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twistor::morphism_weight_filtration;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn forward_examples() {
        let r = l_forward(&LParams { a: q(2, 1), alpha: GaussianRational::ints(1, 0), lambda: GaussianRational::ints(1, 0) });
        assert_eq!(r, ResidueData { a: Rational::zero(), b: GaussianRational::ints(2, 0) });
        let alpha = GaussianRational::ints(3, -2);
        let r = l_forward(&LParams { a: q(5, 3), alpha: alpha.clone(), lambda: GaussianRational::zero() });
        assert_eq!(r, ResidueData { a: q(5, 3), b: alpha });
    }

    #[test]
    fn inverse_examples() {
        let p = l_inverse(&ResidueData { a: Rational::zero(), b: GaussianRational::ints(2, 0) }, &GaussianRational::one());
        assert_eq!((p.a, p.alpha), (q(2, 1), GaussianRational::ints(1, 0)));
        let lam = GaussianRational::new(q(1, 2), q(-3, 4));
        let r = ResidueData { a: q(-7, 5), b: GaussianRational::new(q(2, 3), q(1, 9)) };
        assert_eq!(l_forward(&l_inverse(&r, &lam)), r);
    }

    #[test]
    fn mod2_shape() {
        let b = mod2_gluing(&q(3, 1));
        assert_eq!(b.validate(), (0, Rational::one()));
        assert_eq!(b.gluing()[(0, 0)], Laurent::zero());
        assert_eq!(b.gluing()[(0, 1)], Laurent::lambda());
        assert_eq!(b.gluing()[(1, 0)], Laurent::monomial(Rational::int(-1), -1));
        assert_eq!(b.gluing()[(1, 1)], Laurent::constant(Rational::int(3)));
        let [u, d, l] = mod2_factors(&q(3, 1)).unwrap();
        assert_eq!(&u.mul(&d).mul(&l), b.gluing());
        assert!(mod2_factors(&Rational::zero()).is_err());
    }

    #[test]
    fn sym_pattern() {
        for l in 0..5 {
            let b = mod_sym_gluing(l, &q(-2, 3));
            assert!(is_anti_triangular(&b));
            let c = antidiagonal_pattern(&b).unwrap();
            assert!(c.iter().all(|x| x.abs() == Rational::one()));
        }
        assert_eq!(mod_sym_gluing(0, &q(5, 1)).gluing(), &Matrix::identity(1));
    }

    #[test]
    fn split_only_at_zero() {
        assert_eq!(mod_sym_gluing(2, &Rational::zero()).splitting_type().unwrap(), vec![2, 0, -2]);
        assert_eq!(mod_sym_gluing(2, &q(1, 2)).splitting_type().unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn nilpotent_models() {
        assert!(model_nilpotent(0, &q(1, 1)).unwrap().lambda.is_zero());
        for p in [Rational::zero(), q(7, 2)] {
            for l in 1..4 {
                let n = model_nilpotent(l, &p).unwrap();
                let w = morphism_weight_filtration(&mod_sym_gluing(l, &p), &n).unwrap();
                for (h, s) in w_triangle(l) {
                    assert_eq!(w.get(h).generic_span().dim(), s.dim());
                    assert!(w.get(h).lambda.entries().iter().all(|e| e.is_constant()));
                }
                assert!(w.is_mixed_twistor().unwrap().mixed);
                // at p = 0 the bundle splits and each lowering step scales independently
                assert_eq!(lowering_solution_dim(l, &p), if p.is_zero() { l } else { 1 });
            }
        }
    }

    #[test]
    fn tensor_square() {
        let (b, [n1, n2]) = mod2_tensor_square(&q(1, 1)).unwrap();
        assert_eq!(b.rank(), 4);
        assert_eq!(n1.lambda.mul(&n2.lambda), n2.lambda.mul(&n1.lambda));
    }
}
