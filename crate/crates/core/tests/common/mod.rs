#![allow(dead_code)]

use htl::exact::{Laurent, LaurentMatrix, Matrix, Poly, Rational, Ring};
use htl::nilpotent::CommutingTuple;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::int(n)
}

pub fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
}

pub fn jordan(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| if j == i + 1 { Rational::one() } else { Rational::zero() })
}

pub fn jordan_sum(sizes: &[usize]) -> Matrix<Rational> {
    Matrix::block_diag(&sizes.iter().map(|&k| jordan(k)).collect::<Vec<_>>())
}

pub fn identity(n: usize) -> Matrix<Rational> {
    Matrix::identity(n)
}

/// Random partition of `n`.
pub fn partition(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let k = r.gen_range(1..=left);
        out.push(k);
        left -= k;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Unit lower times unit upper triangular with small integer entries, so the
/// inverse stays integral.
pub fn unimodular(r: &mut ChaCha8Rng, n: usize, spread: i64) -> (Matrix<Rational>, Matrix<Rational>) {
    let lo = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Greater => q(r.gen_range(-spread..=spread)),
        std::cmp::Ordering::Less => Rational::zero(),
    });
    let up = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => q(r.gen_range(-spread..=spread)),
        std::cmp::Ordering::Greater => Rational::zero(),
    });
    let p = lo.mul(&up);
    let inv = p.inverse().expect("unimodular");
    (p, inv)
}

/// `P·J·P⁻¹` for a random Jordan type of size `n`.
pub fn random_nilpotent(r: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    let j = jordan_sum(&partition(r, n));
    let (p, pi) = unimodular(r, n, 2);
    p.mul(&j).mul(&pi)
}

/// Random polynomial without constant term in commuting `x`, `y`.
fn poly2(r: &mut ChaCha8Rng, x: &Matrix<Rational>, y: &Matrix<Rational>, degree: usize) -> Matrix<Rational> {
    let n = x.rows();
    let mut out = Matrix::zeros(n, n);
    for a in 0..=degree {
        for b in 0..=degree - a {
            if a + b == 0 {
                continue;
            }
            let c = r.gen_range(-2..=2);
            if c != 0 {
                out = out.add(&x.pow(a as u32).mul(&y.pow(b as u32)).scale(&q(c)));
            }
        }
    }
    out
}

/// Commuting nilpotent tuple of length `len` in dimension `≤ max_dim`, built
/// from polynomials in `J_a ⊗ 1` and `1 ⊗ J_b` and optionally a direct summand,
/// conjugated by a random unimodular matrix.
pub fn random_commuting(r: &mut ChaCha8Rng, len: usize, max_dim: usize) -> CommutingTuple<Rational> {
    loop {
        let a = r.gen_range(1..=max_dim.min(4));
        let b = r.gen_range(1..=(max_dim / a).clamp(1, 3));
        let x = jordan(a).kron(&identity(b));
        let y = identity(a).kron(&jordan(b));
        let mut maps: Vec<Matrix<Rational>> = (0..len).map(|_| poly2(r, &x, &y, 2)).collect();
        let extra = max_dim - a * b;
        if extra > 0 && r.gen_bool(0.5) {
            let k = r.gen_range(1..=extra);
            let z = random_nilpotent(r, k);
            maps = maps
                .into_iter()
                .map(|m| {
                    let c = r.gen_range(-1..=1);
                    let w = if c == 0 { Matrix::zeros(k, k) } else { z.scale(&q(c)) };
                    Matrix::block_diag(&[m, w])
                })
                .collect();
        }
        if maps.iter().all(|m| m.is_zero()) {
            continue;
        }
        let n = maps[0].rows();
        let (p, pi) = unimodular(r, n, 1);
        let maps = maps.into_iter().map(|m| p.mul(&m).mul(&pi)).collect();
        return CommutingTuple::new(maps).expect("commuting nilpotent by construction");
    }
}

pub fn lp(terms: &[(i64, i64)]) -> Laurent<Rational> {
    Laurent::from_terms(terms.iter().map(|&(k, c)| (k, q(c))))
}

/// Unimodular matrix over `F[x]`: a product of elementary matrices with
/// random polynomial entries of degree `≤ degree`, plus a permutation.
pub fn unimodular_poly(r: &mut ChaCha8Rng, n: usize, steps: usize, degree: usize) -> Matrix<Poly<Rational>> {
    let mut m = Matrix::<Poly<Rational>>::identity(n);
    if n < 2 {
        return m.scale(&Poly::constant(q(*[1, -1, 2].choose(r).unwrap())));
    }
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let p = Poly::new((0..=degree).map(|_| q(r.gen_range(-2..=2))).collect());
        let mut e = Matrix::<Poly<Rational>>::identity(n);
        e[(i, j)] = p;
        m = m.mul(&e);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    m.select_cols(&perm)
}

pub fn poly_to_laurent(m: &Matrix<Poly<Rational>>) -> LaurentMatrix<Rational> {
    LaurentMatrix::from_poly_matrix(m)
}
