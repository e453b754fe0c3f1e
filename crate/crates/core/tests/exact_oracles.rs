mod common;

use common::*;
use htl::exact::{bareiss_rank, smith_form, Field, Matrix, Poly, Rational, Ring, Subspace};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// Fraction-free elimination on integer matrices.
fn oracle_rank(rows: &[Vec<i128>]) -> usize {
    let mut m = rows.to_vec();
    let (nr, nc) = (m.len(), m[0].len());
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..nc {
        let Some(p) = (rank..nr).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..nr {
            for c in col + 1..nc {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

fn random_int_matrix(r: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Vec<Vec<i128>> {
    let a: Vec<Vec<i128>> = (0..rows).map(|_| (0..rank).map(|_| r.gen_range(-3..=3)).collect()).collect();
    let b: Vec<Vec<i128>> = (0..rank).map(|_| (0..cols).map(|_| r.gen_range(-3..=3)).collect()).collect();
    (0..rows).map(|i| (0..cols).map(|j| (0..rank).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn to_matrix(m: &[Vec<i128>]) -> Matrix<Rational> {
    Matrix::from_rows(m.iter().map(|row| row.iter().map(|&x| q(x as i64)).collect()).collect())
}

#[test]
fn rank_matches_fraction_free_oracle() {
    let mut r = rng(11);
    for _ in 0..300 {
        let target = r.gen_range(0..=6);
        let m = random_int_matrix(&mut r, 6, 6, target);
        let expected = oracle_rank(&m);
        let a = to_matrix(&m);
        assert_eq!(a.rank(), expected);
        assert_eq!(bareiss_rank(&a), expected);
        assert_eq!(a.kernel().dim() + a.image().dim(), 6);
    }
}

#[test]
fn kernel_of_square_of_size_three_block() {
    let n2 = jordan(3).pow(2);
    assert_eq!(n2.kernel().dim(), 2);
    assert_eq!(n2.image().dim(), 1);
}

fn poly(coeffs: &[i64]) -> Poly<Rational> {
    Poly::new(coeffs.iter().map(|&c| q(c)).collect())
}

/// Determinant by cofactor expansion.
fn cofactor_det(m: &[Vec<Poly<Rational>>]) -> Poly<Rational> {
    if m.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<Poly<Rational>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect()).collect();
        let term = m[0][j].mul(&cofactor_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n, k - 1).into_iter().filter(move |s| s.first().is_none_or(|&x| x > first)).map(move |mut s| {
                s.insert(0, first);
                s
            })
        })
        .collect()
}

/// `D_k` = monic gcd of all `k×k` minors.
fn determinantal_divisors(m: &Matrix<Poly<Rational>>) -> Vec<Poly<Rational>> {
    let n = m.rows().min(m.cols());
    (1..=n)
        .map(|k| {
            let mut g = Poly::zero();
            for rows in subsets(m.rows(), k) {
                for cols in subsets(m.cols(), k) {
                    let minor: Vec<Vec<Poly<Rational>>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect();
                    g = g.gcd(&cofactor_det(&minor));
                }
            }
            g
        })
        .collect()
}

fn monic(p: &Poly<Rational>) -> Poly<Rational> {
    if p.is_zero() {
        p.clone()
    } else {
        p.monic()
    }
}

#[test]
fn smith_of_lambda_block() {
    let m = Matrix::from_rows(vec![vec![poly(&[0, 1]), poly(&[1])], vec![Poly::zero(), poly(&[0, 1])]]);
    let f = smith_form(&m).invariant_factors();
    assert_eq!(f, vec![poly(&[1]), poly(&[0, 0, 1])]);
    let d = determinantal_divisors(&m);
    assert_eq!(monic(&d[1].divrem(&d[0]).0), poly(&[0, 0, 1]));
}

#[test]
fn smith_matches_determinantal_divisors() {
    let mut r = rng(12);
    for _ in 0..60 {
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let m = Matrix::from_fn(rows, cols, |_, _| {
            if r.gen_bool(0.3) {
                Poly::zero()
            } else {
                Poly::new((0..=r.gen_range(0..=2)).map(|_| q(r.gen_range(-2..=2))).collect())
            }
        });
        let s = smith_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        let factors = s.invariant_factors();
        let divisors = determinantal_divisors(&m);
        let mut prev = Poly::one();
        for (k, dk) in divisors.iter().enumerate() {
            let expected = if dk.is_zero() { Poly::zero() } else { monic(&dk.divrem(&prev).0) };
            assert_eq!(factors[k], expected, "factor {k} of {m:?}");
            if !dk.is_zero() {
                prev = dk.clone();
            }
        }
    }
}

fn random_subspace(r: &mut rand_chacha::ChaCha8Rng, ambient: usize) -> Subspace<Rational> {
    let k = r.gen_range(0..=ambient);
    Subspace::span(&Matrix::from_fn(ambient, k, |_, _| q(r.gen_range(-2..=2))))
}

#[test]
fn subspace_lattice_identities() {
    let mut r = rng(13);
    for _ in 0..100 {
        let (a, b, extra) = (random_subspace(&mut r, 8), random_subspace(&mut r, 8), random_subspace(&mut r, 8));
        let sum = a.sum(&b);
        let cap = a.intersect(&b);
        assert_eq!(sum.dim() + cap.dim(), a.dim() + b.dim());
        let both = a.basis().hstack(b.basis());
        if both.cols() > 0 && both.entries().iter().all(|x| x.is_integer()) {
            let rows: Vec<Vec<i128>> =
                (0..8).map(|i| (0..both.cols()).map(|j| both[(i, j)].to_i64().unwrap().into()).collect()).collect();
            assert_eq!(sum.dim(), oracle_rank(&rows));
        }
        assert!(sum.contains(&a) && sum.contains(&b) && a.contains(&cap) && b.contains(&cap));
        // modular law for a ⊆ c
        let c = a.sum(&extra);
        assert_eq!(a.sum(&b.intersect(&c)), sum.intersect(&c));
    }
}

#[test]
fn rational_fast_path_agrees_with_big_rationals() {
    let mut r = rng(14);
    let edge = [i64::MAX, i64::MIN, i64::MAX - 1, i64::MIN + 1, 1 << 62, -(1 << 62), 3, -7, 1];
    let pick = |r: &mut rand_chacha::ChaCha8Rng| -> i64 {
        if r.gen_bool(0.3) {
            edge[r.gen_range(0..edge.len())]
        } else {
            r.gen_range(-1_000_000_000_000i64..1_000_000_000_000)
        }
    };
    for _ in 0..2000 {
        let (an, ad, bn, bd) = (pick(&mut r), pick(&mut r), pick(&mut r), pick(&mut r));
        if ad == 0 || bd == 0 {
            continue;
        }
        let (a, b) = (Rational::new(an, ad), Rational::new(bn, bd));
        let (x, y) = (BigRational::new(BigInt::from(an), BigInt::from(ad)), BigRational::new(BigInt::from(bn), BigInt::from(bd)));
        let big = |v: BigRational| Rational::new(v.numer().clone(), v.denom().clone());
        assert_eq!(a.add(&b), big(&x + &y));
        assert_eq!(a.sub(&b), big(&x - &y));
        assert_eq!(a.mul(&b), big(&x * &y));
        if !b.is_zero() {
            assert_eq!(Field::div(&a, &b), big(&x / &y));
        }
        assert_eq!(a.cmp(&b), x.cmp(&y));
        assert_eq!(Ring::neg(&a), big(-x.clone()));
        assert_eq!(a.add(&b).sub(&b), a);
    }
}
