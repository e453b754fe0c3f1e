use super::field::ExactDivRing;
use super::matrix::Matrix;

/// Fraction-free elimination; returns the rank and the last pivot
/// (equal to ± the determinant for a nonsingular square input).
fn eliminate<R: ExactDivRing>(m: &Matrix<R>) -> (usize, R, bool) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut prev = R::one();
    let mut rank = 0;
    let mut odd_swaps = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            odd_swaps = !odd_swaps;
        }
        let pivot = a[rank][col].clone();
        let (top, below) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut() {
            let factor = row[col].clone();
            for (x, y) in row[col + 1..cols].iter_mut().zip(&pivot_row[col + 1..cols]) {
                let t = pivot.mul(x).sub(&factor.mul(y));
                *x = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[col] = R::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, prev, odd_swaps)
}

/// Rank over the fraction field of an integral domain.
pub fn bareiss_rank<R: ExactDivRing>(m: &Matrix<R>) -> usize {
    eliminate(m).0
}

/// Determinant over an integral domain with exact division.
pub fn bareiss_det<R: ExactDivRing>(m: &Matrix<R>) -> R {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return R::one();
    }
    let (rank, last, odd) = eliminate(m);
    if rank < m.rows() {
        return R::zero();
    }
    if odd {
        last.neg()
    } else {
        last
    }
}
