use htl::exact::{Matrix, Rational};
use htl::nilpotent::{strong_basis, strong_splitting, verify_strong_basis, CommutingTuple, CompatOptions};

fn block(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| if j == i + 1 { Rational::int(1) } else { Rational::int(0) })
}

fn main() -> htl::Result<()> {
    let (a, b) = (Matrix::identity(2), Matrix::identity(3));
    let t = CommutingTuple::new(vec![block(2).kron(&b), a.kron(&block(3))])?;
    let opts = CompatOptions::without_cone();
    let s = strong_splitting(&t, &opts)?;
    println!("splitting verified: {}", s.verify(&t));
    for ((stage, h), d) in s.dims() {
        println!("  stage {stage} weights {h:?}: dim {d}");
    }
    let basis = strong_basis(&t, &opts)?;
    println!("basis of {} vectors, verified: {}", basis.len(), verify_strong_basis(&t, &basis)?);
    Ok(())
}
