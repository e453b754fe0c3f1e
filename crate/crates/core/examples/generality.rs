use htl::exact::{MPoly, Matrix, Rational, Ring};
use htl::generality::{degree_drop_check, generic_profile, is_general, specialization_check};
use htl::nilpotent::CommutingTuple;

fn block(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| if j == i + 1 { Rational::int(1) } else { Rational::int(0) })
}

fn main() -> htl::Result<()> {
    let id = Matrix::identity(2);
    let t = CommutingTuple::new(vec![block(2).kron(&id), id.kron(&block(2))])?;
    println!("generic profile {:?}", generic_profile(&t)?.dims);
    for a in [[1, 1], [2, 5], [1, 0]] {
        let a = a.map(Rational::int);
        if is_general(&t, &a)? {
            println!("a = ({}, {}): general, degree drop {}", a[0], a[1], degree_drop_check(&t, &a)?);
        } else {
            println!("a = ({}, {}): not general", a[0], a[1]);
        }
    }
    // N(s) = [[0, 1, 0], [0, 0, s], [0, 0, 0]] degenerates at s = 0
    let family = Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 1) => MPoly::one(),
        (1, 2) => MPoly::var(0),
        _ => MPoly::zero(),
    });
    let r = specialization_check(&family, &Rational::zero())?;
    println!("generic {:?}", r.generic.dims);
    println!("special {:?}", r.special.dims);
    println!("first discrepancy {:?}, generic dominates: {}", r.first_discrepancy, r.holds);
    Ok(())
}
