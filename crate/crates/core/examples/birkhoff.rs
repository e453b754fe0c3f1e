use htl::exact::{Laurent, Matrix, Rational};
use htl::twistor::TwistorBundle;

fn show(m: &Matrix<Laurent<Rational>>) {
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|e| format!("{e:>14}")).collect();
        println!("    {}", cells.join(" "));
    }
}

fn main() -> htl::Result<()> {
    let lam = |k: i64| Laurent::lambda_pow(k);
    let c = |x: i64| Laurent::constant(Rational::int(x));
    // (1 λ 0; 0 1 λ; 0 0 1) · diag(λ², 1, λ⁻²) · (1 0 0; λ⁻¹ 1 0; 2 λ⁻¹ 1)
    let u = Matrix::from_rows(vec![vec![c(1), lam(1), c(0)], vec![c(0), c(1), lam(1)], vec![c(0), c(0), c(1)]]);
    let d = Matrix::diagonal(&[lam(2), c(1), lam(-2)]);
    let v = Matrix::from_rows(vec![vec![c(1), c(0), c(0)], vec![lam(-1), c(1), c(0)], vec![c(2), lam(-1), c(1)]]);
    let b = TwistorBundle::new(u.mul(&d).mul(&v))?;
    println!("gluing");
    show(b.gluing());
    let f = b.birkhoff()?;
    println!("exponents {:?}", f.exponents);
    println!("P(λ)");
    show(&f.p);
    println!("Q(λ⁻¹)");
    show(&f.q.invert_var());
    println!("reconstruction exact: {}", &f.reconstruct() == b.gluing());
    Ok(())
}
