use htl::exact::{Matrix, Rational};
use htl::nilpotent::{jordan_type, primitive_decomposition, satisfies_weight_axioms, sl2_splitting, weight_filtration};

fn int_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::int(x)).collect()).collect())
}

fn main() -> htl::Result<()> {
    // a single block of size 4 in a skewed basis
    let n = int_matrix(&[&[1, -1, 1, 0], &[1, -1, 2, 1], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
    let w = weight_filtration(&n)?;
    println!("jordan type   {:?}", jordan_type(&n)?);
    println!("graded dims   {:?}", w.graded_dims());
    println!("axioms hold   {}", satisfies_weight_axioms(&n, &w));
    for l in w.grid() {
        println!("  dim W_{l:<3} {}", w.get(l).dim());
    }
    let sl2 = sl2_splitting(&n)?;
    println!("H eigenvalues {:?}", sl2.weights);
    let p = primitive_decomposition(&n)?;
    println!("primitive     {:?} (direct: {})", p.primitive_dims(), p.is_direct());
    Ok(())
}
