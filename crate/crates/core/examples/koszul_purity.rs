use htl::exact::{Matrix, Rational};
use htl::koszul::{graded_vanishing_check, FilteredKoszul, KoszulComplex, WeightConvention};
use htl::nilpotent::CommutingTuple;

fn block(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| if j == i + 1 { Rational::int(1) } else { Rational::int(0) })
}

fn main() -> htl::Result<()> {
    for k in [2, 3] {
        let id = Matrix::identity(k);
        let t = CommutingTuple::new(vec![block(k).kron(&id), id.kron(&block(k))])?;
        let c = KoszulComplex::new(&t)?;
        println!("J{k} ⊗ 1, 1 ⊗ J{k}");
        println!("  terms      {:?}", c.term_dims());
        println!("  cohomology {:?}", c.cohomology_dims()?);
        let f = FilteredKoszul::new(&t)?;
        println!("  pure       {}", f.purity()?.pure);
        println!("  pure (cks) {}", f.reindexed(WeightConvention::Cks).purity()?.pure);
        let g = graded_vanishing_check(&f, None)?;
        println!("  graded vanishing {} witness {:?}", g.vanishing, g.witness);
        for ((w, a), d) in g.table.iter().filter(|(_, &d)| d > 0) {
            println!("    H^{a}(Gr_{w}) = {d}");
        }
    }
    Ok(())
}
