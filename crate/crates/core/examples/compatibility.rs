use htl::exact::{Matrix, Rational};
use htl::json::parse_tuple;
use htl::nilpotent::*;

fn block(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| if j == i + 1 { Rational::int(1) } else { Rational::int(0) })
}

fn report(name: &str, t: &CommutingTuple<Rational>) -> htl::Result<()> {
    let opts = CompatOptions::without_cone();
    let show = |f: Option<CompatFailure<Rational>>| f.map_or("pass".to_string(), |f| f.describe());
    println!("{name} (dim {}, {} maps)", t.dim(), t.len());
    println!("  sequential       {}", show(is_sequentially_compatible(t, &opts)?));
    println!("  bottom           {}", show(is_bottom_compatible(t, &opts)?));
    println!("  universal bottom {}", show(is_universally_bottom_compatible(t, t.dim(), &opts)?));
    println!("  strong           {}", show(is_strongly_sequentially_compatible(t, &opts)?));
    println!("  hodge type       {}", show(is_hodge_type(t, &opts)?));
    let r = check_reduction_hypotheses(t, &opts)?;
    println!("  reduction        hypotheses {} conclusion {}", r.hypotheses_hold(), r.conclusion);
    Ok(())
}

fn main() -> htl::Result<()> {
    let id = Matrix::identity(3);
    let t = CommutingTuple::new(vec![block(3).kron(&id), id.kron(&block(3))])?;
    report("J3 ⊗ 1, 1 ⊗ J3", &t)?;
    let failing = parse_tuple(include_str!("../tests/fixtures/failing_sequential_pair.json"))?;
    report("failing pair", &failing)?;
    let bottom = parse_tuple(include_str!("../tests/fixtures/universal_bottom_failure_pair.json"))?;
    report("bottom-only pair", &bottom)?;
    Ok(())
}
