use htl::exact::Rational;
use htl::models::{lowering_solution_dim, mod_sym_gluing, model_nilpotent, w_triangle};
use htl::twistor::{conjugacy_constancy, morphism_weight_filtration, sample_points, SamplePoint};

fn main() -> htl::Result<()> {
    for p in [Rational::int(0), Rational::int(2)] {
        for l in 1..=3 {
            let b = mod_sym_gluing(l, &p);
            let n = model_nilpotent(l, &p)?;
            let w = morphism_weight_filtration(&b, &n)?;
            let v = w.is_mixed_twistor()?;
            println!("p = {p}, l = {l}: mixed {} graded types {:?}", v.mixed, v.graded_types);
            println!("  lowering solutions {}", lowering_solution_dim(l, &p));
            println!("  constant conjugacy class {}", conjugacy_constancy(&n)?.constant);
            let tri = w_triangle(l);
            for pt in sample_points().into_iter().filter(|pt| matches!(pt, SamplePoint::Lambda(_))) {
                let same = tri.iter().all(|(&h, s)| pt.fiber(&w.get(h)) == *s);
                println!("  fibre at {pt} matches the triangle filtration: {same}");
            }
        }
    }
    Ok(())
}
