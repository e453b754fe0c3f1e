use htl::exact::Rational;
use htl::models::{antidiagonal_pattern, mod_sym_gluing};

fn main() -> htl::Result<()> {
    for p in [Rational::int(0), Rational::int(1), Rational::new(-1, 3)] {
        println!("p = {p}");
        for l in 1..=4 {
            let b = mod_sym_gluing(l, &p);
            let h0: Vec<usize> = (-3..=1).map(|n| b.h0(n)).collect();
            let pattern: Vec<String> = antidiagonal_pattern(&b).unwrap_or_default().iter().map(|c| c.to_string()).collect();
            println!(
                "  Sym^{l}: splitting {:?}, h0(n) for n = -3..1: {h0:?}, anti-diagonal [{}]",
                b.splitting_type()?,
                pattern.join(", ")
            );
        }
    }
    Ok(())
}
