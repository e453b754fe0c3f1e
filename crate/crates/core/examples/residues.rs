use htl::exact::{GaussianRational, Rational};
use htl::models::{l_forward, l_inverse, LParams, ResidueData};

fn main() {
    let p = LParams { a: Rational::int(2), alpha: GaussianRational::ints(1, 0), lambda: GaussianRational::ints(1, 0) };
    let r = l_forward(&p);
    println!("a = {}, α = {}, λ = {}  ->  A = {}, B = {}", p.a, p.alpha, p.lambda, r.a, r.b);
    let lambda = GaussianRational::new(Rational::new(1, 2), Rational::int(-1));
    let r = ResidueData { a: Rational::new(3, 4), b: GaussianRational::ints(-2, 5) };
    let back = l_inverse(&r, &lambda);
    println!("A = {}, B = {} at λ = {lambda}  ->  a = {}, α = {}", r.a, r.b, back.a, back.alpha);
    println!("round trip exact: {}", l_forward(&back) == r);
}
