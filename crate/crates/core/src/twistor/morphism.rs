use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Field, Laurent, Matrix, RatFunc, Subspace};
use crate::nilpotent::{
    is_sequentially_compatible, is_strongly_sequentially_compatible, jordan_type, weight_filtration, CommutingTuple,
    CompatOptions,
};

use super::bundle::TwistorBundle;
use super::poly_ops::{eval_poly_matrix, generators, has_constant_rank, laurent_of_poly_matrix, rat_of_poly, PolyMatrix};
use super::subbundle::{quotient_of_frame, FilteredTwistorBundle, Subbundle};

/// A morphism `V → W ⊗ O(a)` given by its matrices in the two charts, with
/// `F_λ(λ)·A_V(λ) = λ^a·A_W(λ)·F_μ(λ⁻¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleMorphism<F: Field> {
    pub twist: i64,
    pub lambda: PolyMatrix<F>,
    pub mu: PolyMatrix<F>,
}

/// Where pointwise hypotheses are evaluated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SamplePoint {
    Lambda(i64),
    Infinity,
}

impl std::fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplePoint::Lambda(x) => write!(f, "λ={x}"),
            SamplePoint::Infinity => write!(f, "μ=0"),
        }
    }
}

/// `λ ∈ {0, 1, 2}` and `μ = 0`.
pub fn sample_points() -> Vec<SamplePoint> {
    vec![SamplePoint::Lambda(0), SamplePoint::Lambda(1), SamplePoint::Lambda(2), SamplePoint::Infinity]
}

impl SamplePoint {
    pub fn fiber<F: Field>(&self, s: &Subbundle<F>) -> Subspace<F> {
        match self {
            SamplePoint::Lambda(x) => s.fiber_at(&F::from_int(*x)),
            SamplePoint::Infinity => s.fiber_at_infinity(),
        }
    }
}

impl<F: Field> BundleMorphism<F> {
    pub fn new(
        source: &TwistorBundle<F>,
        target: &TwistorBundle<F>,
        twist: i64,
        lambda: PolyMatrix<F>,
        mu: PolyMatrix<F>,
    ) -> Result<Self> {
        if lambda.rows() != target.rank() || lambda.cols() != source.rank() {
            return Err(Error::DimensionMismatch { expected: target.rank(), found: lambda.rows() });
        }
        if mu.rows() != lambda.rows() || mu.cols() != lambda.cols() {
            return Err(Error::DimensionMismatch { expected: lambda.rows(), found: mu.rows() });
        }
        let f = BundleMorphism { twist, lambda, mu };
        let lhs = laurent_of_poly_matrix(&f.lambda).mul(source.gluing());
        let rhs = target.gluing().shift(twist).mul(&laurent_of_poly_matrix(&f.mu).invert_var());
        if lhs != rhs {
            return Err(Error::Precondition("morphism is not compatible with the gluings".into()));
        }
        Ok(f)
    }

    /// Constant-matrix morphism of a trivial bundle.
    pub fn constant(m: &Matrix<F>) -> Self {
        let p = m.map(|c| crate::exact::Poly::constant(c.clone()));
        BundleMorphism { twist: 0, lambda: p.clone(), mu: p }
    }

    pub fn zero(source: usize, target: usize, twist: i64) -> Self {
        BundleMorphism { twist, lambda: Matrix::zeros(target, source), mu: Matrix::zeros(target, source) }
    }

    pub fn generic(&self) -> Matrix<RatFunc<F>> {
        rat_of_poly(&self.lambda)
    }

    pub fn at(&self, p: &SamplePoint) -> Matrix<F> {
        match p {
            SamplePoint::Lambda(x) => eval_poly_matrix(&self.lambda, &F::from_int(*x)),
            SamplePoint::Infinity => eval_poly_matrix(&self.mu, &F::zero()),
        }
    }

    pub fn add(&self, other: &BundleMorphism<F>) -> Result<Self> {
        if self.twist != other.twist {
            return Err(Error::Precondition("adding morphisms with different twists".into()));
        }
        Ok(BundleMorphism { twist: self.twist, lambda: self.lambda.add(&other.lambda), mu: self.mu.add(&other.mu) })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BundleMorphism<F>) -> Self {
        BundleMorphism { twist: self.twist + other.twist, lambda: self.lambda.mul(&other.lambda), mu: self.mu.mul(&other.mu) }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lambda.is_square() && self.lambda.pow(self.lambda.rows() as u32).is_zero()
    }
}

/// Jordan types of a nilpotent morphism over the function field and at the
/// sample points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub constant: bool,
    pub generic: Vec<usize>,
    pub points: Vec<(SamplePoint, Vec<usize>)>,
}

pub fn conjugacy_constancy<F: Field>(f: &BundleMorphism<F>) -> Result<ConjugacyReport> {
    if !f.is_nilpotent() {
        return Err(Error::NotNilpotent("bundle morphism over the function field".into()));
    }
    let generic = jordan_type(&f.generic())?;
    let mut points = Vec::new();
    for p in sample_points() {
        points.push((p.clone(), jordan_type(&f.at(&p))?));
    }
    let constant = points.iter().all(|(_, t)| *t == generic) && constant_power_ranks(f);
    Ok(ConjugacyReport { constant, generic, points })
}

/// Ranks of all powers constant over `ℙ¹`, decided from invariant factors in both charts.
fn constant_power_ranks<F: Field>(f: &BundleMorphism<F>) -> bool {
    let (mut p, mut q) = (f.lambda.clone(), f.mu.clone());
    for _ in 1..f.lambda.rows().max(1) {
        if !has_constant_rank(&p) || !has_constant_rank(&q) {
            return false;
        }
        p = p.mul(&f.lambda);
        q = q.mul(&f.mu);
    }
    true
}

/// `W(N)` of a nilpotent `N: V → V ⊗ O(2)` as a filtration by subbundles,
/// checked fiberwise at the sample points.
pub fn morphism_weight_filtration<F: Field>(
    bundle: &TwistorBundle<F>,
    n: &BundleMorphism<F>,
) -> Result<FilteredTwistorBundle<F>> {
    if n.twist != 2 {
        return Err(Error::Precondition(format!("weight filtration needs twist 2, got {}", n.twist)));
    }
    if n.lambda.rows() != bundle.rank() || !n.lambda.is_square() {
        return Err(Error::DimensionMismatch { expected: bundle.rank(), found: n.lambda.rows() });
    }
    let report = conjugacy_constancy(n)?;
    if !report.constant {
        let types: Vec<String> = report.points.iter().map(|(p, t)| format!("{p}: {t:?}")).collect();
        return Err(Error::Hypothesis(format!(
            "Jordan type is not constant: generic {:?}, {}",
            report.generic,
            types.join(", ")
        )));
    }
    let w = weight_filtration(&n.generic())?;
    let mut steps = BTreeMap::new();
    for (&l, s) in w.steps() {
        steps.insert(l, Subbundle::from_generic(bundle, s)?);
    }
    let out = FilteredTwistorBundle::new(bundle.clone(), steps)?;
    for p in sample_points() {
        let wp = weight_filtration(&n.at(&p))?;
        for &l in out.steps.keys() {
            if p.fiber(&out.get(l)) != wp.get(l) {
                return Err(Error::Internal(format!("W_{l} of the bundle differs from W(N|{p})_{l}")));
            }
        }
    }
    Ok(out)
}

/// Kernel, image and cokernel of a morphism of mixed twistors with their
/// induced filtrations.
#[derive(Clone, Debug)]
pub struct KerImCoker<F: Field> {
    /// Kernel as a subbundle of the source.
    pub kernel_sub: Subbundle<F>,
    /// Image as a subbundle of the twisted target.
    pub image_sub: Subbundle<F>,
    pub kernel: FilteredTwistorBundle<F>,
    pub image: FilteredTwistorBundle<F>,
    pub cokernel: FilteredTwistorBundle<F>,
    /// `(point, dim ker f|P, rank f|P)`.
    pub ranks: Vec<(SamplePoint, usize, usize)>,
}

fn check_preserves<F: Field>(
    f: &BundleMorphism<F>,
    source: &FilteredTwistorBundle<F>,
    target: &FilteredTwistorBundle<F>,
) -> Result<()> {
    let m = f.generic();
    for (&l, s) in &source.steps {
        if !target.get(l).generic_span().contains(&s.generic_span().image_under(&m)) {
            return Err(Error::Precondition(format!("morphism does not map W_{l} into W_{l}")));
        }
    }
    Ok(())
}

/// Kernel, image and cokernel of `f: (V₁, W) → (V₂, W) ⊗ O(a)`; the target
/// filtration is taken as `W_l(V₂ ⊗ O(a)) = W_{l−a}(V₂)`.
pub fn morphism_ker_im_coker<F: Field>(
    f: &BundleMorphism<F>,
    source: &FilteredTwistorBundle<F>,
    target: &FilteredTwistorBundle<F>,
) -> Result<KerImCoker<F>> {
    let target = target.twisted(f.twist);
    BundleMorphism::new(&source.bundle, &target.bundle, 0, f.lambda.clone(), f.mu.clone())?;
    check_preserves(f, source, &target)?;
    for (name, side) in [("source", source), ("target", &target)] {
        let v = side.is_mixed_twistor()?;
        if !v.mixed {
            return Err(Error::Hypothesis(format!("{name} is not a mixed twistor (weight {:?})", v.failing_weight)));
        }
    }
    let m = f.generic();
    let generic_rank = m.rank();
    let mut ranks = Vec::new();
    for p in sample_points() {
        let fp = f.at(&p);
        let rk = fp.rank();
        if rk != generic_rank {
            return Err(Error::Hypothesis(format!("rank of f jumps at {p}: {rk} instead of {generic_rank}")));
        }
        ranks.push((p, fp.cols() - rk, rk));
    }
    if !has_constant_rank(&f.lambda) || !has_constant_rank(&f.mu) {
        return Err(Error::Hypothesis("rank of f is not constant over ℙ¹".into()));
    }

    let kernel_generic = m.kernel();
    let kernel_sub = Subbundle::from_generic(&source.bundle, &kernel_generic)?;
    let mut kernel_steps = BTreeMap::new();
    for (&l, s) in &source.steps {
        kernel_steps.insert(l, Subbundle::from_generic(&source.bundle, &s.generic_span().intersect(&kernel_generic))?);
    }

    let image_generic = Subspace::full(m.cols()).image_under(&m);
    let image_sub = Subbundle::from_generic(&target.bundle, &image_generic)?;
    let mut image_steps = BTreeMap::new();
    let mut weights: Vec<i64> = source.steps.keys().chain(target.steps.keys()).copied().collect();
    weights.sort_unstable();
    weights.dedup();
    for &l in &weights {
        let fw = source.get(l).generic_span().image_under(&m);
        if fw != image_generic.intersect(&target.get(l).generic_span()) {
            return Err(Error::Internal(format!("strictness fails generically at weight {l}")));
        }
        for p in sample_points() {
            let lhs = p.fiber(&source.get(l)).image_under(&f.at(&p));
            let rhs = p.fiber(&image_sub).intersect(&p.fiber(&target.get(l)));
            if lhs != rhs {
                return Err(Error::Internal(format!("strictness fails at {p}, weight {l}")));
            }
        }
        image_steps.insert(l, Subbundle::from_generic(&target.bundle, &fw)?);
    }

    let (q_gluing, b_inv, _) = quotient_of_frame(target.bundle.gluing(), &image_sub.lambda, &image_sub.mu)?;
    let s = image_sub.rank();
    let r2 = target.bundle.rank();
    let quotient = TwistorBundle::new(q_gluing)?;
    let project = b_inv.submatrix(s..r2, 0..r2);
    let mut coker_steps = BTreeMap::new();
    for (&l, w) in &target.steps {
        coker_steps.insert(l, Subbundle::saturate(&quotient, &project.mul(&w.lambda))?);
    }

    let kernel = FilteredTwistorBundle::new(kernel_sub.as_bundle(), restrict_all(&kernel_sub, &kernel_steps)?)?;
    let image = FilteredTwistorBundle::new(image_sub.as_bundle(), restrict_all(&image_sub, &image_steps)?)?;
    let cokernel = FilteredTwistorBundle::new(quotient, coker_steps)?;
    for (name, side) in [("kernel", &kernel), ("image", &image), ("cokernel", &cokernel)] {
        let v = side.is_mixed_twistor()?;
        if !v.mixed {
            return Err(Error::Internal(format!("{name} is not a mixed twistor at weight {:?}", v.failing_weight)));
        }
    }
    for (p, k, r) in &ranks {
        if k + r != source.bundle.rank() || *k != kernel_sub.rank() || *r != image_sub.rank() {
            return Err(Error::Internal(format!("rank bookkeeping fails at {p}")));
        }
    }
    Ok(KerImCoker { kernel_sub, image_sub, kernel, image, cokernel, ranks })
}

fn restrict_all<F: Field>(outer: &Subbundle<F>, steps: &BTreeMap<i64, Subbundle<F>>) -> Result<BTreeMap<i64, Subbundle<F>>> {
    steps.iter().map(|(&l, s)| Ok((l, outer.restrict(s)?))).collect()
}

fn sum_morphism<F: Field>(
    f: &FilteredTwistorBundle<F>,
    s1: &Subbundle<F>,
    s2: &Subbundle<F>,
) -> Result<(BundleMorphism<F>, FilteredTwistorBundle<F>)> {
    for s in [s1, s2] {
        let v = f.is_sub_mixed_twistor(s)?;
        if !v.mixed {
            return Err(Error::Hypothesis(format!("not a sub mixed twistor (weight {:?})", v.failing_weight)));
        }
    }
    let d = s1.as_bundle().direct_sum(&s2.as_bundle());
    let phi = BundleMorphism::new(&d, &f.bundle, 0, s1.lambda.hstack(&s2.lambda), s1.mu.hstack(&s2.mu))?;
    let (f1, f2) = (f.induced_on(s1)?, f.induced_on(s2)?);
    let mut weights: Vec<i64> = f1.steps.keys().chain(f2.steps.keys()).copied().collect();
    weights.sort_unstable();
    weights.dedup();
    let mut steps = BTreeMap::new();
    for l in weights {
        let (a, b) = (f1.get(l), f2.get(l));
        let lambda = Matrix::block_diag(&[a.lambda, b.lambda]);
        let mu = Matrix::block_diag(&[a.mu, b.mu]);
        let transition = Matrix::block_diag(&[a.transition, b.transition]);
        steps.insert(l, Subbundle { lambda, mu, transition });
    }
    Ok((phi, FilteredTwistorBundle::new(d, steps)?))
}

/// `V₁ + V₂`, the image of `V₁ ⊕ V₂ → V`.
pub fn sub_sum<F: Field>(f: &FilteredTwistorBundle<F>, s1: &Subbundle<F>, s2: &Subbundle<F>) -> Result<Subbundle<F>> {
    let (phi, source) = sum_morphism(f, s1, s2)?;
    let out = morphism_ker_im_coker(&phi, &source, f)?.image_sub;
    if out.generic_span() != s1.generic_span().sum(&s2.generic_span()) {
        return Err(Error::Internal("image of the sum map differs from the span".into()));
    }
    certify_sub(f, out)
}

/// `V₁ ∩ V₂`, the kernel of `V₁ ⊕ V₂ → V` projected to `V₁`.
pub fn sub_intersect<F: Field>(f: &FilteredTwistorBundle<F>, s1: &Subbundle<F>, s2: &Subbundle<F>) -> Result<Subbundle<F>> {
    let (phi, source) = sum_morphism(f, s1, s2)?;
    let k = morphism_ker_im_coker(&phi, &source, f)?.kernel_sub;
    let first = k.lambda.submatrix(0..s1.rank(), 0..k.rank());
    let out = Subbundle::saturate(&f.bundle, &s1.lambda.mul(&first))?;
    if out.generic_span() != s1.generic_span().intersect(&s2.generic_span()) {
        return Err(Error::Internal("kernel of the sum map differs from the intersection".into()));
    }
    certify_sub(f, out)
}

fn certify_sub<F: Field>(f: &FilteredTwistorBundle<F>, s: Subbundle<F>) -> Result<Subbundle<F>> {
    if !f.is_sub_mixed_twistor(&s)?.mixed {
        return Err(Error::Internal("result is not a sub mixed twistor".into()));
    }
    Ok(s)
}

/// Hypotheses and conclusions of the degree lower bound for a filtered
/// subbundle `(L, W_L)` of a mixed twistor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub hypotheses: bool,
    /// `Gr^{W_L}_l → Gr^W_{l+a}` injective at every point of `ℙ¹`.
    pub injective: Option<bool>,
    /// `Gr^{W_L}_l` pure of weight `l + a`.
    pub pure: Option<bool>,
    pub detail: String,
}

/// `steps` is the filtration `W_L` by subbundles of `f.bundle`; its top step is `L`.
pub fn degree_bound_check<F: Field>(
    f: &FilteredTwistorBundle<F>,
    steps: &BTreeMap<i64, Subbundle<F>>,
    a: i64,
) -> Result<DegreeBound> {
    if !f.is_mixed_twistor()?.mixed {
        return Err(Error::Precondition("ambient filtration is not a mixed twistor".into()));
    }
    let mut lo = Subbundle::zero(&f.bundle);
    let mut graded = Vec::new();
    for (&l, hi) in steps {
        if !hi.contains(&lo) {
            return Err(Error::Precondition(format!("W_L step {l} is not nested")));
        }
        if !f.get(l + a).contains(hi) {
            return Ok(DegreeBound {
                hypotheses: false, injective: None, pure: None, detail: format!("W_L,{l} ⊄ W_{}", l + a)
            });
        }
        let gr = TwistorBundle::new(super::subbundle::quotient_gluing(&lo, hi)?)?;
        let rank = (hi.rank() - lo.rank()) as i64;
        if gr.degree() != (l + a) * rank {
            return Ok(DegreeBound {
                hypotheses: false,
                injective: None,
                pure: None,
                detail: format!("c₁(Gr_{l}) = {} ≠ {}", gr.degree(), (l + a) * rank),
            });
        }
        graded.push((l, lo.clone(), hi.clone(), gr));
        lo = hi.clone();
    }
    let mut injective = true;
    let mut pure = true;
    let mut detail = String::new();
    for (l, lo, hi, gr) in graded {
        let below = f.get(l + a - 1);
        let expected = hi.rank() - lo.rank() + below.rank();
        let joint = hi.lambda.hstack(&below.lambda);
        let joint_mu = hi.mu.hstack(&below.mu);
        let generic = rat_of_poly(&joint).rank();
        if generic != expected || !has_constant_rank(&joint) || !has_constant_rank(&joint_mu) {
            injective = false;
            detail = format!("Gr_{l} → Gr_{} is not injective everywhere", l + a);
        }
        if !gr.is_pure(l + a)? {
            pure = false;
            detail = format!("Gr_{l} is not pure of weight {}", l + a);
        }
    }
    Ok(DegreeBound { hypotheses: true, injective: Some(injective), pure: Some(pure), detail })
}

/// Hypotheses and conclusion of strong compatibility via mixed twistors
/// for nilpotent morphisms `N_i: V → V ⊗ O(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistorStrongReport {
    /// `W(n)` is a mixed twistor.
    pub weight_is_mixed: bool,
    /// Each `N(j)` is a morphism of mixed twistors for `W(n)`.
    pub partial_sums_are_morphisms: bool,
    /// `(N_1, …, N_n)` sequentially compatible at every tested point.
    pub sequential: bool,
    /// `(N_1, …, N_{n−1})` strongly sequentially compatible at every tested point.
    pub strong_prefix: bool,
    /// Strong sequential compatibility of the whole tuple, when the hypotheses hold.
    pub conclusion: Option<bool>,
    pub detail: String,
}

impl TwistorStrongReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.weight_is_mixed && self.partial_sums_are_morphisms && self.sequential && self.strong_prefix
    }
}

fn pointwise_tuples<F: Field>(maps: &[BundleMorphism<F>]) -> Result<Vec<(String, CommutingTuple<F>)>> {
    let mut out = Vec::new();
    for p in sample_points() {
        out.push((p.to_string(), CommutingTuple::new(maps.iter().map(|m| m.at(&p)).collect())?));
    }
    Ok(out)
}

/// Evaluates the hypotheses at the sample points and over the function
/// field (there without the cone condition) and, when they hold, the
/// conclusion at the same places.
pub fn strong_compat_via_twistor<F: Field>(
    bundle: &TwistorBundle<F>,
    maps: &[BundleMorphism<F>],
    opts: &CompatOptions,
) -> Result<TwistorStrongReport> {
    if maps.is_empty() {
        return Err(Error::Precondition("no morphisms".into()));
    }
    for (i, m) in maps.iter().enumerate() {
        BundleMorphism::new(bundle, bundle, 2, m.lambda.clone(), m.mu.clone())?;
        if m.twist != 2 {
            return Err(Error::Precondition(format!("morphism {} has twist {}", i + 1, m.twist)));
        }
        for (j, other) in maps.iter().enumerate().skip(i + 1) {
            if m.lambda.mul(&other.lambda) != other.lambda.mul(&m.lambda) {
                return Err(Error::NotCommuting(i + 1, j + 1));
            }
        }
    }
    let n = maps.len();
    let mut partial = vec![maps[0].clone()];
    for m in &maps[1..] {
        partial.push(partial.last().expect("nonempty").add(m)?);
    }
    let mut report = TwistorStrongReport {
        weight_is_mixed: false,
        partial_sums_are_morphisms: false,
        sequential: false,
        strong_prefix: false,
        conclusion: None,
        detail: String::new(),
    };
    let w = match morphism_weight_filtration(bundle, &partial[n - 1]) {
        Ok(w) => w,
        Err(Error::Hypothesis(msg)) => {
            report.detail = msg;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.weight_is_mixed = w.is_mixed_twistor()?.mixed;
    let target = w.twisted(2);
    report.partial_sums_are_morphisms = partial.iter().all(|m| check_preserves(m, &w, &target).is_ok());

    let mut places = pointwise_tuples(maps)?;
    let generic = CommutingTuple::new(maps.iter().map(BundleMorphism::generic).collect())?;
    let generic_opts = CompatOptions::without_cone();
    report.sequential = is_sequentially_compatible(&generic, &generic_opts)?.is_none();
    report.strong_prefix = n == 1
        || is_strongly_sequentially_compatible(&CommutingTuple::new(generic.maps()[..n - 1].to_vec())?, &generic_opts)?.is_none();
    for (name, t) in &places {
        if is_sequentially_compatible(t, opts)?.is_some() {
            report.sequential = false;
            report.detail = format!("not sequentially compatible at {name}");
        }
        if n > 1 {
            let prefix = CommutingTuple::new(t.maps()[..n - 1].to_vec())?;
            if is_strongly_sequentially_compatible(&prefix, opts)?.is_some() {
                report.strong_prefix = false;
                report.detail = format!("prefix not strongly compatible at {name}");
            }
        }
    }
    if !report.hypotheses_hold() {
        return Ok(report);
    }
    let mut holds = is_strongly_sequentially_compatible(&generic, &generic_opts)?.is_none();
    for (name, t) in places.drain(..) {
        if is_strongly_sequentially_compatible(&t, opts)?.is_some() {
            holds = false;
            report.detail = format!("conclusion fails at {name}");
        }
    }
    report.conclusion = Some(holds);
    Ok(report)
}

/// The `λ`-chart matrix `c·λᵏ·M`.
pub fn laurent_scaled<F: Field>(m: &Matrix<F>, k: i64) -> Matrix<Laurent<F>> {
    m.map(|c| Laurent::monomial(c.clone(), k))
}

#[allow(dead_code)]
fn generic_generators<F: Field>(s: &Subspace<RatFunc<F>>) -> PolyMatrix<F> {
    generators(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Poly, Rational};

    fn lp(terms: &[(i64, i64)]) -> Laurent<Rational> {
        Laurent::from_terms(terms.iter().map(|&(k, c)| (k, Rational::int(c))))
    }

    fn pm(rows: &[[i64; 2]]) -> PolyMatrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| Poly::constant(Rational::int(c))).collect()).collect())
    }

    fn mod2() -> TwistorBundle<Rational> {
        TwistorBundle::new(Matrix::from_rows(vec![vec![lp(&[]), lp(&[(1, 1)])], vec![lp(&[(-1, -1)]), lp(&[(0, 2)])]])).unwrap()
    }

    fn n_mod2(b: &TwistorBundle<Rational>) -> BundleMorphism<Rational> {
        BundleMorphism::new(b, b, 2, pm(&[[0, 0], [1, 0]]), pm(&[[0, -1], [0, 0]])).unwrap()
    }

    #[test]
    fn mod2_weight_filtration() {
        let b = mod2();
        let n = n_mod2(&b);
        let c = conjugacy_constancy(&n).unwrap();
        assert!(c.constant);
        assert_eq!(c.generic, vec![2]);
        let w = morphism_weight_filtration(&b, &n).unwrap();
        assert_eq!(w.steps.keys().copied().collect::<Vec<_>>(), vec![-1, 1]);
        assert_eq!(w.get(-1).degree(), -1);
        assert!(w.is_mixed_twistor().unwrap().mixed);
    }

    #[test]
    fn rejects_incompatible_morphism() {
        let b = mod2();
        assert!(BundleMorphism::new(&b, &b, 2, pm(&[[0, 1], [0, 0]]), pm(&[[0, 1], [0, 0]])).is_err());
    }

    #[test]
    fn kernel_image_of_n() {
        let b = mod2();
        let n = n_mod2(&b);
        let w = morphism_weight_filtration(&b, &n).unwrap();
        let k = morphism_ker_im_coker(&n, &w, &w).unwrap();
        assert_eq!((k.kernel_sub.rank(), k.image_sub.rank()), (1, 1));
        assert_eq!(k.image_sub, w.get(-1));
        assert_eq!(k.cokernel.bundle.rank(), 1);
    }

    #[test]
    fn identity_and_zero() {
        let b = mod2();
        let n = n_mod2(&b);
        let w = morphism_weight_filtration(&b, &n).unwrap();
        let id = BundleMorphism::new(&b, &b, 0, pm(&[[1, 0], [0, 1]]), pm(&[[1, 0], [0, 1]])).unwrap();
        let k = morphism_ker_im_coker(&id, &w, &w).unwrap();
        assert_eq!((k.kernel.bundle.rank(), k.cokernel.bundle.rank()), (0, 0));
        let z = BundleMorphism::zero(2, 2, 0);
        let k = morphism_ker_im_coker(&z, &w, &w).unwrap();
        assert_eq!((k.kernel.bundle.rank(), k.image.bundle.rank(), k.cokernel.bundle.rank()), (2, 0, 2));
    }

    #[test]
    fn sums_and_intersections() {
        let b = mod2();
        let w = morphism_weight_filtration(&b, &n_mod2(&b)).unwrap();
        let low = w.get(-1);
        let whole = w.get(1);
        assert_eq!(sub_sum(&w, &low, &whole).unwrap(), whole);
        assert_eq!(sub_intersect(&w, &low, &whole).unwrap(), low);
        assert_eq!(sub_sum(&w, &low, &low).unwrap(), low);
    }

    #[test]
    fn degree_bound_whole() {
        let b = mod2();
        let w = morphism_weight_filtration(&b, &n_mod2(&b)).unwrap();
        let r = degree_bound_check(&w, &w.steps, 0).unwrap();
        assert_eq!((r.hypotheses, r.injective, r.pure), (true, Some(true), Some(true)));
        let low_only = BTreeMap::from([(0, w.get(-1))]);
        let r = degree_bound_check(&w, &low_only, 0).unwrap();
        assert!(!r.hypotheses);
    }

    #[test]
    fn single_map_strong() {
        let b = mod2();
        let r = strong_compat_via_twistor(&b, &[n_mod2(&b)], &CompatOptions::default()).unwrap();
        assert!(r.hypotheses_hold());
        assert_eq!(r.conclusion, Some(true));
    }
}
