use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Field, LaurentMatrix, Matrix, RatFunc, Subspace};

use super::bundle::TwistorBundle;
use super::poly_ops::{
    eval_poly_matrix, generators, laurent_of_poly_matrix, laurent_of_rat, monomial_exponent, poly_inverse, poly_of_rat,
    rat_of_poly, reverse_chart, saturate_columns, PolyMatrix,
};

/// A subbundle given by saturated bases `S(λ)`, `S†(μ)` in the two charts and
/// the transition `T` with `A·S†(λ⁻¹) = S(λ)·T(λ)`, which is its own gluing.
#[derive(Clone, Debug)]
pub struct Subbundle<F: Field> {
    pub lambda: PolyMatrix<F>,
    pub mu: PolyMatrix<F>,
    pub transition: LaurentMatrix<F>,
}

impl<F: Field> PartialEq for Subbundle<F> {
    fn eq(&self, other: &Self) -> bool {
        self.generic_span() == other.generic_span()
    }
}

impl<F: Field> Subbundle<F> {
    /// Saturation of the subsheaf generated by polynomial columns in the `λ`-chart.
    pub fn saturate(parent: &TwistorBundle<F>, generators_lambda: &PolyMatrix<F>) -> Result<Self> {
        if generators_lambda.rows() != parent.rank() {
            return Err(Error::DimensionMismatch { expected: parent.rank(), found: generators_lambda.rows() });
        }
        let (s, _) = saturate_columns(generators_lambda);
        let k = s.cols();
        let r = parent.rank();
        if k == 0 {
            return Ok(Subbundle { lambda: s, mu: Matrix::zeros(r, 0), transition: Matrix::zeros(0, 0) });
        }
        let in_mu = parent.gluing_inverse().mul(&laurent_of_poly_matrix(&s));
        let (s_mu, _) = saturate_columns(&reverse_chart(&in_mu));
        if s_mu.cols() != k {
            return Err(Error::NotSubbundle(format!("rank {k} in the λ-chart but {} in the μ-chart", s_mu.cols())));
        }
        let rhs = parent.gluing().mul(&laurent_of_poly_matrix(&s_mu).invert_var()).to_ratfunc();
        let t = rat_of_poly(&s)
            .solve(&rhs)
            .and_then(|t| laurent_of_rat(&t))
            .ok_or_else(|| Error::NotSubbundle("no Laurent transition between the chart bases".into()))?;
        if monomial_exponent(&t.laurent_det()).is_none() {
            return Err(Error::NotSubbundle("transition is not invertible over F[λ, λ⁻¹]".into()));
        }
        Ok(Subbundle { lambda: s, mu: s_mu, transition: t })
    }

    /// Saturation of a subspace of `F(λ)^r`.
    pub fn from_generic(parent: &TwistorBundle<F>, s: &Subspace<RatFunc<F>>) -> Result<Self> {
        Subbundle::saturate(parent, &generators(s))
    }

    pub fn whole(parent: &TwistorBundle<F>) -> Self {
        Subbundle::saturate(parent, &Matrix::identity(parent.rank())).expect("identity generators")
    }

    pub fn zero(parent: &TwistorBundle<F>) -> Self {
        Subbundle::saturate(parent, &Matrix::zeros(parent.rank(), 0)).expect("no generators")
    }

    pub fn rank(&self) -> usize {
        self.lambda.cols()
    }

    pub fn ambient_rank(&self) -> usize {
        self.lambda.rows()
    }

    pub fn degree(&self) -> i64 {
        if self.rank() == 0 {
            return 0;
        }
        monomial_exponent(&self.transition.laurent_det()).expect("checked on construction")
    }

    /// The subbundle as a bundle in its own frames.
    pub fn as_bundle(&self) -> TwistorBundle<F> {
        TwistorBundle::new(self.transition.clone()).expect("checked on construction")
    }

    pub fn generic_span(&self) -> Subspace<RatFunc<F>> {
        Subspace::span(&rat_of_poly(&self.lambda))
    }

    /// Fiber at `λ = x` in the `λ`-frame.
    pub fn fiber_at(&self, x: &F) -> Subspace<F> {
        Subspace::span(&eval_poly_matrix(&self.lambda, x))
    }

    /// Fiber at `μ = 0` in the `μ`-frame.
    pub fn fiber_at_infinity(&self) -> Subspace<F> {
        Subspace::span(&eval_poly_matrix(&self.mu, &F::zero()))
    }

    pub fn contains(&self, other: &Subbundle<F>) -> bool {
        self.generic_span().contains(&other.generic_span())
    }

    /// `inner` written in the frames of `self`, as a subbundle of `self.as_bundle()`.
    pub fn restrict(&self, inner: &Subbundle<F>) -> Result<Subbundle<F>> {
        if !self.contains(inner) {
            return Err(Error::NotSubbundle("restriction to a subbundle that does not contain it".into()));
        }
        let c = coordinates_in(&self.lambda, &inner.lambda)?;
        let c_mu = coordinates_in(&self.mu, &inner.mu)?;
        Ok(Subbundle { lambda: c, mu: c_mu, transition: inner.transition.clone() })
    }

    /// Same subbundle viewed inside `V ⊗ O(k)`.
    pub fn twisted(&self, k: i64) -> Self {
        Subbundle { transition: self.transition.shift(k), ..self.clone() }
    }
}

/// `C` polynomial with `outer·C = inner`.
fn coordinates_in<F: Field>(outer: &PolyMatrix<F>, inner: &PolyMatrix<F>) -> Result<PolyMatrix<F>> {
    if inner.cols() == 0 {
        return Ok(Matrix::zeros(outer.cols(), 0));
    }
    rat_of_poly(outer)
        .solve(&rat_of_poly(inner))
        .and_then(|c| poly_of_rat(&c))
        .ok_or_else(|| Error::Internal("saturated basis does not contain the inner basis over F[λ]".into()))
}

/// Gluings of `lo` and of `hi / lo` for nested subbundles of one bundle.
pub fn quotient_gluing<F: Field>(lo: &Subbundle<F>, hi: &Subbundle<F>) -> Result<LaurentMatrix<F>> {
    let inner = hi.restrict(lo)?;
    quotient_of_frame(&hi.transition, &inner.lambda, &inner.mu).map(|(q, _, _)| q)
}

/// For a bundle with gluing `a` and a subbundle with saturated chart bases
/// `c`, `c†`: the quotient gluing and the completed frames `[c | c']`,
/// `[c† | c'†]` (as inverses, so that rows `s..` give quotient coordinates).
pub(crate) fn quotient_of_frame<F: Field>(
    a: &LaurentMatrix<F>,
    c: &PolyMatrix<F>,
    c_mu: &PolyMatrix<F>,
) -> Result<(LaurentMatrix<F>, PolyMatrix<F>, PolyMatrix<F>)> {
    let r = a.rows();
    let s = c.cols();
    let (_, comp) = saturate_columns(c);
    let (_, comp_mu) = saturate_columns(c_mu);
    let b = c.hstack(&comp);
    let b_mu = c_mu.hstack(&comp_mu);
    let b_inv = poly_inverse(&b).ok_or_else(|| Error::NotSubbundle("λ-chart basis cannot be completed".into()))?;
    let b_mu_inv = poly_inverse(&b_mu).ok_or_else(|| Error::NotSubbundle("μ-chart basis cannot be completed".into()))?;
    let m = laurent_of_poly_matrix(&b_inv).mul(a).mul(&laurent_of_poly_matrix(&b_mu).invert_var());
    if !m.submatrix(s..r, 0..s).is_zero() {
        return Err(Error::Internal("transition is not block triangular for a subbundle".into()));
    }
    Ok((m.submatrix(s..r, s..r), b_inv, b_mu_inv))
}

/// A bundle with an increasing filtration by subbundles; the top step is
/// the whole bundle.
#[derive(Clone, Debug)]
pub struct FilteredTwistorBundle<F: Field> {
    pub bundle: TwistorBundle<F>,
    pub steps: BTreeMap<i64, Subbundle<F>>,
}

/// Outcome of the mixed-twistor test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedVerdict {
    pub mixed: bool,
    pub failing_weight: Option<i64>,
    /// Splitting type of each `Gr_i`.
    pub graded_types: BTreeMap<i64, Vec<i64>>,
}

impl<F: Field> FilteredTwistorBundle<F> {
    /// Keeps only the weights where the rank jumps.
    pub fn new(bundle: TwistorBundle<F>, steps: BTreeMap<i64, Subbundle<F>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        let mut prev: Option<Subbundle<F>> = None;
        for (l, s) in steps {
            if s.ambient_rank() != bundle.rank() {
                return Err(Error::DimensionMismatch { expected: bundle.rank(), found: s.ambient_rank() });
            }
            if let Some(p) = &prev {
                if !s.contains(p) {
                    return Err(Error::Precondition(format!("step {l} does not contain the previous step")));
                }
            }
            if prev.as_ref().map_or(0, Subbundle::rank) < s.rank() {
                out.insert(l, s.clone());
            }
            prev = Some(s);
        }
        if prev.as_ref().map_or(0, Subbundle::rank) != bundle.rank() {
            return Err(Error::Precondition("top step is not the whole bundle".into()));
        }
        Ok(FilteredTwistorBundle { bundle, steps: out })
    }

    /// The one-step filtration at weight `w`.
    pub fn single(bundle: TwistorBundle<F>, w: i64) -> Self {
        let whole = Subbundle::whole(&bundle);
        FilteredTwistorBundle { bundle, steps: BTreeMap::from([(w, whole)]) }
    }

    /// `W_l`.
    pub fn get(&self, l: i64) -> Subbundle<F> {
        self.steps.range(..=l).next_back().map_or_else(|| Subbundle::zero(&self.bundle), |(_, s)| s.clone())
    }

    /// `W_l(V ⊗ O(k)) = W_{l−k}(V) ⊗ O(k)`.
    pub fn twisted(&self, k: i64) -> Self {
        FilteredTwistorBundle {
            bundle: self.bundle.twisted(k),
            steps: self.steps.iter().map(|(&l, s)| (l + k, s.twisted(k))).collect(),
        }
    }

    /// Gluing of `Gr_l`.
    pub fn graded_gluing(&self, l: i64) -> Result<LaurentMatrix<F>> {
        quotient_gluing(&self.get(l - 1), &self.get(l))
    }

    pub fn is_mixed_twistor(&self) -> Result<MixedVerdict> {
        chain_verdict(&self.bundle, &self.steps)
    }

    /// Whether `W_h ∩ V₁` makes `V₁` a mixed twistor.
    pub fn is_sub_mixed_twistor(&self, sub: &Subbundle<F>) -> Result<MixedVerdict> {
        self.induced_on(sub)?.is_mixed_twistor()
    }

    /// `(V₁, W ∩ V₁)` in the frames of `V₁`.
    pub fn induced_on(&self, sub: &Subbundle<F>) -> Result<FilteredTwistorBundle<F>> {
        let own = sub.as_bundle();
        let mut steps = BTreeMap::new();
        for (&l, s) in &self.steps {
            let meet = Subbundle::from_generic(&self.bundle, &s.generic_span().intersect(&sub.generic_span()))?;
            steps.insert(l, sub.restrict(&meet)?);
        }
        FilteredTwistorBundle::new(own, steps)
    }
}

/// Splitting types of the graded pieces of a chain of subbundles, and
/// whether each `Gr_i` is pure of weight `i`.
pub fn chain_verdict<F: Field>(bundle: &TwistorBundle<F>, steps: &BTreeMap<i64, Subbundle<F>>) -> Result<MixedVerdict> {
    let mut graded_types = BTreeMap::new();
    let mut failing_weight = None;
    let mut lo = Subbundle::zero(bundle);
    for (&l, hi) in steps {
        let gr = TwistorBundle::new(quotient_gluing(&lo, hi)?)?;
        let ty = gr.splitting_type()?;
        if failing_weight.is_none() && ty.iter().any(|&k| k != l) {
            failing_weight = Some(l);
        }
        graded_types.insert(l, ty);
        lo = hi.clone();
    }
    Ok(MixedVerdict { mixed: failing_weight.is_none(), failing_weight, graded_types })
}
