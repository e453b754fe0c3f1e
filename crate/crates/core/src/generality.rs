//! Generic members of the span of a commuting tuple: the weight profile over
//! the function field, positive-cone constancy, degree drop and
//! specialization.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{bareiss_rank, Field, MPoly, Matrix, Rational};
use crate::filtration::Filtration;
use crate::nilpotent::{weight_filtration, CommutingTuple};

/// Cumulative dimensions `l ↦ dim W_l` at the jumps of a weight filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericProfile {
    pub dims: BTreeMap<i64, usize>,
}

impl GenericProfile {
    /// Profile of the weight filtration of a nilpotent map whose powers have
    /// the given ranks `rank N⁰, rank N¹, …` (ending with a zero).
    pub fn from_ranks(ranks: &[usize]) -> Self {
        let mut graded: BTreeMap<i64, usize> = BTreeMap::new();
        let at_least = |i: usize| ranks[i - 1] - ranks.get(i).copied().unwrap_or(0);
        for size in 1..ranks.len() {
            let exactly = at_least(size) - if size + 1 < ranks.len() { at_least(size + 1) } else { 0 };
            for step in 0..size {
                *graded.entry(size as i64 - 1 - 2 * step as i64).or_default() += exactly;
            }
        }
        graded.retain(|_, d| *d > 0);
        if graded.is_empty() && ranks[0] > 0 {
            graded.insert(0, ranks[0]);
        }
        GenericProfile::of_graded(&graded)
    }

    fn of_graded(graded: &BTreeMap<i64, usize>) -> Self {
        let mut total = 0;
        let dims = graded
            .iter()
            .map(|(&l, &d)| {
                total += d;
                (l, total)
            })
            .collect();
        GenericProfile { dims }
    }

    pub fn of_filtration<F: Field>(w: &Filtration<F>) -> Self {
        GenericProfile::of_graded(&w.graded_dims())
    }

    /// `dim W_l`.
    pub fn dim_at(&self, l: i64) -> usize {
        self.dims.range(..=l).next_back().map_or(0, |(_, &d)| d)
    }

    /// The smallest weight where the two profiles differ.
    pub fn first_discrepancy(&self, other: &GenericProfile) -> Option<i64> {
        let mut ls: Vec<i64> = self.dims.keys().chain(other.dims.keys()).copied().collect();
        ls.sort_unstable();
        ls.into_iter().find(|&l| self.dim_at(l) != other.dim_at(l))
    }
}

fn symbolic_ranks<F: Field>(m: &Matrix<MPoly<F>>) -> Result<Vec<usize>> {
    let n = m.rows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    for _ in 0..=n {
        p = p.mul(m);
        let r = bareiss_rank(&p);
        ranks.push(r);
        if r == 0 {
            return Ok(ranks);
        }
    }
    Err(Error::NotNilpotent("matrix over the function field".into()))
}

/// `Σ_{i∈subset} t_i N_i` with fresh variables `t_i`.
fn generic_combination<F: Field>(t: &CommutingTuple<F>, subset: &[usize]) -> Matrix<MPoly<F>> {
    let d = t.dim();
    let mut out = Matrix::zeros(d, d);
    for (var, &i) in subset.iter().enumerate() {
        let m = &t.maps()[i];
        let ti = MPoly::var(var);
        out = out.add(&m.map(|c| ti.scale(c)));
    }
    out
}

fn subset_profile<F: Field>(t: &CommutingTuple<F>, subset: &[usize]) -> Result<GenericProfile> {
    Ok(GenericProfile::from_ranks(&symbolic_ranks(&generic_combination(t, subset))?))
}

/// Weight profile of `N(t) = Σ t_i N_i` over `F(t_1, …, t_n)`, from exact
/// ranks of its powers.
pub fn generic_profile<F: Field>(t: &CommutingTuple<F>) -> Result<GenericProfile> {
    subset_profile(t, &(0..t.len()).collect::<Vec<_>>())
}

/// Whether `dim W(Σ a_i N_i)_l` matches the generic profile for every `l`.
pub fn is_general<F: Field>(t: &CommutingTuple<F>, a: &[F]) -> Result<bool> {
    let w = weight_filtration(&t.combination(a)?)?;
    Ok(GenericProfile::of_filtration(&w) == generic_profile(t)?)
}

/// Outcome of a sampled constancy test.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeVerdict {
    pub constant: bool,
    pub witness: Option<String>,
}

const DOMINANT: i64 = 1_000_000;

/// Positive coefficient vectors for `k` maps: all ones, each unit-dominant
/// vector, then `samples` seeded random positive rationals.
pub fn cone_samples(k: usize, samples: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::int(1); k]];
    if k > 1 {
        for i in 0..k {
            let mut v = vec![Rational::int(1); k];
            v[i] = Rational::int(DOMINANT);
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        out.push((0..k).map(|_| Rational::new(rng.gen_range(1..=97i64), rng.gen_range(1..=31i64))).collect());
    }
    out
}

/// Evaluates `W(Σ_{i∈I} a_i N_i)` on sampled positive vectors and compares
/// the results with each other, and their dimensions with the generic profile.
pub fn positive_cone_constancy<F: Field>(
    t: &CommutingTuple<F>,
    subset: &[usize],
    samples: usize,
    seed: u64,
) -> Result<ConeVerdict> {
    if subset.iter().any(|&i| i >= t.len()) {
        return Err(Error::Precondition(format!("subset {subset:?} out of range for {} maps", t.len())));
    }
    if subset.len() <= 1 {
        return Ok(ConeVerdict { constant: true, witness: None });
    }
    let mut reference: Option<(Vec<Rational>, Filtration<F>)> = None;
    for a in cone_samples(subset.len(), samples, seed) {
        let mut full = vec![F::zero(); t.len()];
        for (&i, c) in subset.iter().zip(&a) {
            full[i] = F::from_rational(c);
        }
        let w = weight_filtration(&t.combination(&full)?)?;
        match &reference {
            None => reference = Some((a, w)),
            Some((a0, w0)) if *w0 != w => {
                let show = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
                return Ok(ConeVerdict {
                    constant: false,
                    witness: Some(format!("W differs between a = ({}) and a = ({})", show(a0), show(&a))),
                });
            }
            Some(_) => {}
        }
    }
    let (_, w0) = reference.expect("at least one sample");
    let generic = subset_profile(t, subset)?;
    if GenericProfile::of_filtration(&w0) != generic {
        return Ok(ConeVerdict {
            constant: false,
            witness: Some(format!(
                "sampled dims {:?} differ from generic dims {:?}",
                GenericProfile::of_filtration(&w0).dims,
                generic.dims
            )),
        });
    }
    Ok(ConeVerdict { constant: true, witness: None })
}

/// `N_i·W(a)_l ⊆ W(a)_{l−1}` for every `i` and `l`, for a general `a`.
pub fn degree_drop_check<F: Field>(t: &CommutingTuple<F>, a: &[F]) -> Result<bool> {
    if !is_general(t, a)? {
        return Err(Error::Precondition("coefficient vector is not general".into()));
    }
    let w = weight_filtration(&t.combination(a)?)?;
    Ok(t.maps().iter().all(|n| w.maps_into(n, &w, -1)))
}

/// Generic and special weight profiles of a one-parameter family.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializationReport {
    pub generic: GenericProfile,
    pub special: GenericProfile,
    /// Smallest weight where the profiles differ.
    pub first_discrepancy: Option<i64>,
    /// `dim_generic W_{l₀} > dim_special W_{l₀}` (vacuously true without a discrepancy).
    pub holds: bool,
}

/// Compares `W(N(s))` over `F(s)` with `W(N(s₀))`; the family uses the
/// first variable of its polynomial entries as `s`.
pub fn specialization_check<F: Field>(family: &Matrix<MPoly<F>>, s0: &F) -> Result<SpecializationReport> {
    if !family.is_square() {
        return Err(Error::DimensionMismatch { expected: family.rows(), found: family.cols() });
    }
    if let Some((e, _)) = family.entries().iter().flat_map(|p| p.terms().iter()).find(|(e, _)| e.len() > 1) {
        return Err(Error::Precondition(format!("family depends on more than one parameter (monomial {e:?})")));
    }
    let generic = GenericProfile::from_ranks(&symbolic_ranks(family)?);
    let special_matrix = family.map(|p| MPoly::constant(p.eval(std::slice::from_ref(s0))));
    let special = GenericProfile::from_ranks(&symbolic_ranks(&special_matrix)?);
    let first_discrepancy = generic.first_discrepancy(&special);
    let holds = first_discrepancy.is_none_or(|l| generic.dim_at(l) > special.dim_at(l));
    Ok(SpecializationReport { generic, special, first_discrepancy, holds })
}
