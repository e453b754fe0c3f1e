//! Increasing filtrations, graded pieces and compatible sequences.

mod graded;
mod sequence;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};

pub use graded::{induced_on_gr, GrPiece, GradedSpace, InducedFiltrations};
pub use sequence::{
    compatible_basis, compatible_splitting, flat_section_exponents, is_compatible_basis, is_compatible_element,
    is_compatible_sequence, norm_exponents, CompatWitness, Splitting,
};

/// Increasing exhaustive filtration `… ⊆ W_l ⊆ W_{l+1} ⊆ …` of `F^n`.
///
/// Only the jumps are stored: `steps[l] = W_l` whenever `W_l ≠ W_{l−1}`.
/// Below the first jump the filtration is zero, from the last jump on it is
/// the whole space. This makes equality of filtrations structural.
#[derive(Clone, PartialEq, Eq)]
pub struct Filtration<F> {
    ambient: usize,
    steps: BTreeMap<i64, Subspace<F>>,
}

impl<F: Field> Filtration<F> {
    /// Builds a filtration from a map of weights to subspaces. Stored weights
    /// must be nested and the largest must be the whole space.
    pub fn from_steps(ambient: usize, steps: BTreeMap<i64, Subspace<F>>) -> Result<Self> {
        let mut prev = Subspace::zero(ambient);
        let mut out = BTreeMap::new();
        for (l, s) in steps {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: s.ambient_dim() });
            }
            if !s.contains(&prev) {
                return Err(Error::Precondition(format!("filtration step {l} does not contain the previous step")));
            }
            if s.dim() > prev.dim() {
                out.insert(l, s.clone());
                prev = s;
            }
        }
        if !prev.is_full() {
            return Err(Error::Precondition("largest filtration step is not the whole space".into()));
        }
        Ok(Filtration { ambient, steps: out })
    }

    /// Evaluates `f` on `lo..=hi`; `f(hi)` must be the whole space.
    pub fn from_fn(ambient: usize, lo: i64, hi: i64, f: impl FnMut(i64) -> Subspace<F>) -> Result<Self> {
        Filtration::from_steps(ambient, (lo..=hi).map(f).zip(lo..=hi).map(|(s, l)| (l, s)).collect())
    }

    /// The filtration with a single jump at `weight`.
    pub fn trivial(ambient: usize, weight: i64) -> Self {
        let mut steps = BTreeMap::new();
        if ambient > 0 {
            steps.insert(weight, Subspace::full(ambient));
        }
        Filtration { ambient, steps }
    }

    /// Filtration whose `l`-th step is spanned by the basis vectors of weight `≤ l`.
    pub fn from_weighted_basis(basis: &Matrix<F>, weights: &[i64]) -> Result<Self> {
        let n = basis.rows();
        if weights.len() != basis.cols() {
            return Err(Error::DimensionMismatch { expected: basis.cols(), found: weights.len() });
        }
        let Some((&lo, &hi)) = weights.iter().min().zip(weights.iter().max()) else {
            return Filtration::from_steps(n, BTreeMap::new());
        };
        Filtration::from_fn(n, lo, hi, |l| {
            let idx: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] <= l).collect();
            Subspace::span(&basis.select_cols(&idx))
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace<F>> {
        &self.steps
    }

    /// `W_l`.
    pub fn get(&self, l: i64) -> Subspace<F> {
        self.steps.range(..=l).next_back().map_or_else(|| Subspace::zero(self.ambient), |(_, s)| s.clone())
    }

    /// Weights `l` with `Gr_l ≠ 0`, increasing.
    pub fn jumps(&self) -> Vec<i64> {
        self.steps.keys().copied().collect()
    }

    /// Bottom number `min{l : Gr_l ≠ 0}`.
    pub fn bottom(&self) -> Option<i64> {
        self.steps.keys().next().copied()
    }

    /// Smallest `l` with `W_l` the whole space.
    pub fn top(&self) -> Option<i64> {
        self.steps.keys().next_back().copied()
    }

    /// Weights where the filtration can change, padded by one below:
    /// `bottom − 1 ..= top`. Empty for the zero space.
    pub fn grid(&self) -> Vec<i64> {
        match (self.bottom(), self.top()) {
            (Some(b), Some(t)) => (b - 1..=t).collect(),
            _ => Vec::new(),
        }
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut prev = 0;
        self.steps
            .iter()
            .map(|(&l, s)| {
                let d = s.dim() - prev;
                prev = s.dim();
                (l, d)
            })
            .collect()
    }

    /// `deg(v) = min{l : v ∈ W_l}`.
    pub fn degree(&self, v: &[F]) -> Result<i64> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        if v.iter().all(F::is_zero) {
            return Err(Error::Precondition("degree of the zero vector".into()));
        }
        Ok(*self.steps.iter().find(|(_, s)| s.contains_vector(v)).expect("top step is the whole space").0)
    }

    /// `W'_l = W_{l+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Filtration { ambient: self.ambient, steps: self.steps.iter().map(|(&l, s)| (l - k, s.clone())).collect() }
    }

    /// Checks `m·W_l ⊆ W_{l+shift}` for every weight.
    pub fn maps_into(&self, m: &Matrix<F>, target: &Filtration<F>, shift: i64) -> bool {
        self.steps.iter().all(|(&l, s)| target.get(l + shift).contains(&s.image_under(m)))
    }

    /// Image filtration `l ↦ m(W_l)` inside the column space of `m`,
    /// expressed as subspaces of the target.
    pub fn image_steps(&self, m: &Matrix<F>) -> BTreeMap<i64, Subspace<F>> {
        self.steps.iter().map(|(&l, s)| (l, s.image_under(m))).collect()
    }

    /// Coordinates of this filtration in a new basis: `W'_l = B⁻¹ W_l`.
    pub fn in_basis(&self, basis_inv: &Matrix<F>) -> Self {
        Filtration { ambient: self.ambient, steps: self.steps.iter().map(|(&l, s)| (l, s.image_under(basis_inv))).collect() }
    }

    /// Nesting, exhaustion and separation, re-checked from scratch.
    pub fn is_valid(&self) -> bool {
        let mut prev = Subspace::zero(self.ambient);
        for s in self.steps.values() {
            if s.ambient_dim() != self.ambient || !s.contains(&prev) || s.dim() == prev.dim() {
                return false;
            }
            prev = s.clone();
        }
        prev.is_full()
    }
}

impl<F: Field> std::fmt::Debug for Filtration<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.steps.iter().map(|(l, s)| (l, s.dim()))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::int(x)).collect()
    }

    fn std_flag(n: usize) -> Filtration<Rational> {
        Filtration::from_weighted_basis(&Matrix::identity(n), &(0..n as i64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn degree_of_mixed_vector() {
        let w = Filtration::from_weighted_basis(&Matrix::identity(3), &[-1, 1, 3]).unwrap();
        assert_eq!(w.degree(&q(&[1, 0, 0])).unwrap(), -1);
        assert_eq!(w.degree(&q(&[0, 1, 0])).unwrap(), 1);
        assert_eq!(w.degree(&q(&[0, 2, 5])).unwrap(), 3);
        assert!(w.degree(&q(&[0, 0, 0])).is_err());
    }

    #[test]
    fn trivial_filtration_degrees() {
        let w = Filtration::<Rational>::trivial(2, 0);
        assert_eq!(w.degree(&q(&[3, -1])).unwrap(), 0);
        assert_eq!(w.graded_dims(), BTreeMap::from([(0, 2)]));
        assert!(w.get(-1).is_zero());
    }

    #[test]
    fn rejects_non_nested_steps() {
        let a = Subspace::<Rational>::coordinate(2, &[0]);
        let b = Subspace::coordinate(2, &[1]);
        let steps = BTreeMap::from([(0, a), (1, b), (2, Subspace::full(2))]);
        assert!(Filtration::from_steps(2, steps).is_err());
    }

    #[test]
    fn repeated_steps_are_collapsed() {
        let w = std_flag(3);
        let mut steps = w.steps().clone();
        steps.insert(5, Subspace::full(3));
        steps.insert(-4, Subspace::zero(3));
        assert_eq!(Filtration::from_steps(3, steps).unwrap(), w);
        assert_eq!(w.shifted(1).get(-1), w.get(0));
    }
}
