//! The partial Koszul complex `Π(N_1, …, N_n)` of a commuting tuple, its
//! weight filtration and the purity criterion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};
use crate::filtration::Filtration;
use crate::nilpotent::{weight_filtration, CommutingTuple, GrFrame};

/// `Im N_J · e_J`, one summand of a Koszul term.
#[derive(Clone, Debug)]
pub struct KoszulSummand<F: Field> {
    /// 0-based indices, increasing.
    pub subset: Vec<usize>,
    pub space: Subspace<F>,
    /// First coordinate of this summand inside its term.
    pub offset: usize,
}

/// Terms are stored in coordinates: term `k` is `F^{Σ dim Im N_J}` with one
/// block per `|J| = k`, each in the canonical echelon basis of `Im N_J`.
#[derive(Clone, Debug)]
pub struct KoszulComplex<F: Field> {
    tuple: CommutingTuple<F>,
    terms: Vec<Vec<KoszulSummand<F>>>,
    differentials: Vec<Matrix<F>>,
}

/// Index subsets of `0..n` of size `k` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> =
        (0u64..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
    out.sort();
    out
}

/// `e_j ∧ e_J = sign · e_{J∪{j}}`, or `None` when `j ∈ J`.
pub fn wedge_sign(j: usize, subset: &[usize]) -> Option<i64> {
    if subset.contains(&j) {
        return None;
    }
    let before = subset.iter().filter(|&&i| i < j).count();
    Some(if before % 2 == 0 { 1 } else { -1 })
}

fn product<F: Field>(t: &CommutingTuple<F>, subset: &[usize]) -> Matrix<F> {
    subset.iter().fold(Matrix::identity(t.dim()), |acc, &j| acc.mul(&t.maps()[j]))
}

impl<F: Field> KoszulComplex<F> {
    pub fn new(t: &CommutingTuple<F>) -> Result<Self> {
        let n = t.len();
        let mut terms = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut offset = 0;
            let mut term = Vec::new();
            for subset in subsets(n, k) {
                let space = product(t, &subset).image();
                let d = space.dim();
                term.push(KoszulSummand { subset, space, offset });
                offset += d;
            }
            terms.push(term);
        }
        let mut c = KoszulComplex { tuple: t.clone(), terms, differentials: Vec::new() };
        c.differentials = (0..n).map(|k| c.differential_of(k)).collect::<Result<_>>()?;
        for k in 1..n {
            if !c.differentials[k].mul(&c.differentials[k - 1]).is_zero() {
                return Err(Error::Internal(format!("d∘d ≠ 0 from degree {}", k - 1)));
            }
        }
        Ok(c)
    }

    fn differential_of(&self, k: usize) -> Result<Matrix<F>> {
        let rows = self.term_dim(k + 1);
        let mut cols = Vec::with_capacity(self.term_dim(k));
        for s in &self.terms[k] {
            for b in s.space.basis_vectors() {
                let mut col = vec![F::zero(); rows];
                for (j, n) in self.tuple.maps().iter().enumerate() {
                    let Some(sign) = wedge_sign(j, &s.subset) else { continue };
                    let mut target = s.subset.clone();
                    target.push(j);
                    target.sort_unstable();
                    let t = self.summand(k + 1, &target).expect("every subset has a summand");
                    let x = t
                        .space
                        .coordinates(&n.mul_vec(&b))
                        .ok_or_else(|| Error::Internal(format!("N_{} Im N_J ⊄ Im N_(J∪{})", j + 1, j + 1)))?;
                    for (i, xi) in x.into_iter().enumerate() {
                        col[t.offset + i] = col[t.offset + i].add(&xi.mul(&F::from_int(sign)));
                    }
                }
                cols.push(col);
            }
        }
        Ok(Matrix::from_columns(rows, &cols))
    }

    pub fn tuple(&self) -> &CommutingTuple<F> {
        &self.tuple
    }

    /// `n`, the top degree.
    pub fn length(&self) -> usize {
        self.tuple.len()
    }

    pub fn terms(&self, k: usize) -> &[KoszulSummand<F>] {
        &self.terms[k]
    }

    pub fn summand(&self, k: usize, subset: &[usize]) -> Option<&KoszulSummand<F>> {
        self.terms.get(k)?.iter().find(|s| s.subset == subset)
    }

    pub fn term_dim(&self, k: usize) -> usize {
        self.terms.get(k).map_or(0, |t| t.iter().map(|s| s.space.dim()).sum())
    }

    pub fn term_dims(&self) -> Vec<usize> {
        (0..=self.length()).map(|k| self.term_dim(k)).collect()
    }

    /// `d: Π^k → Π^{k+1}`; zero maps outside `0..n`.
    pub fn differential(&self, k: usize) -> Matrix<F> {
        self.differentials.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.term_dim(k + 1), self.term_dim(k)))
    }

    pub fn cocycles(&self, k: usize) -> Subspace<F> {
        self.differential(k).kernel()
    }

    pub fn coboundaries(&self, k: usize) -> Subspace<F> {
        if k == 0 {
            Subspace::zero(self.term_dim(0))
        } else {
            self.differential(k - 1).image()
        }
    }

    /// `H^k` with representatives in term-`k` coordinates.
    pub fn cohomology(&self, k: usize) -> Result<Cohomology<F>> {
        if k > self.length() {
            return Err(Error::Precondition(format!("degree {k} above the top degree {}", self.length())));
        }
        let representatives = self.cocycles(k).quotient_basis(&self.coboundaries(k))?;
        Ok(Cohomology { degree: k, dim: representatives.cols(), representatives })
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        (0..=self.length()).map(|k| self.cohomology(k).map(|h| h.dim)).collect()
    }

    /// A vector of term `k` from one vector of `V` per summand.
    pub fn assemble(&self, k: usize, parts: &BTreeMap<Vec<usize>, Vec<F>>) -> Result<Vec<F>> {
        let mut out = vec![F::zero(); self.term_dim(k)];
        for (subset, v) in parts {
            let s = self.summand(k, subset).ok_or_else(|| Error::Precondition(format!("no summand {subset:?} in degree {k}")))?;
            let x = s.space.coordinates(v).ok_or_else(|| Error::Precondition(format!("vector not in Im N_{subset:?}")))?;
            out[s.offset..s.offset + x.len()].clone_from_slice(&x);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Cohomology<F: Field> {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Matrix<F>,
}

/// How weights on the complex are labelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightConvention {
    /// `W_h(Im N_J) = N_J(W(n)_h)`.
    Base,
    /// `W^{cks}_h(Π^a) = W_{a+h}(Π^a)`.
    Cks,
    /// `W^{kk}_h(Π^a) = W_{h−w}(Π^a)`.
    Kk { w: i64 },
}

impl WeightConvention {
    /// Offset `o` with `W^{conv}_h(Π^a) = W_{h+o}(Π^a)`.
    pub fn offset(self, a: usize) -> i64 {
        match self {
            WeightConvention::Base => 0,
            WeightConvention::Cks => a as i64,
            WeightConvention::Kk { w } => -w,
        }
    }

    /// The weight at which purity of `H^a` is stated.
    pub fn purity_index(self, a: usize) -> i64 {
        a as i64 - self.offset(a)
    }
}

/// Koszul complex with the filtration induced by `W(n)`.
#[derive(Clone, Debug)]
pub struct FilteredKoszul<F: Field> {
    pub complex: KoszulComplex<F>,
    pub convention: WeightConvention,
    base: Vec<Filtration<F>>,
}

impl<F: Field> FilteredKoszul<F> {
    pub fn new(t: &CommutingTuple<F>) -> Result<Self> {
        FilteredKoszul::from_complex(KoszulComplex::new(t)?)
    }

    pub fn from_complex(complex: KoszulComplex<F>) -> Result<Self> {
        let t = complex.tuple();
        let w = weight_filtration(&t.partial_sum(t.len()))?;
        let (lo, hi) = (w.bottom().unwrap_or(0), w.top().unwrap_or(0));
        let mut base = Vec::new();
        for k in 0..=complex.length() {
            let dim = complex.term_dim(k);
            let f = Filtration::from_fn(dim, lo, hi, |h| {
                let wh = w.get(h);
                let mut cols: Vec<Vec<F>> = Vec::new();
                for s in complex.terms(k) {
                    let img = wh.image_under(&product(t, &s.subset));
                    for v in img.basis_vectors() {
                        let mut col = vec![F::zero(); dim];
                        let x = s.space.coordinates(&v).expect("N_J(W_h) ⊆ Im N_J");
                        col[s.offset..s.offset + x.len()].clone_from_slice(&x);
                        cols.push(col);
                    }
                }
                Subspace::span_vectors(dim, &cols)
            })?;
            base.push(f);
        }
        let out = FilteredKoszul { complex, convention: WeightConvention::Base, base };
        for k in 0..out.complex.length() {
            if !out.base[k].maps_into(&out.complex.differential(k), &out.base[k + 1], 0) {
                return Err(Error::Internal(format!("d does not preserve W in degree {k}")));
            }
        }
        Ok(out)
    }

    /// Filtration of term `k` in the current convention (on the zero space
    /// above the top degree).
    pub fn filtration(&self, k: usize) -> Filtration<F> {
        self.base.get(k).map_or_else(|| Filtration::trivial(0, 0), |f| f.shifted(self.convention.offset(k)))
    }

    /// Same complex, weights relabelled.
    pub fn reindexed(&self, convention: WeightConvention) -> Self {
        FilteredKoszul { convention, ..self.clone() }
    }

    /// Weights at which some term filtration can change.
    pub fn weight_range(&self) -> Vec<i64> {
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for k in 0..=self.complex.length() {
            let g = self.filtration(k).grid();
            if let (Some(&a), Some(&b)) = (g.first(), g.last()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo > hi {
            Vec::new()
        } else {
            (lo..=hi).collect()
        }
    }

    /// `dim W_h H^k` for `W_h H^k` the image of `Ker d ∩ W_h(Π^k)`.
    pub fn weight_of_cohomology(&self, k: usize, h: i64) -> usize {
        let z = self.complex.cocycles(k);
        let b = self.complex.coboundaries(k);
        z.intersect(&self.filtration(k).get(h)).sum(&b).dim() - b.dim()
    }

    /// `h ↦ dim W_h H^k` over the weight range.
    pub fn filtered_cohomology(&self, k: usize) -> BTreeMap<i64, usize> {
        self.weight_range().into_iter().map(|h| (h, self.weight_of_cohomology(k, h))).collect()
    }

    /// Whether `W_k H^k = H^k` for every `k` (indices taken in the current
    /// convention).
    pub fn purity(&self) -> Result<PurityVerdict> {
        for k in 0..=self.complex.length() {
            let total = self.complex.cohomology(k)?.dim;
            let h = self.convention.purity_index(k);
            let reached = self.weight_of_cohomology(k, h);
            if reached != total {
                return Ok(PurityVerdict { pure: false, failure: Some(PurityFailure { degree: k, weight: h, reached, total }) });
            }
        }
        Ok(PurityVerdict { pure: true, failure: None })
    }

    /// `H^a(Gr_k Π)` for all `k` in the weight range and all degrees `a`,
    /// computed as the subquotient `Z / B` with
    /// `Z = W_k ∩ d⁻¹(W_{k−1})`, `B = W_{k−1} + d(W_k)`.
    pub fn graded_cohomology(&self) -> Result<BTreeMap<(i64, usize), usize>> {
        let c = &self.complex;
        let mut out = BTreeMap::new();
        for k in self.weight_range() {
            for a in 0..=c.length() {
                let wk = self.filtration(a).get(k);
                let wk1 = self.filtration(a).get(k - 1);
                let d = c.differential(a);
                let z = wk.intersect(&self.filtration(a + 1).get(k - 1).preimage_under(&d));
                let mut b = wk1;
                if a > 0 {
                    b = b.sum(&self.filtration(a - 1).get(k).image_under(&c.differential(a - 1)));
                }
                if !z.contains(&b) {
                    return Err(Error::Internal(format!("graded piece ({k}, {a}) is not a subquotient")));
                }
                out.insert((k, a), z.dim() - b.dim());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PurityFailure {
    pub degree: usize,
    pub weight: i64,
    /// `dim W_weight H^degree`.
    pub reached: usize,
    /// `dim H^degree`.
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityVerdict {
    pub pure: bool,
    pub failure: Option<PurityFailure>,
}

/// `H^a(Gr_k Π)` table with the vanishing verdict for `a < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVanishing {
    pub table: BTreeMap<(i64, usize), usize>,
    pub vanishing: bool,
    /// First `(k, a)` with `a < k` and `H^a(Gr_k) ≠ 0`.
    pub witness: Option<(i64, usize)>,
    pub purity: bool,
}

/// A grading `V = ⊕ V_h` splitting `W(n)` with `N_i V_h ⊆ V_{h−2}`.
pub type Grading<F> = Vec<(i64, Subspace<F>)>;

/// Checks `H^a(Gr_k Π) = 0` for `a < k` and that it implies purity.
///
/// With a grading the graded pieces are `Π_k^a = ⊕ N_J(V_k)`; without one
/// they are computed as subquotients of the filtration.
pub fn graded_vanishing_check<F: Field>(
    c: &FilteredKoszul<F>,
    grading: Option<&[(i64, Subspace<F>)]>,
) -> Result<GradedVanishing> {
    let base = c.reindexed(WeightConvention::Base);
    let table = match grading {
        None => base.graded_cohomology()?,
        Some(g) => graded_pieces_cohomology(&base, g)?,
    };
    let witness = table.iter().find(|(&(k, a), &d)| (a as i64) < k && d > 0).map(|(&key, _)| key);
    let vanishing = witness.is_none();
    let purity = base.purity()?.pure;
    if vanishing && !purity {
        return Err(Error::Internal("graded vanishing holds but purity fails".into()));
    }
    Ok(GradedVanishing { table, vanishing, witness, purity })
}

fn graded_pieces_cohomology<F: Field>(
    c: &FilteredKoszul<F>,
    grading: &[(i64, Subspace<F>)],
) -> Result<BTreeMap<(i64, usize), usize>> {
    let cx = &c.complex;
    let t = cx.tuple();
    let dim = t.dim();
    let w = weight_filtration(&t.partial_sum(t.len()))?;
    let mut pieces: BTreeMap<i64, Subspace<F>> = BTreeMap::new();
    let mut total = Subspace::zero(dim);
    let mut dims = 0;
    for (h, s) in grading {
        if s.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: s.ambient_dim() });
        }
        total = total.sum(s);
        dims += s.dim();
        let e = pieces.entry(*h).or_insert_with(|| Subspace::zero(dim));
        *e = e.sum(s);
    }
    if dims != dim || !total.is_full() {
        return Err(Error::Precondition("grading is not a direct sum decomposition of V".into()));
    }
    let piece = |h: i64| pieces.get(&h).cloned().unwrap_or_else(|| Subspace::zero(dim));
    for l in w.grid() {
        let sum = pieces.range(..=l).fold(Subspace::zero(dim), |acc, (_, s)| acc.sum(s));
        if sum != w.get(l) {
            return Err(Error::Precondition(format!("grading incompatible with filtration: ⊕_(h≤{l}) V_h ≠ W_{l}")));
        }
    }
    for (i, n) in t.maps().iter().enumerate() {
        for (&h, s) in &pieces {
            if !piece(h - 2).contains(&s.image_under(n)) {
                return Err(Error::Precondition(format!(
                    "grading incompatible with filtration: N_{} V_{h} ⊄ V_{}",
                    i + 1,
                    h - 2
                )));
            }
        }
    }
    let graded_term = |k: i64, a: usize| -> Subspace<F> {
        let d = cx.term_dim(a);
        let mut cols = Vec::new();
        for s in cx.terms(a) {
            for v in piece(k).image_under(&product(t, &s.subset)).basis_vectors() {
                let mut col = vec![F::zero(); d];
                let x = s.space.coordinates(&v).expect("N_J(V_k) ⊆ Im N_J");
                col[s.offset..s.offset + x.len()].clone_from_slice(&x);
                cols.push(col);
            }
        }
        Subspace::span_vectors(d, &cols)
    };
    let mut out = BTreeMap::new();
    for k in c.weight_range() {
        for a in 0..=cx.length() {
            let z = graded_term(k, a).intersect(&cx.cocycles(a));
            let b =
                if a == 0 { Subspace::zero(cx.term_dim(0)) } else { graded_term(k, a - 1).image_under(&cx.differential(a - 1)) };
            if !z.contains(&b) {
                return Err(Error::Internal(format!("differential leaves graded piece {k}")));
            }
            out.insert((k, a), z.dim() - b.dim());
        }
    }
    Ok(out)
}

/// The graded tuple `(N_1^{(∞)}, …, N_n^{(∞)})` on `⊕_h Gr_h^{W(n)}`, with
/// its grading by coordinate blocks.
pub fn graded_model<F: Field>(t: &CommutingTuple<F>) -> Result<(CommutingTuple<F>, Grading<F>)> {
    let w = weight_filtration(&t.partial_sum(t.len()))?;
    let frame = GrFrame::new(w);
    let maps = t.maps().iter().map(|n| frame.lowering(n)).collect();
    let grading = frame.blocks.keys().map(|&h| (h, frame.block(h))).collect();
    Ok((CommutingTuple::new(maps)?, grading))
}

/// First `(J, k)` where `N_J(W_k) ≠ Im N_J ∩ W_{k−2|J|}`, with `W = W(n)`.
pub fn twistor_filtration_identity<F: Field>(t: &CommutingTuple<F>) -> Result<Option<(Vec<usize>, i64)>> {
    let w = weight_filtration(&t.partial_sum(t.len()))?;
    let n = t.len();
    let grid = w.grid();
    for size in 1..=n {
        for subset in subsets(n, size) {
            let nj = product(t, &subset);
            let image = nj.image();
            let shift = 2 * size as i64;
            let lo = grid.first().copied().unwrap_or(0);
            let hi = grid.last().copied().unwrap_or(0) + shift;
            for k in lo..=hi {
                if w.get(k).image_under(&nj) != image.intersect(&w.get(k - shift)) {
                    return Ok(Some((subset, k)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Rational, Ring};

    fn jordan(k: usize) -> Matrix<Rational> {
        Matrix::from_fn(k, k, |r, c| Rational::int((c == r + 1) as i64))
    }

    fn tensor_pair() -> CommutingTuple<Rational> {
        let i = Matrix::identity(2);
        CommutingTuple::new(vec![jordan(2).kron(&i), i.kron(&jordan(2))]).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(wedge_sign(0, &[1]), Some(1));
        assert_eq!(wedge_sign(1, &[0]), Some(-1));
        assert_eq!(wedge_sign(2, &[0, 1]), Some(1));
        assert_eq!(wedge_sign(1, &[1]), None);
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn single_block() {
        let t = CommutingTuple::new(vec![jordan(3)]).unwrap();
        let c = FilteredKoszul::new(&t).unwrap();
        assert_eq!(c.complex.term_dims(), vec![3, 2]);
        assert_eq!(c.complex.cohomology_dims().unwrap(), vec![1, 0]);
        assert!(c.purity().unwrap().pure);
        assert_eq!(twistor_filtration_identity(&t).unwrap(), None);
    }

    #[test]
    fn zero_tuple() {
        let z = Matrix::<Rational>::zeros(2, 2);
        let t = CommutingTuple::new(vec![z.clone(), z]).unwrap();
        let c = FilteredKoszul::new(&t).unwrap();
        assert_eq!(c.complex.term_dims(), vec![2, 0, 0]);
        assert_eq!(c.filtered_cohomology(0), BTreeMap::from([(-1, 0), (0, 2)]));
    }

    #[test]
    fn tensor_pair_complex() {
        let t = tensor_pair();
        let c = FilteredKoszul::new(&t).unwrap();
        assert_eq!(c.complex.term_dims(), vec![4, 4, 1]);
        assert_eq!(c.complex.cohomology_dims().unwrap(), vec![1, 0, 0]);
        assert!(c.purity().unwrap().pure);
        let g = graded_vanishing_check(&c, None).unwrap();
        assert!(g.vanishing && g.purity);
        let (gt, grading) = graded_model(&t).unwrap();
        let gc = FilteredKoszul::new(&gt).unwrap();
        let gg = graded_vanishing_check(&gc, Some(&grading)).unwrap();
        assert_eq!(gg.table, g.table);
    }

    #[test]
    fn reindexing() {
        let c = FilteredKoszul::new(&tensor_pair()).unwrap();
        let kk0 = c.reindexed(WeightConvention::Kk { w: 0 });
        for k in 0..3 {
            assert_eq!(kk0.filtration(k), c.filtration(k));
        }
        let cks = c.reindexed(WeightConvention::Cks);
        assert_eq!(cks.filtration(0), c.filtration(0));
        assert_eq!(cks.filtration(1).get(0), c.filtration(1).get(1));
        assert!(cks.purity().unwrap().pure);
        assert_eq!(cks.reindexed(WeightConvention::Base).filtration(2), c.filtration(2));
    }

    #[test]
    fn assemble_and_dd() {
        let t = tensor_pair();
        let c = KoszulComplex::new(&t).unwrap();
        let v = vec![Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()];
        let x = c.assemble(0, &BTreeMap::from([(vec![], v)])).unwrap();
        assert_eq!(c.differential(0).mul_vec(&x).len(), 4);
        assert!(c.differential(1).mul(&c.differential(0)).is_zero());
    }
}
