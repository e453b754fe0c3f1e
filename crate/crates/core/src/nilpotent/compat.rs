use std::collections::BTreeMap;
use std::ops::Range;

use super::tuple::CommutingTuple;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};
use crate::filtration::{compatible_splitting, Filtration, GradedSpace, Splitting};

/// Knobs for the sampled positive-cone part of the compatibility checks.
#[derive(Clone, Debug)]
pub struct CompatOptions {
    /// Whether to test constancy of `W(Σ_{i∈I} a_i N_i)` on positive cones.
    pub cone: bool,
    /// Pseudorandom positive samples per subset, on top of the fixed ones.
    pub cone_samples: usize,
    pub seed: u64,
}

impl Default for CompatOptions {
    fn default() -> Self {
        CompatOptions { cone: true, cone_samples: 2, seed: 0 }
    }
}

impl CompatOptions {
    pub fn without_cone() -> Self {
        CompatOptions { cone: false, ..CompatOptions::default() }
    }
}

/// Why a compatibility check failed. `depth` counts passes to graded pieces.
#[derive(Clone, Debug)]
pub enum CompatFailure<F: Field> {
    /// Positive-cone constancy fails for the maps `subset` (0-based).
    Cone { depth: usize, subset: Vec<usize>, detail: String },
    /// `Im(π_h)` differs from the intersection of induced steps.
    Image { depth: usize, h: Vec<i64>, image: Subspace<F>, target: Subspace<F> },
    /// The bottom-part identity fails for `W(j)` at weight `weight`.
    Bottom { depth: usize, j: usize, weight: i64, lhs: Subspace<F>, rhs: Subspace<F> },
    /// `Im(Pπ_h)` is strictly smaller than its target.
    Primitive { h: Vec<i64>, image: Subspace<F>, target: Subspace<F> },
    /// Failure of an exterior power `∧^m`.
    Exterior { power: usize, inner: Box<CompatFailure<F>> },
    /// Failure of a reordered tuple.
    Permuted { permutation: Vec<usize>, inner: Box<CompatFailure<F>> },
}

impl<F: Field> CompatFailure<F> {
    pub fn h(&self) -> Option<Vec<i64>> {
        match self {
            CompatFailure::Image { h, .. } | CompatFailure::Primitive { h, .. } => Some(h.clone()),
            CompatFailure::Bottom { weight, .. } => Some(vec![*weight]),
            CompatFailure::Exterior { inner, .. } | CompatFailure::Permuted { inner, .. } => inner.h(),
            CompatFailure::Cone { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CompatFailure::Cone { depth, subset, detail } => {
                format!("positive-cone constancy fails at depth {depth} for maps {subset:?}: {detail}")
            }
            CompatFailure::Image { depth, h, image, target } => format!(
                "image condition fails at depth {depth}, h = {h:?}: dim Im = {}, dim target = {}",
                image.dim(),
                target.dim()
            ),
            CompatFailure::Bottom { depth, j, weight, lhs, rhs } => {
                format!("bottom identity fails at depth {depth} for W({j}) at {weight}: dims {} vs {}", lhs.dim(), rhs.dim())
            }
            CompatFailure::Primitive { h, image, target } => {
                format!("primitive image condition fails at h = {h:?}: dim Im = {}, dim target = {}", image.dim(), target.dim())
            }
            CompatFailure::Exterior { power, inner } => format!("exterior power {power}: {}", inner.describe()),
            CompatFailure::Permuted { permutation, inner } => format!("order {permutation:?}: {}", inner.describe()),
        }
    }
}

/// Coordinates adapted to `W(1)`: block `a` of `B⁻¹v` is the class of
/// `v ∈ W(1)_a` in `Gr_a`, so `Gr^{(1)}` is `F^n` with a block grading.
#[derive(Clone, Debug)]
pub struct GrFrame<F: Field> {
    pub w1: Filtration<F>,
    pub basis: Matrix<F>,
    pub basis_inv: Matrix<F>,
    pub blocks: BTreeMap<i64, Range<usize>>,
}

impl<F: Field> GrFrame<F> {
    pub fn new(w1: Filtration<F>) -> Self {
        let n = w1.ambient_dim();
        let gr = GradedSpace::of(&w1);
        let basis = gr.adapted_basis(n);
        let basis_inv = basis.inverse().expect("adapted basis is invertible");
        let mut blocks = BTreeMap::new();
        let mut start = 0;
        for (&a, p) in &gr.pieces {
            blocks.insert(a, start..start + p.dim());
            start += p.dim();
        }
        GrFrame { w1, basis, basis_inv, blocks }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    fn block_of(&self, row: usize) -> i64 {
        *self.blocks.iter().find(|(_, r)| r.contains(&row)).expect("row inside a block").0
    }

    /// `Gr_a` as a coordinate subspace.
    pub fn block(&self, a: i64) -> Subspace<F> {
        match self.blocks.get(&a) {
            Some(r) => Subspace::coordinate(self.dim(), &r.clone().collect::<Vec<_>>()),
            None => Subspace::zero(self.dim()),
        }
    }

    /// Image of `s ∩ W(1)_a` in `Gr_a`.
    pub fn project(&self, a: i64, s: &Subspace<F>) -> Subspace<F> {
        let Some(range) = self.blocks.get(&a) else {
            return Subspace::zero(self.dim());
        };
        let t = s.intersect(&self.w1.get(a));
        let y = self.basis_inv.mul(t.basis());
        let kept = Matrix::from_fn(y.rows(), y.cols(), |i, j| if range.contains(&i) { y[(i, j)].clone() } else { F::zero() });
        Subspace::span(&kept)
    }

    /// Degree-zero part of `B⁻¹ m B`: the map induced on `Gr^{(1)}`.
    pub fn induced(&self, m: &Matrix<F>) -> Matrix<F> {
        self.block_part(m, 0)
    }

    /// Part of `B⁻¹ m B` sending `Gr_a` to `Gr_{a−2}`.
    pub fn lowering(&self, m: &Matrix<F>) -> Matrix<F> {
        self.block_part(m, -2)
    }

    fn block_part(&self, m: &Matrix<F>, shift: i64) -> Matrix<F> {
        let c = self.basis_inv.mul(&m.mul(&self.basis));
        Matrix::from_fn(c.rows(), c.cols(), |i, j| {
            if self.block_of(i) == self.block_of(j) + shift {
                c[(i, j)].clone()
            } else {
                F::zero()
            }
        })
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>()).filter(|s| s.len() >= 2)
}

fn cone_failure<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions, depth: usize) -> Result<Option<CompatFailure<F>>> {
    if !opts.cone {
        return Ok(None);
    }
    for subset in subsets(t.len()) {
        let verdict = crate::generality::positive_cone_constancy(t, &subset, opts.cone_samples, opts.seed)?;
        if !verdict.constant {
            let detail = verdict.witness.unwrap_or_default();
            return Ok(Some(CompatFailure::Cone { depth, subset, detail }));
        }
    }
    Ok(None)
}

/// Absolute weights `h_j` at which a condition involving `W(j)_{h_j}` and
/// the induced `W'_{h_j − a}` can change.
fn joint_range<F: Field>(w: &Filtration<F>, induced: &Filtration<F>, a: i64) -> Vec<i64> {
    let lo = [w.bottom(), induced.bottom().map(|b| b + a)].into_iter().flatten().min();
    let hi = [w.top(), induced.top().map(|t| t + a)].into_iter().flatten().max();
    match (lo, hi) {
        (Some(lo), Some(hi)) => (lo - 1..=hi).collect(),
        _ => vec![0],
    }
}

fn cartesian(ranges: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out.into_iter().flat_map(|p| r.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Everything the conditions on `Gr^{W(N_1)}` are phrased in.
struct Layer<F: Field> {
    ws: Vec<Filtration<F>>,
    frame: GrFrame<F>,
    induced: CommutingTuple<F>,
    /// `W(N^{(1)}(j))` for `j = 2, …, n`.
    induced_ws: Vec<Filtration<F>>,
}

impl<F: Field> Layer<F> {
    fn of(t: &CommutingTuple<F>) -> Self {
        let ws = t.filtrations();
        let frame = GrFrame::new(ws[0].clone());
        let maps: Vec<Matrix<F>> = t.maps()[1..].iter().map(|m| frame.induced(m)).collect();
        let induced = CommutingTuple::from_trusted(t.dim(), maps);
        let induced_ws = induced.filtrations();
        Layer { ws, frame, induced, induced_ws }
    }

    fn ranges(&self, a: i64) -> Vec<Vec<i64>> {
        self.ws[1..].iter().zip(&self.induced_ws).map(|(w, iw)| joint_range(w, iw, a)).collect()
    }

    fn upstairs(&self, a: i64, rest: &[i64]) -> Subspace<F> {
        self.ws[1..].iter().zip(rest).fold(self.frame.w1.get(a), |acc, (w, &l)| acc.intersect(&w.get(l)))
    }

    /// `Gr_a ∩ ⋂_j W(N^{(1)}(j))_{h_j − a}`.
    fn target(&self, a: i64, rest: &[i64]) -> Subspace<F> {
        self.induced_ws.iter().zip(rest).fold(self.frame.block(a), |acc, (w, &l)| acc.intersect(&w.get(l - a)))
    }

    /// `Gr_a ∩ ⋂_j W^{(1)}(j)_{h_j}` with the unshifted induced filtrations.
    fn restated_target(&self, a: i64, rest: &[i64]) -> Subspace<F> {
        self.ws[1..].iter().zip(rest).fold(self.frame.block(a), |acc, (w, &l)| acc.intersect(&self.frame.project(a, &w.get(l))))
    }

    /// `W^{(1)}(j)_{l+a} ∩ Gr_a = W(N^{(1)}(j))_l ∩ Gr_a` for all `l` and `j ≥ 2`.
    fn induced_filtrations_agree(&self, a: i64) -> bool {
        self.ws[1..].iter().zip(&self.induced_ws).all(|(w, iw)| {
            joint_range(w, iw, a)
                .into_iter()
                .all(|h| self.frame.project(a, &w.get(h)) == self.frame.block(a).intersect(&iw.get(h - a)))
        })
    }

    /// The image condition for all `h` with `h_1 ≤ level`; the two
    /// reformulations are evaluated alongside and must give the same verdict.
    fn image_failure(&self, depth: usize, level: Option<i64>) -> Result<Option<CompatFailure<F>>> {
        let mut first = None;
        for a in self.frame.w1.jumps() {
            if level.is_some_and(|h| a > h) {
                break;
            }
            let mut direct = true;
            let mut restated = self.induced_filtrations_agree(a);
            for rest in cartesian(&self.ranges(a)) {
                let image = self.frame.project(a, &self.upstairs(a, &rest));
                let target = self.target(a, &rest);
                restated &= image == self.restated_target(a, &rest);
                if image != target {
                    direct = false;
                    if first.is_none() {
                        let mut h = vec![a];
                        h.extend(rest);
                        first = Some(CompatFailure::Image { depth, h, image, target });
                    }
                }
            }
            if direct != restated {
                return Err(Error::Internal(format!("image condition and its restatement disagree at h_1 = {a}")));
            }
        }
        Ok(first)
    }
}

fn sequential<F: Field>(
    t: &CommutingTuple<F>,
    opts: &CompatOptions,
    depth: usize,
    level: Option<i64>,
) -> Result<Option<CompatFailure<F>>> {
    if let Some(f) = cone_failure(t, opts, depth)? {
        return Ok(Some(f));
    }
    if t.len() == 1 {
        return Ok(None);
    }
    let layer = Layer::of(t);
    if let Some(f) = sequential(&layer.induced, opts, depth + 1, None)? {
        return Ok(Some(f));
    }
    layer.image_failure(depth, level)
}

/// Sequential compatibility; `None` means the tuple is compatible.
pub fn is_sequentially_compatible<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<Option<CompatFailure<F>>> {
    sequential(t, opts, 0, None)
}

/// The same with the image condition only required for `h_1 ≤ level`.
pub fn is_sequentially_compatible_at_level<F: Field>(
    t: &CommutingTuple<F>,
    level: i64,
    opts: &CompatOptions,
) -> Result<Option<CompatFailure<F>>> {
    sequential(t, opts, 0, Some(level))
}

/// Bottom-part compatibility through `W(1)_b ∩ W(j)_h = Gr_b ∩ W(N^{(1)}(j))_{h−b}`.
pub fn is_bottom_compatible<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<Option<CompatFailure<F>>> {
    if let Some(f) = cone_failure(t, opts, 0)? {
        return Ok(Some(f));
    }
    if t.len() == 1 || t.dim() == 0 {
        return Ok(None);
    }
    let layer = Layer::of(t);
    if let Some(f) = sequential(&layer.induced, opts, 1, None)? {
        return Ok(Some(f));
    }
    let b = layer.frame.w1.bottom().expect("nonzero space");
    let bottom = layer.frame.w1.get(b);
    for (j, (w, iw)) in layer.ws[1..].iter().zip(&layer.induced_ws).enumerate() {
        for h in joint_range(w, iw, b) {
            let lhs = layer.frame.project(b, &bottom.intersect(&w.get(h)));
            let rhs = layer.frame.block(b).intersect(&iw.get(h - b));
            if lhs != rhs {
                return Ok(Some(CompatFailure::Bottom { depth: 0, j: j + 2, weight: h, lhs, rhs }));
            }
        }
    }
    Ok(None)
}

/// Bottom compatibility of `(N_1^{∧m}, …, N_n^{∧m})` for `1 ≤ m ≤ max_power`
/// (`m = 0` and `m > dim` are trivially compatible).
pub fn is_universally_bottom_compatible<F: Field>(
    t: &CommutingTuple<F>,
    max_power: usize,
    opts: &CompatOptions,
) -> Result<Option<CompatFailure<F>>> {
    for m in 1..=max_power.min(t.dim()) {
        if let Some(f) = is_bottom_compatible(&t.exterior_power(m), opts)? {
            return Ok(Some(CompatFailure::Exterior { power: m, inner: Box::new(f) }));
        }
    }
    Ok(None)
}

/// Sequential compatibility plus `Im(Pπ_h) = P_{h_1}Gr_{h_1} ∩ ⋂ W^{(1)}(j)_{h_j}`,
/// where `Pπ_h` is defined on `Ker N_1^{h_1+1} ∩ W(1)_{h_1} ∩ ⋂_{j≥2} W(j)_{h_j}`.
pub fn is_strongly_sequentially_compatible<F: Field>(
    t: &CommutingTuple<F>,
    opts: &CompatOptions,
) -> Result<Option<CompatFailure<F>>> {
    if let Some(f) = sequential(t, opts, 0, None)? {
        return Ok(Some(f));
    }
    let layer = Layer::of(t);
    let n1 = &t.maps()[0];
    let lowering = layer.frame.lowering(n1);
    for a in layer.frame.w1.jumps().into_iter().filter(|&a| a >= 0) {
        let e = a as u32 + 1;
        let primitive = layer.frame.block(a).intersect(&lowering.pow(e).kernel());
        let domain = n1.pow(e).kernel().intersect(&layer.frame.w1.get(a));
        for rest in cartesian(&layer.ranges(a)) {
            let image = layer.frame.project(a, &layer.upstairs(a, &rest).intersect(&domain));
            let target = primitive.intersect(&layer.restated_target(a, &rest));
            if !target.contains(&image) {
                return Err(Error::Internal(format!("Im(Pπ_h) escapes its target at h_1 = {a}")));
            }
            if image != target {
                let mut h = vec![a];
                h.extend(rest);
                return Ok(Some(CompatFailure::Primitive { h, image, target }));
            }
        }
    }
    Ok(None)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Strong compatibility for every ordering of the maps; at most six maps.
pub fn is_hodge_type<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<Option<CompatFailure<F>>> {
    if t.len() > 6 {
        return Err(Error::Precondition(format!("Hodge-type check limited to 6 maps, got {}", t.len())));
    }
    for sigma in permutations(t.len()) {
        let p = t.permuted(&sigma)?;
        if let Some(f) = is_strongly_sequentially_compatible(&p, opts)? {
            return Ok(Some(CompatFailure::Permuted { permutation: sigma, inner: Box::new(f) }));
        }
    }
    Ok(None)
}

/// Components of `⋂_j W(j)_{h_j}` for `h_1 ≤ level`, keyed by increments
/// `k` with `ρ_j(k) = k_1 + … + k_j`: the compatible splitting of the
/// sequence `W(1)_level ∩ W(j)`, reindexed through `μ`.
pub fn level_splitting<F: Field>(t: &CommutingTuple<F>, level: i64, opts: &CompatOptions) -> Result<Splitting<F>> {
    if let Some(f) = is_sequentially_compatible_at_level(t, level, opts)? {
        return Err(Error::Precondition(format!("not compatible at level {level}: {}", f.describe())));
    }
    let ws = t.filtrations();
    let top = ws[0].get(level);
    let r = top.dim();
    let restricted: Vec<Filtration<F>> = ws
        .iter()
        .map(|w| {
            let steps =
                w.steps().iter().map(|(&l, s)| (l, Subspace::span(&top.coordinates_of(s.intersect(&top).basis())))).collect();
            Filtration::from_steps(r, steps)
        })
        .collect::<Result<_>>()?;
    let mut components = BTreeMap::new();
    if r > 0 {
        for (g, u) in compatible_splitting(&restricted)?.components {
            let k: Vec<i64> = (0..g.len()).map(|j| g[j] - if j == 0 { 0 } else { g[j - 1] }).collect();
            components.insert(k, Subspace::span(&top.basis().mul(u.basis())));
        }
    }
    let split = Splitting { ambient: t.dim(), components };
    let rho = |k: &[i64], j: usize| k[..=j].iter().sum::<i64>();
    let ranges: Vec<Vec<i64>> = ws.iter().map(Filtration::grid).collect();
    for h in cartesian(&ranges).into_iter().filter(|h| h[0] <= level) {
        let lhs = ws.iter().zip(&h).fold(Subspace::full(t.dim()), |acc, (w, &l)| acc.intersect(&w.get(l)));
        let parts: Vec<&Subspace<F>> =
            split.components.iter().filter(|(k, _)| (0..h.len()).all(|j| rho(k, j) <= h[j])).map(|(_, u)| u).collect();
        let sum = parts.iter().fold(Subspace::zero(t.dim()), |acc, u| acc.sum(u));
        if sum != lhs || sum.dim() != parts.iter().map(|u| u.dim()).sum::<usize>() {
            return Err(Error::Internal(format!("level splitting fails its identity at h = {h:?}")));
        }
    }
    Ok(split)
}

/// For `R = dim W(1)_h` and `b = Σ_{a≤h} a·dim Gr_a`: the bottom number of
/// `W(N_1^{∧R})` is `b`, its bottom step is a line, and a generator of
/// that line has degree `b` for every `W(N(m)^{∧R})`.
pub fn exterior_bottom_line<F: Field>(t: &CommutingTuple<F>, h: i64) -> bool {
    let w1 = weight_filtration_of(t, 1);
    let r = w1.get(h).dim();
    let b: i64 = w1.graded_dims().range(..=h).map(|(&a, &d)| a * d as i64).sum();
    let big = t.exterior_power(r);
    let ws = big.filtrations();
    if ws[0].bottom() != Some(b) || ws[0].get(b).dim() != 1 {
        return false;
    }
    let e = ws[0].get(b).basis().col(0);
    ws.iter().all(|w| w.degree(&e).ok() == Some(b))
}

fn weight_filtration_of<F: Field>(t: &CommutingTuple<F>, j: usize) -> Filtration<F> {
    super::weight_filtration(&t.partial_sum(j)).expect("sums of commuting nilpotent maps are nilpotent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn j(n: usize) -> Matrix<Rational> {
        Matrix::from_fn(n, n, |r, c| Rational::int((c == r + 1) as i64))
    }

    fn tensor_pair() -> CommutingTuple<Rational> {
        let i = Matrix::identity(2);
        CommutingTuple::new(vec![j(2).kron(&i), i.kron(&j(2))]).unwrap()
    }

    #[test]
    fn single_map_is_compatible_in_every_sense() {
        let t = CommutingTuple::new(vec![j(3)]).unwrap();
        let o = CompatOptions::default();
        assert!(is_sequentially_compatible(&t, &o).unwrap().is_none());
        assert!(is_strongly_sequentially_compatible(&t, &o).unwrap().is_none());
        assert!(is_hodge_type(&t, &o).unwrap().is_none());
        assert!(is_bottom_compatible(&t, &o).unwrap().is_none());
    }

    #[test]
    fn tensor_pair_is_hodge() {
        let t = tensor_pair();
        let o = CompatOptions::default();
        assert!(is_sequentially_compatible(&t, &o).unwrap().is_none());
        assert!(is_hodge_type(&t, &o).unwrap().is_none());
        assert!(is_universally_bottom_compatible(&t, 4, &o).unwrap().is_none());
        for h in -3..=3 {
            assert!(is_sequentially_compatible_at_level(&t, h, &o).unwrap().is_none());
            assert!(exterior_bottom_line(&t, h));
        }
    }

    #[test]
    fn frame_projection_and_lowering() {
        let f = GrFrame::new(crate::nilpotent::weight_filtration(&j(3)).unwrap());
        assert_eq!(f.blocks.len(), 3);
        let low = f.lowering(&j(3));
        assert_eq!(low.rank(), 2);
        assert!(f.induced(&j(3)).is_zero());
        assert_eq!(f.project(0, &Subspace::full(3)), f.block(0));
    }

    #[test]
    fn level_splitting_of_tensor_pair() {
        let t = tensor_pair();
        let s = level_splitting(&t, 1, &CompatOptions::without_cone()).unwrap();
        assert_eq!(s.dims().values().sum::<usize>(), 4);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
    }
}
