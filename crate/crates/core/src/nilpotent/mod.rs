//! Weight filtrations of nilpotent maps and commuting tuples.

mod compat;
mod product;
mod strong;
mod tuple;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};
use crate::filtration::{Filtration, GradedSpace};

pub use compat::{
    exterior_bottom_line, is_bottom_compatible, is_hodge_type, is_sequentially_compatible, is_sequentially_compatible_at_level,
    is_strongly_sequentially_compatible, is_universally_bottom_compatible, level_splitting, CompatFailure, CompatOptions,
    GrFrame,
};
pub use product::{induced_derivation, induced_group, product_endo, product_indices, product_weight_filtration, ProductKind};
pub use strong::{
    check_reduction_hypotheses, hodge_bigrading, strong_basis, strong_splitting, verify_strong_basis, HodgeBigrading,
    ReductionReport, StrongBasisVector, StrongSplitting,
};
pub use tuple::CommutingTuple;

/// A square nilpotent matrix together with its nilpotency index.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentEndo<F> {
    matrix: Matrix<F>,
    nil_index: usize,
}

impl<F: Field> NilpotentEndo<F> {
    pub fn new(matrix: Matrix<F>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let nil_index = matrix
            .nilpotency_index()
            .ok_or_else(|| Error::NotNilpotent(format!("{}×{} matrix has a nonzero eigenvalue", matrix.rows(), matrix.rows())))?;
        Ok(NilpotentEndo { matrix, nil_index })
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Smallest `k` with `Nᵏ = 0`.
    pub fn nil_index(&self) -> usize {
        self.nil_index
    }

    pub fn weight_filtration(&self) -> Filtration<F> {
        weight_of_nilpotent(&self.matrix, self.nil_index)
    }
}

/// `W(N)` from `W_l = Σ_{j ≥ max(0,−l)} Nʲ·Ker(N^{l+2j+1})`, with both
/// defining properties re-checked before returning.
pub fn weight_filtration<F: Field>(n: &Matrix<F>) -> Result<Filtration<F>> {
    let endo = NilpotentEndo::new(n.clone())?;
    let w = endo.weight_filtration();
    if !satisfies_weight_axioms(n, &w) {
        return Err(Error::Internal("weight filtration fails its defining properties".into()));
    }
    Ok(w)
}

fn weight_of_nilpotent<F: Field>(n: &Matrix<F>, k: usize) -> Filtration<F> {
    let dim = n.rows();
    if k <= 1 {
        return Filtration::trivial(dim, 0);
    }
    let mut powers = vec![Matrix::identity(dim)];
    for i in 1..k {
        powers.push(powers[i - 1].mul(n));
    }
    let kernels: Vec<Subspace<F>> = powers.iter().map(Matrix::kernel).collect();
    let ker = |e: i64| if e >= k as i64 { Subspace::full(dim) } else { kernels[e.max(0) as usize].clone() };
    let top = k as i64 - 1;
    Filtration::from_fn(dim, -top - 1, top, |l| {
        let mut gens = Matrix::zeros(dim, 0);
        for j in (-l).max(0)..k as i64 {
            let e = l + 2 * j + 1;
            if e <= 0 {
                continue;
            }
            let kb = ker(e);
            if !kb.is_zero() {
                gens = gens.hstack(&powers[j as usize].mul(kb.basis()));
            }
        }
        Subspace::span(&gens)
    })
    .expect("kernel filtration is nested and exhaustive")
}

/// `N·W_l ⊆ W_{l−2}` for all `l`, and `Nᵏ: Gr_k → Gr_{−k}` an isomorphism
/// for all `k ≥ 1`, both decided by rank.
pub fn satisfies_weight_axioms<F: Field>(n: &Matrix<F>, w: &Filtration<F>) -> bool {
    if !w.is_valid() || n.rows() != w.ambient_dim() || !w.maps_into(n, w, -2) {
        return false;
    }
    let gr = w.graded_dims();
    let dim_gr = |l: i64| gr.get(&l).copied().unwrap_or(0);
    let top = w.top().unwrap_or(0).max(0);
    let mut p = n.clone();
    for k in 1..=top {
        let below = w.get(-k - 1);
        let image = w.get(k).image_under(&p).sum(&below);
        let rank = image.dim() - below.dim();
        if rank != dim_gr(k) || rank != dim_gr(-k) {
            return false;
        }
        p = p.mul(n);
    }
    (w.bottom().unwrap_or(0)..0).all(|l| dim_gr(l) == dim_gr(-l))
}

/// Jordan block sizes in decreasing order.
pub fn jordan_type<F: Field>(n: &Matrix<F>) -> Result<Vec<usize>> {
    let endo = NilpotentEndo::new(n.clone())?;
    let mut ranks = vec![n.rows()];
    let mut p = Matrix::identity(n.rows());
    for _ in 0..endo.nil_index() {
        p = p.mul(n);
        ranks.push(p.rank());
    }
    let at_least = |i: usize| ranks[i - 1] - ranks[i];
    let mut sizes = Vec::new();
    for size in (1..=endo.nil_index()).rev() {
        let exactly = at_least(size) - if size < endo.nil_index() { at_least(size + 1) } else { 0 };
        sizes.extend(std::iter::repeat_n(size, exactly));
    }
    Ok(sizes)
}

/// An `sl₂`-triple shadow: the semisimple `h` with `[h, N] = −2N` and its
/// integer eigenspaces, read off a Jordan chain basis.
#[derive(Clone, Debug)]
pub struct Sl2Data<F: Field> {
    pub h: Matrix<F>,
    pub eigenspaces: BTreeMap<i64, Subspace<F>>,
    /// Jordan chain basis `v, Nv, …, N^{k−1}v`, chains concatenated.
    pub basis: Matrix<F>,
    /// Eigenvalue of each basis column.
    pub weights: Vec<i64>,
    /// `(first column, length)` of each chain.
    pub chains: Vec<(usize, usize)>,
}

impl<F: Field> Sl2Data<F> {
    /// `W_l = ⊕_{α ≤ l} V_α`.
    pub fn filtration(&self) -> Filtration<F> {
        Filtration::from_weighted_basis(&self.basis, &self.weights).expect("chain basis is a basis")
    }
}

pub fn sl2_splitting<F: Field>(n: &Matrix<F>) -> Result<Sl2Data<F>> {
    let endo = NilpotentEndo::new(n.clone())?;
    let dim = n.rows();
    let k = endo.nil_index();
    let mut powers = vec![Matrix::identity(dim)];
    for i in 1..=k + 1 {
        powers.push(powers[i - 1].mul(n));
    }
    let kernels: Vec<Subspace<F>> = powers.iter().map(Matrix::kernel).collect();
    let mut cols: Vec<Vec<F>> = Vec::new();
    let mut weights = Vec::new();
    let mut chains = Vec::new();
    for size in (1..=k).rev() {
        let lower = kernels[size - 1].sum(&kernels[size + 1].image_under(n));
        let heads = kernels[size].quotient_basis(&lower)?;
        for head in heads.columns() {
            chains.push((cols.len(), size));
            let mut v = head;
            for step in 0..size {
                weights.push(size as i64 - 1 - 2 * step as i64);
                let next = n.mul_vec(&v);
                cols.push(v);
                v = next;
            }
        }
    }
    let basis = Matrix::from_columns(dim, &cols);
    let inv = basis.inverse().ok_or_else(|| Error::Internal("Jordan chains are not a basis".into()))?;
    let diag = Matrix::diagonal(&weights.iter().map(|&w| F::from_int(w)).collect::<Vec<_>>());
    let h = basis.mul(&diag).mul(&inv);
    if h.commutator(n) != n.scale(&F::from_int(-2)) {
        return Err(Error::Internal("[h, N] ≠ −2N for the chain basis".into()));
    }
    let mut eigenspaces = BTreeMap::new();
    for &w in &weights {
        eigenspaces.entry(w).or_insert_with(|| {
            let idx: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == w).collect();
            Subspace::span(&basis.select_cols(&idx))
        });
    }
    let data = Sl2Data { h, eigenspaces, basis, weights, chains };
    if data.filtration() != endo.weight_filtration() {
        return Err(Error::Internal("eigenvalue filtration differs from the kernel construction".into()));
    }
    Ok(data)
}

/// `P_l Gr_a = Im(N^m: P_l Gr_l → Gr_a)` with `a = l − 2m`, in the
/// coordinates of each graded piece.
#[derive(Clone, Debug)]
pub struct PrimitiveDecomposition<F: Field> {
    pub weight: Filtration<F>,
    pub graded: GradedSpace<F>,
    /// Keyed by `(l, a)`.
    pub parts: BTreeMap<(i64, i64), Subspace<F>>,
}

impl<F: Field> PrimitiveDecomposition<F> {
    pub fn primitive_dims(&self) -> BTreeMap<i64, usize> {
        self.parts.iter().filter(|((l, a), _)| l == a).map(|(&(l, _), s)| (l, s.dim())).collect()
    }

    /// `Gr_a = ⊕_{h ≥ 0} P_{a+2h} Gr_a`, checked as a direct sum.
    pub fn is_direct(&self) -> bool {
        self.graded.pieces.iter().all(|(&a, piece)| {
            let parts: Vec<&Subspace<F>> = self.parts.iter().filter(|((_, b), _)| *b == a).map(|(_, s)| s).collect();
            let total: usize = parts.iter().map(|s| s.dim()).sum();
            let span = parts.iter().fold(Subspace::zero(piece.dim()), |acc, s| acc.sum(s));
            total == piece.dim() && span.is_full()
        })
    }
}

/// The map `Gr_a → Gr_{a−2}` induced by `n`, as a matrix in piece coordinates.
pub(crate) fn gr_lowering<F: Field>(gr: &GradedSpace<F>, n: &Matrix<F>, a: i64) -> Matrix<F> {
    let Some(src) = gr.pieces.get(&a) else {
        let rows = gr.pieces.get(&(a - 2)).map_or(0, |p| p.dim());
        return Matrix::zeros(rows, 0);
    };
    match gr.pieces.get(&(a - 2)) {
        Some(dst) => dst.proj.mul(&n.mul(&src.transversal)),
        None => Matrix::zeros(0, src.dim()),
    }
}

pub fn primitive_decomposition<F: Field>(n: &Matrix<F>) -> Result<PrimitiveDecomposition<F>> {
    let weight = weight_filtration(n)?;
    let graded = GradedSpace::of(&weight);
    let mut parts = BTreeMap::new();
    for (&l, piece) in graded.pieces.range(0..) {
        let mut p = Matrix::identity(piece.dim());
        for step in 0..=l {
            p = gr_lowering(&graded, n, l - 2 * step).mul(&p);
        }
        let primitive = p.kernel();
        let mut image = primitive.clone();
        let mut a = l;
        while a >= -l {
            parts.insert((l, a), image.clone());
            image = image.image_under(&gr_lowering(&graded, n, a));
            a -= 2;
        }
    }
    let out = PrimitiveDecomposition { weight, graded, parts };
    if !out.is_direct() {
        return Err(Error::Internal("primitive parts do not decompose the graded pieces".into()));
    }
    Ok(out)
}
