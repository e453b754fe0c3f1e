use std::collections::BTreeMap;

use super::Filtration;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};

/// `Gr_a = W_a / W_{a−1}` presented by a transversal `T` of `W_{a−1}` in `W_a`.
///
/// `proj` is a `d × n` matrix with `proj·W_{a−1} = 0` and `proj·T = I`, so it
/// computes coordinates in `Gr_a` of any vector of `W_a`.
#[derive(Clone, Debug)]
pub struct GrPiece<F: Field> {
    pub weight: i64,
    pub lower: Subspace<F>,
    pub upper: Subspace<F>,
    pub transversal: Matrix<F>,
    pub proj: Matrix<F>,
}

impl<F: Field> GrPiece<F> {
    pub fn new(weight: i64, lower: Subspace<F>, upper: Subspace<F>) -> Result<Self> {
        let transversal = upper.quotient_basis(&lower)?;
        let d = transversal.cols();
        let m = lower.basis().hstack(&transversal);
        let inv = m.left_inverse().ok_or_else(|| Error::Internal("adapted basis is not independent".into()))?;
        let proj = inv.submatrix(lower.dim()..lower.dim() + d, 0..m.rows());
        Ok(GrPiece { weight, lower, upper, transversal, proj })
    }

    pub fn dim(&self) -> usize {
        self.transversal.cols()
    }

    /// Class of `v ∈ W_a` in `Gr_a`.
    pub fn project_vector(&self, v: &[F]) -> Vec<F> {
        self.proj.mul_vec(v)
    }

    /// Image in `Gr_a` of `s ∩ W_a`.
    pub fn project(&self, s: &Subspace<F>) -> Subspace<F> {
        let t = s.intersect(&self.upper);
        if t.is_zero() {
            return Subspace::zero(self.dim());
        }
        Subspace::span(&self.proj.mul(t.basis()))
    }

    /// Matrix on `Gr_a` induced by an endomorphism preserving `W_{a−1} ⊆ W_a`.
    pub fn induced_map(&self, m: &Matrix<F>) -> Matrix<F> {
        self.proj.mul(&m.mul(&self.transversal))
    }

    /// Preimage in `F^n` of a subspace of `Gr_a`: `W_{a−1} + T·s`.
    pub fn lift(&self, s: &Subspace<F>) -> Subspace<F> {
        self.lower.sum(&Subspace::span(&self.transversal.mul(s.basis())))
    }
}

/// `Gr^W = ⊕_a Gr_a`, one piece per jump of `W`.
#[derive(Clone, Debug)]
pub struct GradedSpace<F: Field> {
    pub pieces: BTreeMap<i64, GrPiece<F>>,
}

impl<F: Field> GradedSpace<F> {
    pub fn of(w: &Filtration<F>) -> Self {
        let mut lower = Subspace::zero(w.ambient_dim());
        let mut pieces = BTreeMap::new();
        for (&a, upper) in w.steps() {
            let piece = GrPiece::new(a, lower.clone(), upper.clone()).expect("steps of a filtration are nested");
            pieces.insert(a, piece);
            lower = upper.clone();
        }
        GradedSpace { pieces }
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(&a, p)| (a, p.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(GrPiece::dim).sum()
    }

    /// Basis of `F^n` adapted to `W`: the transversals in increasing weight.
    pub fn adapted_basis(&self, ambient: usize) -> Matrix<F> {
        self.pieces.values().fold(Matrix::zeros(ambient, 0), |acc, p| acc.hstack(&p.transversal))
    }
}

/// Induced filtrations keyed by the weight of the graded piece.
pub type InducedFiltrations<F> = BTreeMap<i64, Filtration<F>>;

/// The filtration induced by `other` on each `Gr_a` of `base`, shifted so
/// that step `l` of piece `a` is the image of `other_{l+a} ∩ base_a`.
pub fn induced_on_gr<F: Field>(base: &Filtration<F>, other: &Filtration<F>) -> Result<(GradedSpace<F>, InducedFiltrations<F>)> {
    if base.ambient_dim() != other.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: base.ambient_dim(), found: other.ambient_dim() });
    }
    let gr = GradedSpace::of(base);
    let mut induced = BTreeMap::new();
    for (&a, piece) in &gr.pieces {
        induced.insert(a, induced_on_piece(piece, other)?);
    }
    Ok((gr, induced))
}

pub(crate) fn induced_on_piece<F: Field>(piece: &GrPiece<F>, other: &Filtration<F>) -> Result<Filtration<F>> {
    let a = piece.weight;
    let (Some(lo), Some(hi)) = (other.bottom(), other.top()) else {
        return Ok(Filtration::trivial(piece.dim(), 0));
    };
    Filtration::from_fn(piece.dim(), lo - a, hi - a, |l| piece.project(&other.get(l + a)))
}
