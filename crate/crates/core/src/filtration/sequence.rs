use std::collections::BTreeMap;

use super::graded::{induced_on_piece, GrPiece, GradedSpace};
use super::Filtration;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Rational, Subspace};

/// A failure of the image condition: at graded depth `path`, for the tuple
/// `h`, the image of `π_h` differs from the intersection of induced steps.
#[derive(Clone, Debug)]
pub struct CompatWitness<F: Field> {
    pub path: Vec<i64>,
    pub h: Vec<i64>,
    pub image: Subspace<F>,
    pub target: Subspace<F>,
}

/// All tuples of the cartesian product of `ranges`.
pub(crate) fn cartesian(ranges: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out.into_iter().flat_map(|p| r.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

pub(crate) fn check_ambient<F: Field>(seq: &[Filtration<F>]) -> Result<usize> {
    let Some(first) = seq.first() else {
        return Err(Error::Precondition("empty filtration sequence".into()));
    };
    let n = first.ambient_dim();
    match seq.iter().find(|w| w.ambient_dim() != n) {
        Some(w) => Err(Error::DimensionMismatch { expected: n, found: w.ambient_dim() }),
        None => Ok(n),
    }
}

fn intersection<F: Field>(ambient: usize, seq: &[Filtration<F>], h: &[i64]) -> Subspace<F> {
    seq.iter().zip(h).fold(Subspace::full(ambient), |acc, (w, &l)| acc.intersect(&w.get(l)))
}

/// Checks compatibility of `(W(1), …, W(n))`; `None` means compatible.
pub fn is_compatible_sequence<F: Field>(seq: &[Filtration<F>]) -> Result<Option<CompatWitness<F>>> {
    check_ambient(seq)?;
    Ok(find_violation(seq, &mut Vec::new()))
}

fn find_violation<F: Field>(seq: &[Filtration<F>], path: &mut Vec<i64>) -> Option<CompatWitness<F>> {
    if seq.len() <= 1 {
        return None;
    }
    let n = seq[0].ambient_dim();
    let gr = GradedSpace::of(&seq[0]);
    let grids: Vec<Vec<i64>> = seq[1..].iter().map(Filtration::grid).collect();
    for (&a, piece) in &gr.pieces {
        let induced: Vec<Filtration<F>> = seq[1..].iter().map(|w| induced_on_piece(piece, w).expect("nested")).collect();
        for rest in cartesian(&grids) {
            let s = intersection(n, &seq[1..], &rest).intersect(&piece.upper);
            let image = piece.project(&s);
            let target = induced.iter().zip(&rest).fold(Subspace::full(piece.dim()), |acc, (w, &l)| acc.intersect(&w.get(l - a)));
            if image != target {
                let mut h = vec![a];
                h.extend(rest);
                return Some(CompatWitness { path: path.clone(), h, image, target });
            }
        }
        path.push(a);
        let inner = find_violation(&induced, path);
        path.pop();
        if inner.is_some() {
            return inner;
        }
    }
    None
}

/// Decomposition `V = ⊕_h U_h` indexed by `h ∈ ℤⁿ`; only nonzero parts are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting<F: Field> {
    pub ambient: usize,
    pub components: BTreeMap<Vec<i64>, Subspace<F>>,
}

impl<F: Field> Splitting<F> {
    pub fn dims(&self) -> BTreeMap<Vec<i64>, usize> {
        self.components.iter().map(|(h, u)| (h.clone(), u.dim())).collect()
    }

    /// `⊕_{k ≤ h} U_k` (componentwise order) and whether that sum is direct.
    pub fn lower_sum(&self, h: &[i64]) -> (Subspace<F>, bool) {
        let mut acc = Subspace::zero(self.ambient);
        let mut total = 0;
        for (k, u) in &self.components {
            if k.iter().zip(h).all(|(a, b)| a <= b) {
                acc = acc.sum(u);
                total += u.dim();
            }
        }
        let direct = acc.dim() == total;
        (acc, direct)
    }

    /// `Σ_{k : k_j ≤ m} U_k`, which reproduces `W(j)_m` for a compatible splitting.
    pub fn reconstruct(&self, j: usize, m: i64) -> Subspace<F> {
        self.components.iter().filter(|(k, _)| k[j] <= m).fold(Subspace::zero(self.ambient), |acc, (_, u)| acc.sum(u))
    }

    /// The defining identity `⋂_j W(j)_{h_j} = ⊕_{k ≤ h} U_k` on the whole
    /// support grid, plus `V = ⊕ U_h`.
    pub fn verify(&self, seq: &[Filtration<F>]) -> bool {
        let (all, direct) = self.lower_sum(&vec![i64::MAX; seq.len()]);
        if !direct || !all.is_full() {
            return false;
        }
        let grids: Vec<Vec<i64>> = seq.iter().map(Filtration::grid).collect();
        cartesian(&grids).iter().all(|h| {
            let (s, direct) = self.lower_sum(h);
            direct && s == intersection(self.ambient, seq, h)
        })
    }
}

/// A splitting compatible with the sequence: `U_h` is the first-pivot greedy
/// complement of `Σ_i F(h − δ_i)` in `F(h) = ⋂_j W(j)_{h_j}`.
pub fn compatible_splitting<F: Field>(seq: &[Filtration<F>]) -> Result<Splitting<F>> {
    let n = check_ambient(seq)?;
    if let Some(w) = find_violation(seq, &mut Vec::new()) {
        return Err(Error::Precondition(format!("sequence is not compatible (witness h = {:?})", w.h)));
    }
    let ranges: Vec<Vec<i64>> = seq
        .iter()
        .map(|w| match (w.bottom(), w.top()) {
            (Some(b), Some(t)) => (b..=t).collect(),
            _ => Vec::new(),
        })
        .collect();
    let mut components = BTreeMap::new();
    for h in cartesian(&ranges) {
        let f = intersection(n, seq, &h);
        if f.is_zero() {
            continue;
        }
        let lower = (0..h.len()).fold(Subspace::zero(n), |acc, i| {
            let mut g = h.clone();
            g[i] -= 1;
            acc.sum(&intersection(n, seq, &g))
        });
        if f.dim() > lower.dim() {
            components.insert(h, Subspace::span(&f.quotient_basis(&lower)?));
        }
    }
    let split = Splitting { ambient: n, components };
    if !split.verify(seq) {
        return Err(Error::Internal("constructed splitting does not reproduce the filtrations".into()));
    }
    Ok(split)
}

/// A basis compatible with the sequence, each vector labelled by its multi-degree.
pub fn compatible_basis<F: Field>(seq: &[Filtration<F>]) -> Result<Vec<(Vec<i64>, Vec<F>)>> {
    let split = compatible_splitting(seq)?;
    Ok(split.components.iter().flat_map(|(h, u)| u.basis_vectors().into_iter().map(move |v| (h.clone(), v))).collect())
}

fn piece_at<F: Field>(w: &Filtration<F>, a: i64) -> GrPiece<F> {
    GrPiece::new(a, w.get(a - 1), w.get(a)).expect("steps of a filtration are nested")
}

fn element_ok<F: Field>(v: &[F], seq: &[Filtration<F>]) -> bool {
    if seq.len() <= 1 {
        return true;
    }
    let a = seq[0].degree(v).expect("nonzero vector");
    let piece = piece_at(&seq[0], a);
    let v1 = piece.project_vector(v);
    let induced: Vec<Filtration<F>> = seq[1..].iter().map(|w| induced_on_piece(&piece, w).expect("nested")).collect();
    let degrees_match =
        seq[1..].iter().zip(&induced).all(|(w, iw)| w.degree(v).expect("nonzero") - a == iw.degree(&v1).expect("nonzero class"));
    degrees_match && element_ok(&v1, &induced)
}

/// Whether a nonzero vector is compatible with the sequence: at every level of
/// the recursion its degree equals the (shifted) degree of its class.
pub fn is_compatible_element<F: Field>(v: &[F], seq: &[Filtration<F>]) -> Result<bool> {
    let n = check_ambient(seq)?;
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    if v.iter().all(F::is_zero) {
        return Err(Error::Precondition("zero vector".into()));
    }
    Ok(element_ok(v, seq))
}

fn basis_ok<F: Field>(vs: &[Vec<F>], seq: &[Filtration<F>]) -> bool {
    let Some(w1) = seq.first() else {
        return true;
    };
    if !vs.iter().all(|v| element_ok(v, seq)) {
        return false;
    }
    let degs: Vec<i64> = vs.iter().map(|v| w1.degree(v).expect("nonzero")).collect();
    for l in w1.grid() {
        if degs.iter().filter(|&&d| d <= l).count() != w1.get(l).dim() {
            return false;
        }
    }
    if seq.len() == 1 {
        return true;
    }
    for a in w1.jumps() {
        let piece = piece_at(w1, a);
        let induced: Vec<Filtration<F>> = seq[1..].iter().map(|w| induced_on_piece(&piece, w).expect("nested")).collect();
        let classes: Vec<Vec<F>> = vs.iter().zip(&degs).filter(|(_, &d)| d == a).map(|(v, _)| piece.project_vector(v)).collect();
        if !basis_ok(&classes, &induced) {
            return false;
        }
    }
    true
}

/// Whether the columns of `basis` form a basis compatible with the sequence.
pub fn is_compatible_basis<F: Field>(basis: &Matrix<F>, seq: &[Filtration<F>]) -> Result<bool> {
    let n = check_ambient(seq)?;
    if basis.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.rows() });
    }
    if basis.cols() != n || basis.rank() != n {
        return Ok(false);
    }
    Ok(basis_ok(&basis.columns(), seq))
}

fn degrees<F: Field>(v: &[F], seq: &[Filtration<F>]) -> Result<Vec<i64>> {
    if !is_compatible_element(v, seq)? {
        return Err(Error::Precondition("vector is not compatible with the sequence".into()));
    }
    seq.iter().map(|w| w.degree(v)).collect()
}

/// `k_1 = deg_1(v)/2`, `k_j = (deg_j(v) − deg_{j−1}(v))/2`.
pub fn norm_exponents<F: Field>(v: &[F], seq: &[Filtration<F>]) -> Result<Vec<Rational>> {
    let d = degrees(v, seq)?;
    Ok((0..d.len()).map(|j| Rational::half(d[j] - if j == 0 { 0 } else { d[j - 1] })).collect())
}

/// `(h_1, h_2 − h_1, …, h_n − h_{n−1})` with `h_j = deg_j(v)`.
pub fn flat_section_exponents<F: Field>(v: &[F], seq: &[Filtration<F>]) -> Result<Vec<i64>> {
    let d = degrees(v, seq)?;
    Ok((0..d.len()).map(|j| d[j] - if j == 0 { 0 } else { d[j - 1] }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::int(x)).collect()
    }

    fn weighted(weights: &[i64]) -> Filtration<Rational> {
        Filtration::from_weighted_basis(&Matrix::identity(weights.len()), weights).unwrap()
    }

    #[test]
    fn coinciding_filtrations_are_compatible() {
        let w = weighted(&[-1, 0, 1]);
        assert!(is_compatible_sequence(&[w.clone(), w.clone(), w]).unwrap().is_none());
    }

    #[test]
    fn standard_flag_basis() {
        let w = weighted(&[0, 1, 2]);
        assert!(is_compatible_basis(&Matrix::identity(3), std::slice::from_ref(&w)).unwrap());
        let b = compatible_basis(&[w]).unwrap();
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn splitting_of_coordinate_filtrations() {
        let w1 = weighted(&[0, 0, 1, 1]);
        let w2 = weighted(&[0, 1, 0, 1]);
        let s = compatible_splitting(&[w1.clone(), w2.clone()]).unwrap();
        assert_eq!(s.components.len(), 4);
        assert!(s.components.values().all(|u| u.dim() == 1));
        for m in -1..=1 {
            assert_eq!(s.reconstruct(0, m), w1.get(m));
            assert_eq!(s.reconstruct(1, m), w2.get(m));
        }
    }

    #[test]
    fn norm_exponent_arithmetic() {
        let w = weighted(&[2, -1]);
        let u = weighted(&[2, 1]);
        assert_eq!(norm_exponents(&q(&[1, 0]), &[w.clone(), u.clone()]).unwrap(), vec![Rational::int(1), Rational::int(0)]);
        assert_eq!(norm_exponents(&q(&[0, 1]), &[w.clone(), u.clone()]).unwrap(), vec![Rational::new(-1, 2), Rational::int(1)]);
        assert_eq!(flat_section_exponents(&q(&[0, 1]), &[w, u]).unwrap(), vec![-1, 2]);
    }

    #[test]
    fn three_lines_in_a_plane_are_not_compatible() {
        // three distinct lines: no common adapted basis
        let lines = [q(&[1, 0]), q(&[0, 1]), q(&[1, 1])];
        let seq: Vec<Filtration<Rational>> = lines
            .iter()
            .map(|v| {
                Filtration::from_steps(
                    2,
                    BTreeMap::from([(0, Subspace::span_vectors(2, std::slice::from_ref(v))), (1, Subspace::full(2))]),
                )
                .unwrap()
            })
            .collect();
        let w = is_compatible_sequence(&seq).unwrap().expect("not compatible");
        assert_ne!(w.image, w.target);
        assert!(compatible_splitting(&seq).is_err());
    }
}
