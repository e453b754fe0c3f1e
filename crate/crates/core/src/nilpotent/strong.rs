use std::collections::BTreeMap;

use super::compat::{
    is_sequentially_compatible, is_strongly_sequentially_compatible, is_universally_bottom_compatible, CompatOptions, GrFrame,
};
use super::tuple::CommutingTuple;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Subspace};
use crate::filtration::{compatible_splitting, is_compatible_basis, Filtration};

fn rho(k: &[i64], j: usize) -> i64 {
    k[..=j].iter().sum()
}

fn cartesian(ranges: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out.into_iter().flat_map(|p| r.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// `V = ⊕_{k ≥ 0} ⊕_{h ∈ ℤⁿ} P_k U_h` for a strongly compatible tuple. The
/// multi-index `h` is in increments: a vector of `P_k U_h` has degree
/// `ρ_j(h) = h_1 + … + h_j` for `W(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongSplitting<F: Field> {
    pub ambient: usize,
    pub parts: BTreeMap<(usize, Vec<i64>), Subspace<F>>,
}

impl<F: Field> StrongSplitting<F> {
    /// `d(k, h) = dim P_k U_h` for the nonzero parts.
    pub fn dims(&self) -> BTreeMap<(usize, Vec<i64>), usize> {
        self.parts.iter().filter(|(_, s)| !s.is_zero()).map(|(key, s)| (key.clone(), s.dim())).collect()
    }

    fn part(&self, k: usize, h: &[i64]) -> Subspace<F> {
        self.parts.get(&(k, h.to_vec())).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// Direct sum, the splitting identity for every `W(j)` step, the support
    /// condition and the action of `N_1`.
    pub fn verify(&self, t: &CommutingTuple<F>) -> bool {
        let total: usize = self.parts.values().map(Subspace::dim).sum();
        let span = self.parts.values().fold(Subspace::zero(self.ambient), |acc, s| acc.sum(s));
        if total != self.ambient || !span.is_full() {
            return false;
        }
        let ws = t.filtrations();
        let grids: Vec<Vec<i64>> = ws.iter().map(Filtration::grid).collect();
        for h in cartesian(&grids) {
            let lhs = ws.iter().zip(&h).fold(Subspace::full(self.ambient), |acc, (w, &l)| acc.intersect(&w.get(l)));
            let rhs = self
                .parts
                .iter()
                .filter(|((_, kk), _)| (0..h.len()).all(|j| rho(kk, j) <= h[j]))
                .fold(Subspace::zero(self.ambient), |acc, (_, s)| acc.sum(s));
            if lhs != rhs {
                return false;
            }
        }
        let n1 = &t.maps()[0];
        self.parts.iter().filter(|(_, s)| !s.is_zero()).all(|((k, kk), s)| {
            let k = *k as i64;
            if kk[0].abs() > k || (k - kk[0]) % 2 != 0 {
                return false;
            }
            let image = s.image_under(n1);
            if kk[0] == -k {
                image.is_zero()
            } else {
                let mut lower = kk.clone();
                lower[0] -= 2;
                image == self.part(k as usize, &lower)
            }
        })
    }
}

/// Lifts a splitting of each primitive part `P_a Gr_a` through `Pπ_h` and
/// spreads it along `N_1`.
pub fn strong_splitting<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<StrongSplitting<F>> {
    if let Some(f) = is_strongly_sequentially_compatible(t, opts)? {
        return Err(Error::Precondition(format!("tuple is not strongly sequentially compatible: {}", f.describe())));
    }
    let dim = t.dim();
    let ws = t.filtrations();
    let frame = GrFrame::new(ws[0].clone());
    let induced = CommutingTuple::from_trusted(dim, t.maps()[1..].iter().map(|m| frame.induced(m)).collect());
    let induced_ws = if induced.is_empty() { Vec::new() } else { induced.filtrations() };
    let n1 = &t.maps()[0];
    let lowering = frame.lowering(n1);
    let mut parts = BTreeMap::new();
    for a in frame.w1.jumps().into_iter().filter(|&a| a >= 0) {
        let e = a as u32 + 1;
        let primitive = frame.block(a).intersect(&lowering.pow(e).kernel());
        if primitive.is_zero() {
            continue;
        }
        let r = primitive.dim();
        let restricted: Vec<Filtration<F>> = induced_ws
            .iter()
            .map(|w| {
                let steps = w
                    .steps()
                    .iter()
                    .map(|(&l, s)| (l, Subspace::span(&primitive.coordinates_of(s.intersect(&primitive).basis()))))
                    .collect();
                Filtration::from_steps(r, steps)
            })
            .collect::<Result<_>>()?;
        let pieces: Vec<(Vec<i64>, Subspace<F>)> = if restricted.is_empty() {
            vec![(Vec::new(), Subspace::full(r))]
        } else {
            compatible_splitting(&restricted)?.components.into_iter().collect()
        };
        let base = n1.pow(e).kernel().intersect(&frame.w1.get(a));
        for (g, u) in pieces {
            let h: Vec<i64> = std::iter::once(a).chain(g.iter().map(|x| x + a)).collect();
            let domain = ws[1..].iter().zip(&h[1..]).fold(base.clone(), |acc, (w, &l)| acc.intersect(&w.get(l)));
            let rows: Vec<usize> = frame.blocks[&a].clone().collect();
            let pi = frame.basis_inv.mul(domain.basis()).select_rows(&rows);
            let wanted = primitive.basis().mul(u.basis()).select_rows(&rows);
            let x = pi.solve(&wanted).ok_or_else(|| Error::Internal(format!("primitive part at h = {h:?} does not lift")))?;
            let top = Subspace::span(&domain.basis().mul(&x));
            let mut kk: Vec<i64> = vec![a];
            kk.extend((1..h.len()).map(|j| h[j] - h[j - 1]));
            let mut current = top;
            for m in 0..=a {
                let mut key = kk.clone();
                key[0] -= 2 * m;
                parts.insert((a as usize, key), current.clone());
                current = current.image_under(n1);
            }
        }
    }
    let split = StrongSplitting { ambient: dim, parts };
    if !split.verify(t) {
        return Err(Error::Internal("strong splitting fails one of its defining conditions".into()));
    }
    Ok(split)
}

/// A basis vector `v_{k,h,η}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongBasisVector<F> {
    pub k: usize,
    pub h: Vec<i64>,
    pub eta: usize,
    pub v: Vec<F>,
}

/// Basis of each top part `P_k U_h` (`h_1 = k`) and its `N_1`-chains.
pub fn strong_basis<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<Vec<StrongBasisVector<F>>> {
    let split = strong_splitting(t, opts)?;
    let n1 = &t.maps()[0];
    let mut out = Vec::new();
    for ((k, h), s) in &split.parts {
        if h[0] != *k as i64 {
            continue;
        }
        for (eta, head) in s.basis_vectors().into_iter().enumerate() {
            let mut v = head;
            for m in 0..=*k as i64 {
                let mut hm = h.clone();
                hm[0] -= 2 * m;
                let next = n1.mul_vec(&v);
                out.push(StrongBasisVector { k: *k, h: hm, eta: eta + 1, v });
                v = next;
            }
        }
    }
    if !verify_strong_basis(t, &out)? {
        return Err(Error::Internal("strong basis fails one of its defining conditions".into()));
    }
    Ok(out)
}

/// The chain relations for `N_1`, `deg^{W(j)}(v_{k,h,η}) = ρ_j(h)`, and
/// compatibility of the whole basis with `(W(1), …, W(n))`.
pub fn verify_strong_basis<F: Field>(t: &CommutingTuple<F>, basis: &[StrongBasisVector<F>]) -> Result<bool> {
    let ws = t.filtrations();
    let n1 = &t.maps()[0];
    let find = |k: usize, h: &[i64], eta: usize| basis.iter().find(|b| b.k == k && b.h == h && b.eta == eta);
    for b in basis {
        let image = n1.mul_vec(&b.v);
        let k = b.k as i64;
        let ok = if b.h[0] == -k {
            image.iter().all(F::is_zero)
        } else {
            let mut lower = b.h.clone();
            lower[0] -= 2;
            find(b.k, &lower, b.eta).is_some_and(|c| c.v == image)
        };
        if !ok {
            return Ok(false);
        }
        for (j, w) in ws.iter().enumerate() {
            if w.degree(&b.v)? != rho(&b.h, j) {
                return Ok(false);
            }
        }
    }
    let m = Matrix::from_columns(t.dim(), &basis.iter().map(|b| b.v.clone()).collect::<Vec<_>>());
    is_compatible_basis(&m, &ws)
}

/// Both hypotheses and the conclusion of the reduction statement, each
/// evaluated on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    /// Bottom compatibility of every exterior power.
    pub universal_bottom: bool,
    /// Sequential compatibility of `(N_1 + N_2, N_3, …, N_n)`.
    pub merged_sequential: bool,
    /// Sequential compatibility of `(N_1, …, N_n)`.
    pub conclusion: bool,
}

impl ReductionReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.universal_bottom && self.merged_sequential
    }

    pub fn implication_holds(&self) -> bool {
        !self.hypotheses_hold() || self.conclusion
    }
}

pub fn check_reduction_hypotheses<F: Field>(t: &CommutingTuple<F>, opts: &CompatOptions) -> Result<ReductionReport> {
    if t.len() < 2 {
        return Err(Error::Precondition("the reduction needs at least two maps".into()));
    }
    Ok(ReductionReport {
        universal_bottom: is_universally_bottom_compatible(t, t.dim(), opts)?.is_none(),
        merged_sequential: is_sequentially_compatible(&t.merge_first_two()?, opts)?.is_none(),
        conclusion: is_sequentially_compatible(t, opts)?.is_none(),
    })
}

/// Hodge components `V^{p,q}` read off a grading `V = ⊕ E_l`, grouped by
/// the weight `p + q` of each family.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeBigrading<F: Field> {
    pub families: BTreeMap<i64, BTreeMap<(i64, i64), Subspace<F>>>,
}

/// Step 1: `V^{p,q} = E_p` with `p + q = weight`. Step 2: `E_l` goes to the
/// family of weight `l mod 2` with `V^{p,q} = E_{p−q}`.
pub fn hodge_bigrading<F: Field>(grading: &[(i64, Subspace<F>)], step: u8, weight: i64) -> Result<HodgeBigrading<F>> {
    let Some(ambient) = grading.first().map(|(_, s)| s.ambient_dim()) else {
        return Err(Error::Precondition("empty grading".into()));
    };
    let total: usize = grading.iter().map(|(_, s)| s.dim()).sum();
    let span = grading.iter().fold(Subspace::zero(ambient), |acc, (_, s)| acc.sum(s));
    let mut seen = std::collections::BTreeSet::new();
    if total != ambient || !span.is_full() || !grading.iter().all(|(l, _)| seen.insert(*l)) {
        return Err(Error::Precondition("grading is not a direct-sum decomposition".into()));
    }
    let mut families: BTreeMap<i64, BTreeMap<(i64, i64), Subspace<F>>> = BTreeMap::new();
    for (l, s) in grading {
        let (w, p) = match step {
            1 => (weight, *l),
            2 => {
                let w = l.rem_euclid(2);
                (w, (l + w) / 2)
            }
            _ => return Err(Error::Precondition(format!("step must be 1 or 2, got {step}"))),
        };
        families.entry(w).or_default().insert((p, w - p), s.clone());
    }
    Ok(HodgeBigrading { families })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn j(n: usize) -> Matrix<Rational> {
        Matrix::from_fn(n, n, |r, c| Rational::int((c == r + 1) as i64))
    }

    #[test]
    fn single_block_chain() {
        let t = CommutingTuple::new(vec![j(3)]).unwrap();
        let s = strong_splitting(&t, &CompatOptions::default()).unwrap();
        assert_eq!(s.dims(), BTreeMap::from([((2, vec![-2]), 1), ((2, vec![0]), 1), ((2, vec![2]), 1)]));
        let b = strong_basis(&t, &CompatOptions::default()).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[1].v, j(3).mul_vec(&b[0].v));
    }

    #[test]
    fn zero_tuple() {
        let t = CommutingTuple::new(vec![Matrix::<Rational>::zeros(2, 2), Matrix::zeros(2, 2)]).unwrap();
        let s = strong_splitting(&t, &CompatOptions::default()).unwrap();
        assert_eq!(s.dims(), BTreeMap::from([((0, vec![0, 0]), 2)]));
    }

    #[test]
    fn tensor_pair_counts() {
        let i = Matrix::identity(2);
        let t = CommutingTuple::new(vec![j(2).kron(&i), i.kron(&j(2))]).unwrap();
        let o = CompatOptions::default();
        let s = strong_splitting(&t, &o).unwrap();
        let tops: BTreeMap<(usize, Vec<i64>), usize> = s.dims().into_iter().filter(|((k, h), _)| h[0] == *k as i64).collect();
        assert_eq!(tops, BTreeMap::from([((1, vec![1, -1]), 1), ((1, vec![1, 1]), 1)]));
        assert_eq!(strong_basis(&t, &o).unwrap().len(), 4);
        let r = check_reduction_hypotheses(&t, &o).unwrap();
        assert!(r.hypotheses_hold() && r.conclusion);
    }

    #[test]
    fn bigradings() {
        let e = |i: usize| Subspace::<Rational>::coordinate(3, &[i]);
        let g = vec![(1, e(0)), (0, e(1)), (-1, e(2))];
        let b = hodge_bigrading(&g, 1, 1).unwrap();
        assert_eq!(b.families[&1][&(1, 0)], e(0));
        assert_eq!(b.families[&1][&(-1, 2)], e(2));
        let g2 = vec![(2, e(0)), (0, e(1)), (-2, e(2))];
        let b2 = hodge_bigrading(&g2, 2, 0).unwrap();
        assert_eq!(b2.families.len(), 1);
        assert_eq!(b2.families[&0][&(1, -1)], e(0));
        assert!(hodge_bigrading(&[(0, e(0)), (1, e(0))], 1, 0).is_err());
    }
}
