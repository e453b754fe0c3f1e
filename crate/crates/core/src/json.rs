//! JSON file formats read and written by the command line tool.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{LaurentMatrix, MPoly, Matrix, Poly, Rational, Subspace};
use crate::filtration::{Filtration, Splitting};
use crate::koszul::{FilteredKoszul, WeightConvention};
use crate::nilpotent::CommutingTuple;
use crate::twistor::{BundleMorphism, TwistorBundle};

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn key(h: &[i64]) -> String {
    h.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_key(k: &str) -> Result<Vec<i64>> {
    k.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("invalid index {k:?}")))).collect()
}

fn basis_space(ambient: usize, basis: &Matrix<Rational>, what: &str) -> Result<Subspace<Rational>> {
    if basis.rows() != ambient && basis.cols() > 0 {
        return Err(Error::Parse(format!("{what}: basis has {} rows, ambient dimension is {ambient}", basis.rows())));
    }
    Ok(if basis.cols() == 0 { Subspace::zero(ambient) } else { Subspace::span(basis) })
}

/// `{"ambientDim": n, "steps": {"<weight>": <basis matrix>}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationJson {
    #[serde(rename = "ambientDim")]
    pub ambient_dim: usize,
    pub steps: BTreeMap<String, Matrix<Rational>>,
}

impl FiltrationJson {
    pub fn from_filtration(w: &Filtration<Rational>) -> Self {
        FiltrationJson {
            ambient_dim: w.ambient_dim(),
            steps: w.steps().iter().map(|(l, s)| (l.to_string(), s.basis().clone())).collect(),
        }
    }

    pub fn to_filtration(&self) -> Result<Filtration<Rational>> {
        let mut steps = BTreeMap::new();
        for (k, b) in &self.steps {
            let l: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("invalid weight {k:?}")))?;
            steps.insert(l, basis_space(self.ambient_dim, b, &format!("step {k}"))?);
        }
        Filtration::from_steps(self.ambient_dim, steps)
    }
}

/// Same layout as [`FiltrationJson`] with keys `"h1,h2,…"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingJson {
    #[serde(rename = "ambientDim")]
    pub ambient_dim: usize,
    pub steps: BTreeMap<String, Matrix<Rational>>,
}

impl SplittingJson {
    pub fn from_splitting(s: &Splitting<Rational>) -> Self {
        SplittingJson { ambient_dim: s.ambient, steps: s.components.iter().map(|(h, u)| (key(h), u.basis().clone())).collect() }
    }

    pub fn to_splitting(&self) -> Result<Splitting<Rational>> {
        let mut components = BTreeMap::new();
        for (k, b) in &self.steps {
            components.insert(parse_key(k)?, basis_space(self.ambient_dim, b, &format!("component {k}"))?);
        }
        Ok(Splitting { ambient: self.ambient_dim, components })
    }
}

/// `{"maps": [<matrix>, …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub maps: Vec<Matrix<Rational>>,
}

impl TupleJson {
    pub fn from_tuple(t: &CommutingTuple<Rational>) -> Self {
        TupleJson { maps: t.maps().to_vec() }
    }
}

/// A single matrix, or a tuple; a bare matrix is read as a tuple of length one.
pub fn parse_tuple(text: &str) -> Result<CommutingTuple<Rational>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Tuple(TupleJson),
        Single(Matrix<Rational>),
    }
    let maps = match from_str::<Input>(text) {
        Ok(Input::Tuple(t)) => t.maps,
        Ok(Input::Single(m)) => vec![m],
        // the untagged error is uninformative; retry for the tuple's message
        Err(_) => from_str::<TupleJson>(text)?.maps,
    };
    if let Some(first) = maps.first() {
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != m.cols() || m.rows() != first.rows() {
                return Err(Error::Parse(format!(
                    "map {} is {}×{}, expected {}×{}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    first.rows(),
                    first.rows()
                )));
            }
        }
    }
    CommutingTuple::new(maps)
}

pub fn parse_matrix(text: &str) -> Result<Matrix<Rational>> {
    from_str(text)
}

/// Family of matrices with polynomial entries in the parameters.
pub fn parse_family(text: &str) -> Result<Matrix<MPoly<Rational>>> {
    from_str(text)
}

/// `{"twist": a, "lambda": <polynomial matrix>, "mu": <polynomial matrix>}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub twist: i64,
    pub lambda: Matrix<Poly<Rational>>,
    pub mu: Matrix<Poly<Rational>>,
}

/// `{"rank": r, "gluing": <Laurent matrix>}`, optionally with morphisms of
/// the bundle to itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleJson {
    pub rank: usize,
    pub gluing: LaurentMatrix<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismJson>,
}

impl BundleJson {
    pub fn new(b: &TwistorBundle<Rational>, morphisms: &[BundleMorphism<Rational>]) -> Self {
        BundleJson {
            rank: b.rank(),
            gluing: b.gluing().clone(),
            morphisms: morphisms
                .iter()
                .map(|f| MorphismJson { twist: f.twist, lambda: f.lambda.clone(), mu: f.mu.clone() })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<(TwistorBundle<Rational>, Vec<BundleMorphism<Rational>>)> {
        if self.gluing.rows() != self.rank || self.gluing.cols() != self.rank {
            return Err(Error::Parse(format!("gluing is {}×{}, rank is {}", self.gluing.rows(), self.gluing.cols(), self.rank)));
        }
        let b = TwistorBundle::new(self.gluing.clone())?;
        let mut maps = Vec::new();
        for (i, m) in self.morphisms.iter().enumerate() {
            let f = BundleMorphism::new(&b, &b, m.twist, m.lambda.clone(), m.mu.clone())
                .map_err(|e| Error::Precondition(format!("morphism {}: {e}", i + 1)))?;
            maps.push(f);
        }
        Ok((b, maps))
    }
}

pub fn parse_bundle(text: &str) -> Result<(TwistorBundle<Rational>, Vec<BundleMorphism<Rational>>)> {
    from_str::<BundleJson>(text)?.build()
}

/// Everything about a filtered Koszul complex that fits in a table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KoszulDump {
    pub convention: WeightConvention,
    #[serde(rename = "termDims")]
    pub term_dims: Vec<usize>,
    pub differentials: Vec<Matrix<Rational>>,
    #[serde(rename = "filtrationDims")]
    pub filtration_dims: Vec<BTreeMap<i64, usize>>,
    pub cohomology: Vec<usize>,
    /// Keys `"weight,degree"`.
    #[serde(rename = "gradedCohomology")]
    pub graded_cohomology: BTreeMap<String, usize>,
}

impl KoszulDump {
    pub fn new(c: &FilteredKoszul<Rational>) -> Result<Self> {
        let n = c.complex.length();
        Ok(KoszulDump {
            convention: c.convention,
            term_dims: c.complex.term_dims(),
            differentials: (0..n).map(|k| c.complex.differential(k)).collect(),
            filtration_dims: (0..=n).map(|k| c.filtration(k).steps().iter().map(|(&l, s)| (l, s.dim())).collect()).collect(),
            cohomology: c.complex.cohomology_dims()?,
            graded_cohomology: c.graded_cohomology()?.into_iter().map(|((w, k), d)| (format!("{w},{k}"), d)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Laurent, Ring};
    use crate::nilpotent::weight_filtration;

    fn j2() -> Matrix<Rational> {
        Matrix::from_rows(vec![vec![Rational::zero(), Rational::one()], vec![Rational::zero(), Rational::zero()]])
    }

    #[test]
    fn matrix_layout() {
        let text = to_string(&j2());
        assert_eq!(text, r#"{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}"#);
        assert_eq!(parse_matrix(&text).unwrap(), j2());
    }

    #[test]
    fn filtration_round_trip() {
        let w = weight_filtration(&j2()).unwrap();
        let j = FiltrationJson::from_filtration(&w);
        let back: FiltrationJson = from_str(&to_string(&j)).unwrap();
        assert_eq!(back.to_filtration().unwrap(), w);
    }

    #[test]
    fn tuple_errors() {
        let t = parse_tuple(r#"{"maps":[{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}]}"#).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(parse_tuple(&to_string(&j2())).unwrap(), t);
        let e = parse_tuple(r#"{"maps":[{"rows":1,"cols":1,"entries":[["1"]]}]}"#).unwrap_err();
        assert!(matches!(e, Error::NotNilpotent(_)));
        assert!(parse_tuple("{\"maps\": [").unwrap_err().is_input_error());
        let e = parse_tuple(
            r#"{"maps":[{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]},{"rows":1,"cols":1,"entries":[["0"]]}]}"#,
        );
        assert!(e.unwrap_err().to_string().contains("map 2"));
    }

    #[test]
    fn bundle_round_trip() {
        let b = TwistorBundle::new(Matrix::diagonal(&[Laurent::lambda_pow(2), Laurent::lambda_pow(-1)])).unwrap();
        let text = to_string(&BundleJson::new(&b, &[]));
        assert_eq!(text, r#"{"rank":2,"gluing":{"rows":2,"cols":2,"entries":[[{"2":"1"},{}],[{},{"-1":"1"}]]}}"#);
        assert_eq!(parse_bundle(&text).unwrap().0, b);
        assert!(matches!(
            parse_bundle(r#"{"rank":1,"gluing":{"rows":1,"cols":1,"entries":[[{"0":"1","1":"1"}]]}}"#),
            Err(Error::InvalidGluing(_))
        ));
    }

    #[test]
    fn family_entries() {
        let f = parse_family(r#"{"rows":1,"cols":1,"entries":[[{"1,0":"2","":"-1"}]]}"#).unwrap();
        assert_eq!(f[(0, 0)], MPoly::var(0).mul(&MPoly::constant(Rational::int(2))).sub(&MPoly::one()));
    }
}
