//! JSON shapes for complex numbers, function trees, interpolation data and
//! verdicts. Complex numbers are always `{"re": .., "im": ..}` objects.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{validate_bounded, AnalyticFn, Node};
use crate::geometry::{DiskPoint, MobiusMap};
use crate::hdq::{delta, SchurSequence, SchurStatus};
use crate::pick::{DataPoint, FeasibilityStatus, FeasibilityVerdict, InterpolationData};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Cx> for Complex64 {
    fn from(z: Cx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `#[serde(with = "cx")]` for `Complex64` fields.
pub mod cx {
    use super::Cx;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Cx::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Cx::deserialize(d).map(Complex64::from)
    }
}

fn cxs(v: &[Complex64]) -> Vec<Cx> {
    v.iter().map(|&z| z.into()).collect()
}

fn cplx(v: &[Cx]) -> Vec<Complex64> {
    v.iter().map(|&z| z.into()).collect()
}

/// Coefficients of `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub a: Cx,
    pub b: Cx,
    pub c: Cx,
    pub d: Cx,
}

impl From<&MobiusMap> for MapJson {
    fn from(m: &MobiusMap) -> Self {
        Self { a: m.a.into(), b: m.b.into(), c: m.c.into(), d: m.d.into() }
    }
}

impl From<MapJson> for MobiusMap {
    fn from(m: MapJson) -> Self {
        MobiusMap::new(m.a.into(), m.b.into(), m.c.into(), m.d.into())
    }
}

/// A function tree.
///
/// ```json
/// {"kind": "product",
///  "left": {"kind": "blaschke", "theta": 0.0, "zeros": [{"re": 0.5, "im": 0.0}]},
///  "right": {"kind": "poly", "coeffs": [{"re": 0.5, "im": 0.0}, {"re": 0.25, "im": 0.0}]}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FnJson {
    Const { value: Cx },
    Poly { coeffs: Vec<Cx> },
    Blaschke {
        #[serde(default)]
        theta: f64,
        zeros: Vec<Cx>,
    },
    PostMobius { map: MapJson, inner: Box<FnJson> },
    PreAuto { map: MapJson, inner: Box<FnJson> },
    Product { left: Box<FnJson>, right: Box<FnJson> },
    Delta { node: Cx, inner: Box<FnJson> },
    Schur { node: Cx, gamma: Cx, inner: Box<FnJson> },
}

/// Grid used to validate polynomial leaves while building a tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    pub grid_points: usize,
    pub radius: f64,
}

impl Default for Validation {
    fn default() -> Self {
        Self { grid_points: 4096, radius: 0.999 }
    }
}

impl FnJson {
    /// Builds the tree. With `validation`, every polynomial leaf is checked by
    /// sampling and marked bounded; a leaf that fails stays unvalidated and
    /// the build errors with `UnvalidatedPolynomial`.
    pub fn build(&self, validation: Option<Validation>) -> Result<AnalyticFn> {
        Ok(match self {
            FnJson::Const { value } => AnalyticFn::constant((*value).into())?,
            FnJson::Poly { coeffs } => {
                let f = AnalyticFn::polynomial(cplx(coeffs))?;
                match validation {
                    Some(v) => {
                        let (g, report) = validate_bounded(&f, v.grid_points, v.radius)?;
                        if !report.validated {
                            return Err(Error::UnvalidatedPolynomial);
                        }
                        g
                    }
                    None => f,
                }
            }
            FnJson::Blaschke { theta, zeros } => {
                let zeros = zeros.iter().map(|&a| DiskPoint::interior(a.into())).collect::<Result<Vec<_>>>()?;
                AnalyticFn::blaschke(*theta, &zeros)?
            }
            FnJson::PostMobius { map, inner } => AnalyticFn::post_mobius((*map).into(), inner.build(validation)?)?,
            FnJson::PreAuto { map, inner } => AnalyticFn::pre_automorphism((*map).into(), inner.build(validation)?)?,
            FnJson::Product { left, right } => AnalyticFn::product(left.build(validation)?, right.build(validation)?),
            FnJson::Delta { node, inner } => delta(&inner.build(validation)?, DiskPoint::interior((*node).into())?)?,
            FnJson::Schur { node, gamma, inner } => {
                AnalyticFn::schur_synth(DiskPoint::interior((*node).into())?, (*gamma).into(), inner.build(validation)?)?
            }
        })
    }

    pub fn from_fn(f: &AnalyticFn) -> Self {
        match f.node() {
            Node::Constant(c) => FnJson::Const { value: (*c).into() },
            Node::Polynomial { coeffs, .. } => FnJson::Poly { coeffs: cxs(coeffs) },
            Node::Blaschke { theta, zeros } => FnJson::Blaschke { theta: *theta, zeros: cxs(zeros) },
            Node::PostMobius { map, inner } => FnJson::PostMobius { map: map.into(), inner: Box::new(Self::from_fn(inner)) },
            Node::PreAutomorphism { map, inner } => {
                FnJson::PreAuto { map: map.into(), inner: Box::new(Self::from_fn(inner)) }
            }
            Node::Product(l, r) => FnJson::Product { left: Box::new(Self::from_fn(l)), right: Box::new(Self::from_fn(r)) },
            Node::Delta { inner, node, .. } => FnJson::Delta { node: (*node).into(), inner: Box::new(Self::from_fn(inner)) },
            Node::SchurSynth { node, gamma, inner } => {
                FnJson::Schur { node: (*node).into(), gamma: (*gamma).into(), inner: Box::new(Self::from_fn(inner)) }
            }
        }
    }
}

pub fn parse_fn(text: &str, validation: Option<Validation>) -> Result<AnalyticFn> {
    let tree: FnJson = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("function JSON: {e}")))?;
    tree.build(validation)
}

/// `{"points": [{"z": {..}, "w": {..}}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetJson {
    pub points: Vec<DataPoint>,
}

pub fn parse_dataset(text: &str) -> Result<InterpolationData> {
    let d: DatasetJson = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("dataset JSON: {e}")))?;
    InterpolationData::new(d.points)
}

pub fn dataset_to_json(data: &InterpolationData) -> String {
    serde_json::to_string(&DatasetJson { points: data.points().to_vec() }).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub gammas: Vec<Cx>,
    pub moduli: Vec<f64>,
    pub status: SchurStatus,
}

impl From<&SchurSequence> for SequenceJson {
    fn from(s: &SchurSequence) -> Self {
        Self { gammas: cxs(&s.gammas), moduli: s.gammas.iter().map(|g| g.norm()).collect(), status: s.status }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: FeasibilityStatus,
    pub min_pivot: f64,
    pub gammas: Option<SequenceJson>,
}

impl From<&FeasibilityVerdict> for VerdictJson {
    fn from(v: &FeasibilityVerdict) -> Self {
        Self { status: v.status, min_pivot: v.min_pivot, gammas: v.gammas.as_ref().map(SequenceJson::from) }
    }
}
