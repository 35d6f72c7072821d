//! JSON interchange for systems, elements, ideals and arc sets.
//!
//! Serialization is canonical: keys in a fixed order, degrees ascending,
//! floats in shortest round-trip form, so `parse(write(x)) == x` and equal
//! values produce identical bytes.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{CoefficientFunction, GenPoly, Model};
use crate::arcs::{parse_turn, turn_from_f64, ArcSet, Turn};
use crate::dynsys::{DynSystem, FiniteSystem};
use crate::error::{Error, Result};
use crate::ideals::{IdealSpec, Region, SubalgebraSpec};
use crate::laurent::LaurentPoly;
use crate::scalar::Real;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SystemJson {
    Finite {
        sigma: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Rotation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        irrational: bool,
    },
}

pub fn parse_system<T: Real>(text: &str) -> Result<DynSystem<T>> {
    match serde_json::from_str::<SystemJson>(text).map_err(parse_err)? {
        SystemJson::Finite { sigma, labels } => {
            let mut fs = FiniteSystem::new(sigma)?;
            if let Some(l) = labels {
                fs = fs.with_labels(l)?;
            }
            Ok(DynSystem::Finite(fs))
        }
        SystemJson::Rotation { p: Some(p), q: Some(q), theta: None, irrational: false } => DynSystem::rotation(p, q),
        SystemJson::Rotation { p: None, q: None, theta: Some(t), irrational: true } => DynSystem::irrational(T::lit(t)),
        SystemJson::Rotation { .. } => Err(Error::Parse(
            "rotation needs either p and q, or theta with \"irrational\": true".into(),
        )),
    }
}

pub fn write_system<T: Real>(sys: &DynSystem<T>) -> String {
    let dto = match sys {
        DynSystem::Finite(fs) => {
            SystemJson::Finite { sigma: fs.sigma().to_vec(), labels: fs.labels().map(<[String]>::to_vec) }
        }
        DynSystem::RationalRotation { p, q } => {
            SystemJson::Rotation { p: Some(*p), q: Some(*q), theta: None, irrational: false }
        }
        DynSystem::IrrationalRotation { theta } => {
            SystemJson::Rotation { p: None, q: None, theta: Some(theta.as_f64()), irrational: true }
        }
    };
    serde_json::to_string(&dto).expect("plain data serializes")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigCoeff {
    k: i64,
    c: [f64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    deg: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<TrigCoeff>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementJson {
    model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    terms: Vec<TermJson>,
}

fn c<T: Real>(v: [f64; 2]) -> Complex<T> {
    Complex::new(T::lit(v[0]), T::lit(v[1]))
}

fn pair<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn element_from_dto<T: Real>(e: ElementJson) -> Result<GenPoly<T>> {
    let model = match (e.model.as_str(), e.n) {
        ("discrete", Some(n)) => Model::Discrete(n),
        ("trig", None) => Model::Trig,
        ("discrete", None) => return Err(Error::Parse("discrete elements need \"n\"".into())),
        (m, _) => return Err(Error::Parse(format!("unknown model {m:?}"))),
    };
    let mut terms = Vec::new();
    for t in e.terms {
        let f = match (model, t.values, t.coeffs) {
            (Model::Discrete(n), Some(v), None) => {
                if v.len() != n {
                    return Err(Error::Parse(format!("degree {}: {} values for {n} points", t.deg, v.len())));
                }
                CoefficientFunction::Discrete(v.into_iter().map(c).collect())
            }
            (Model::Trig, None, Some(cs)) => {
                CoefficientFunction::Trig(LaurentPoly::from_coeffs(cs.into_iter().map(|tc| (tc.k, c(tc.c)))))
            }
            _ => return Err(Error::Parse(format!("degree {}: coefficient does not match model", t.deg))),
        };
        terms.push((t.deg, f));
    }
    GenPoly::from_terms(model, terms)
}

fn element_to_dto<T: Real>(a: &GenPoly<T>) -> ElementJson {
    let (model, n) = match a.model() {
        Model::Discrete(n) => ("discrete", Some(n)),
        Model::Trig => ("trig", None),
    };
    let terms = a
        .terms()
        .map(|(deg, f)| match f {
            CoefficientFunction::Discrete(v) => {
                TermJson { deg, values: Some(v.iter().map(|&z| pair(z)).collect()), coeffs: None }
            }
            CoefficientFunction::Trig(l) => TermJson {
                deg,
                values: None,
                coeffs: Some(l.terms().map(|(k, z)| TrigCoeff { k, c: pair(z) }).collect()),
            },
        })
        .collect();
    ElementJson { model: model.into(), n, terms }
}

pub fn parse_element<T: Real>(text: &str) -> Result<GenPoly<T>> {
    element_from_dto(serde_json::from_str(text).map_err(parse_err)?)
}

pub fn write_element<T: Real>(a: &GenPoly<T>) -> String {
    serde_json::to_string(&element_to_dto(a)).expect("plain data serializes")
}

/// The element as a JSON value, for embedding in reports.
pub fn element_value<T: Real>(a: &GenPoly<T>) -> serde_json::Value {
    serde_json::to_value(element_to_dto(a)).expect("plain data serializes")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealJson {
    generators: Vec<ElementJson>,
}

pub fn parse_ideal<T: Real>(text: &str) -> Result<IdealSpec<T>> {
    let dto: IdealJson = serde_json::from_str(text).map_err(parse_err)?;
    if dto.generators.is_empty() {
        return Err(Error::Parse("an ideal needs at least one generator".into()));
    }
    let gens = dto.generators.into_iter().map(element_from_dto).collect::<Result<Vec<_>>>()?;
    if gens.windows(2).any(|w| w[0].model() != w[1].model()) {
        return Err(Error::Parse("generators use different models".into()));
    }
    Ok(IdealSpec::Generated(gens))
}

pub fn write_ideal<T: Real>(ideal: &IdealSpec<T>) -> Result<String> {
    let IdealSpec::Generated(gens) = ideal else {
        return Err(Error::Precondition("only generated ideals have a file format".into()));
    };
    Ok(serde_json::to_string(&IdealJson { generators: gens.iter().map(element_to_dto).collect() })
        .expect("plain data serializes"))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TurnJson {
    Num(f64),
    Text(String),
}

impl TurnJson {
    fn turn(&self) -> Result<Turn> {
        match self {
            TurnJson::Num(x) => turn_from_f64(*x),
            TurnJson::Text(s) => parse_turn(s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcsJson {
    arcs: Vec<[TurnJson; 2]>,
}

impl ArcsJson {
    fn arc_set(&self) -> Result<ArcSet> {
        let arcs = self.arcs.iter().map(|[a, b]| Ok((a.turn()?, b.turn()?))).collect::<Result<Vec<_>>>()?;
        ArcSet::from_arcs(&arcs)
    }
}

/// Arc sets `{"arcs": [[a, b], …]}` with endpoints in turns, as numbers or `"p/q"`.
pub fn parse_arcs(text: &str) -> Result<ArcSet> {
    serde_json::from_str::<ArcsJson>(text).map_err(parse_err)?.arc_set()
}

pub fn write_arcs(a: &ArcSet) -> String {
    serde_json::to_string(a).expect("plain data serializes")
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RegionJson {
    Indices(Vec<usize>),
    Arcs(ArcsJson),
}

impl RegionJson {
    fn region(self) -> Result<Region> {
        match self {
            RegionJson::Indices(v) => Ok(Region::Indices(v.into_iter().collect())),
            RegionJson::Arcs(a) => Ok(Region::Arcs(a.arc_set()?)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SubalgebraJson {
    FullCommutant,
    BaseCx,
    EjIntp { n: i64, u1: RegionJson },
    Intp { x0: TurnJson },
    IsolB1 { base: usize, x1: TurnJson, x2: TurnJson },
    IsolB2 { base: usize, c1: ArcsJson },
}

/// Subalgebra specs, tagged by `"kind"`, in the form [`write_subalgebra`] emits.
pub fn parse_subalgebra(text: &str) -> Result<SubalgebraSpec> {
    Ok(match serde_json::from_str::<SubalgebraJson>(text).map_err(parse_err)? {
        SubalgebraJson::FullCommutant => SubalgebraSpec::FullCommutant,
        SubalgebraJson::BaseCx => SubalgebraSpec::BaseCx,
        SubalgebraJson::EjIntp { n, u1 } => SubalgebraSpec::EjIntp { n, u1: u1.region()? },
        SubalgebraJson::Intp { x0 } => SubalgebraSpec::Intp { x0: x0.turn()? },
        SubalgebraJson::IsolB1 { base, x1, x2 } => SubalgebraSpec::IsolB1 { base, x1: x1.turn()?, x2: x2.turn()? },
        SubalgebraJson::IsolB2 { base, c1 } => SubalgebraSpec::IsolB2 { base, c1: c1.arc_set()? },
    })
}

pub fn write_subalgebra(spec: &SubalgebraSpec) -> String {
    serde_json::to_string(spec).expect("plain data serializes")
}
