//! Crossed product C*-algebras `C*(Σ)` of homeomorphisms of compact spaces:
//! generalized polynomials, their irreducible representations, the commutant
//! of `C(X)`, and the ideal-intersection machinery.

pub mod algebra;
pub mod arcs;
pub mod commutant;
pub mod dynsys;
pub mod error;
pub mod fixtures;
pub mod ideals;
pub mod io;
pub mod laurent;
pub mod linalg;
pub mod norm;
pub mod random;
pub mod reps;
pub mod scalar;

pub use algebra::{CoefficientFunction, CrossedProduct, GenPoly, Model};
pub use dynsys::{DynSystem, FiniteSystem, Orbit, PeriodicityProfile, Point, PointSet, SystemKind};
pub use error::{Error, Result};
pub use ideals::{IdealSpec, IntersectionOutcome, SubalgebraSpec, VanishingSet};
pub use arcs::{ArcSet, Turn};
pub use laurent::LaurentPoly;
pub use norm::{operator_norm, NormEstimate, NormOptions};
pub use reps::{pure_state, rep_periodic, SampleGrid};
pub use scalar::Real;

pub type GenPolyF64 = GenPoly<f64>;
pub type CrossedProductF64 = CrossedProduct<f64>;
pub type DynSystemF64 = DynSystem<f64>;
pub type CoefficientFunctionF64 = CoefficientFunction<f64>;
pub type GenPolyF32 = GenPoly<f32>;
pub type CrossedProductF32 = CrossedProduct<f32>;
