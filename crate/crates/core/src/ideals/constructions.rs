//! Intermediate subalgebras with and without the intersection property, and
//! the classification of a system by which of the two occurs.

use serde::Serialize;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly};
use crate::arcs::{ArcSet, Turn};
use crate::commutant::trig_commutant_degrees;
use crate::dynsys::{DynSystem, PointSet};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{cone, unit, Real};

use super::hull::IdealSpec;
use super::intersect::{intersect_with_subalgebra, IntersectOptions, IntersectionOutcome};
use super::subalgebra::{subalgebra_contains, CircleFunction, Element, Region, SubalgebraSpec};

/// `B = {a : supp a(k) ⊆ U₁ ∩ Per^k(σ), k ≠ 0}` and the ideal generated by
/// `f − f δⁿ` with `f` living on `U₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct EjIntpConstruction<T> {
    pub b: SubalgebraSpec,
    pub u2: Region,
    pub ideal: IdealSpec<T>,
}

pub fn build_ejintp<T: Real>(cp: &CrossedProduct<T>, n: i64, u1: Region) -> Result<EjIntpConstruction<T>> {
    if n <= 0 {
        return Err(Error::Hypothesis("n must be positive".into()));
    }
    let b = SubalgebraSpec::EjIntp { n, u1: u1.clone() };
    let u2 = match (cp.system(), &u1) {
        (DynSystem::Finite(fs), Region::Indices(s)) => {
            let PointSet::Indices(per) = cp.system().per_signed(n) else { unreachable!("finite") };
            let orbits = fs.orbits().into_iter().filter(|o| per.contains(&o.base())).count();
            if orbits < 2 {
                return Err(Error::Hypothesis(format!("Per^{n} contains {orbits} orbit(s); two are needed")));
            }
            b.validate(cp.system())?;
            if s.is_empty() {
                return Err(Error::Hypothesis("U₁ is empty".into()));
            }
            let rest: std::collections::BTreeSet<usize> = per.difference(s).copied().collect();
            if rest.is_empty() {
                return Err(Error::Hypothesis("U₁ fills Per^n; U₂ would be empty".into()));
            }
            Region::Indices(rest)
        }
        (DynSystem::RationalRotation { .. }, Region::Arcs(a)) => {
            b.validate(cp.system())?;
            if !a.has_interior() || a.covers_circle() {
                return Err(Error::Hypothesis("U₁ must be a proper set with interior".into()));
            }
            Region::Arcs(a.complement_closure())
        }
        (DynSystem::IrrationalRotation { .. }, _) => {
            return Err(Error::Hypothesis("Per^n is empty for an irrational rotation".into()))
        }
        _ => return Err(Error::Precondition("region does not match the system".into())),
    };
    let ideal = IdealSpec::BumpShift { n, support: u2.clone() };
    ideal.validate(cp)?;
    Ok(EjIntpConstruction { b, u2, ideal })
}

/// `B = {a ∈ C(X)′ : a(k)(x₀) = 0, k ≠ 0}` on a rational rotation.
pub fn build_intp<T: Real>(cp: &CrossedProduct<T>, x0: Turn) -> Result<SubalgebraSpec> {
    let b = SubalgebraSpec::Intp { x0 };
    b.validate(cp.system())?;
    Ok(b)
}

/// The two subalgebras over an isolated orbit and the ideal
/// `{0} ⊕ M_p(ker C₂)` missing the second.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolConstruction<T> {
    pub b1: SubalgebraSpec,
    pub b2: SubalgebraSpec,
    pub c2: ArcSet,
    pub ideal: IdealSpec<T>,
}

pub fn build_isolbana<T: Real>(
    cp: &CrossedProduct<T>,
    point: usize,
    x1: Turn,
    x2: Turn,
    c1: ArcSet,
    c2: Option<ArcSet>,
) -> Result<IsolConstruction<T>> {
    let fs = cp
        .system()
        .as_finite()
        .ok_or_else(|| Error::Hypothesis("isolated orbits need a finite system".into()))?;
    let orbit = fs
        .orbits()
        .into_iter()
        .find(|o| o.points.contains(&point))
        .ok_or_else(|| Error::Precondition(format!("point {point} is outside the system")))?;
    let c2 = c2.unwrap_or_else(|| c1.complement_closure());
    if !c1.is_proper() || !c2.is_proper() {
        return Err(Error::Hypothesis("C₁ and C₂ must be proper nonempty closed sets".into()));
    }
    if !c1.union(&c2).covers_circle() {
        return Err(Error::Hypothesis("C₁ ∪ C₂ must be the whole circle".into()));
    }
    if c1.intersection(&c2).is_empty() {
        return Err(Error::Hypothesis("C₁ ∩ C₂ must be nonempty".into()));
    }
    let base = orbit.base();
    let b1 = SubalgebraSpec::IsolB1 { base, x1, x2 };
    let b2 = SubalgebraSpec::IsolB2 { base, c1 };
    b1.validate(cp.system())?;
    b2.validate(cp.system())?;
    let hull = fs
        .orbits()
        .iter()
        .map(|o| (o.base(), if o.base() == base { c2.clone() } else { ArcSet::full() }))
        .collect();
    Ok(IsolConstruction { b1, b2, c2, ideal: IdealSpec::Hull(hull) })
}

/// Elements showing `C(X) ⊊ B ⊊ C(X)′`.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionWitnesses<T> {
    pub in_b_not_base: Element<T>,
    pub in_commutant_not_b: Element<T>,
    pub lower_strict: bool,
    pub upper_strict: bool,
}

pub fn inclusion_witnesses<T: Real>(cp: &CrossedProduct<T>, b: &SubalgebraSpec) -> Result<InclusionWitnesses<T>> {
    b.validate(cp.system())?;
    let (lo, hi) = match (b, cp.system()) {
        (SubalgebraSpec::EjIntp { n, u1: Region::Indices(s) }, DynSystem::Finite(fs)) => {
            let PointSet::Indices(per) = cp.system().per_signed(*n) else { unreachable!("finite") };
            let rest: Vec<usize> = per.difference(s).copied().collect();
            let f1 = CoefficientFunction::indicator(fs.len(), s.iter().copied());
            let f2 = CoefficientFunction::indicator(fs.len(), rest);
            (Element::Poly(GenPoly::monomial(*n, f1)), Element::Poly(GenPoly::monomial(*n, f2)))
        }
        (SubalgebraSpec::EjIntp { n, u1 }, DynSystem::RationalRotation { .. }) => {
            let Region::Arcs(a) = u1 else { unreachable!("validated") };
            (
                Element::Bump { support: u1.clone(), coeffs: vec![(*n, T::one())] },
                Element::Bump { support: Region::Arcs(a.complement_closure()), coeffs: vec![(*n, T::one())] },
            )
        }
        (SubalgebraSpec::Intp { x0 }, DynSystem::RationalRotation { q, .. }) => {
            let x0 = T::lit(crate::arcs::turn_to_f64(*x0));
            let half = num_complex::Complex::new(T::lit(-0.5), T::zero());
            let g = CoefficientFunction::Trig(LaurentPoly::from_coeffs([
                (0, cone()),
                (1, half * unit(-x0)),
                (-1, half * unit(x0)),
            ]));
            (Element::Poly(GenPoly::monomial(*q as i64, g)), Element::Poly(cp.delta(*q as i64)))
        }
        (SubalgebraSpec::IsolB1 { base, x1, x2 }, DynSystem::Finite(_)) => {
            let zs = [unit(T::lit(crate::arcs::turn_to_f64(*x1))), unit(T::lit(crate::arcs::turn_to_f64(*x2)))];
            let h = super::hull::vanishing_laurent(&zs);
            (
                Element::OrbitDiag { base: *base, h: CircleFunction::Laurent(h) },
                Element::OrbitDiag { base: *base, h: CircleFunction::Laurent(LaurentPoly::monomial(1, cone())) },
            )
        }
        (SubalgebraSpec::IsolB2 { base, c1 }, DynSystem::Finite(_)) => (
            Element::OrbitDiag { base: *base, h: CircleFunction::Tent(c1.gaps()) },
            Element::OrbitDiag { base: *base, h: CircleFunction::Laurent(LaurentPoly::monomial(1, cone())) },
        ),
        _ => return Err(Error::Precondition(format!("{} has no strict inclusions to witness", b.name()))),
    };
    let lower_strict = subalgebra_contains(cp, b, &lo)? && !subalgebra_contains(cp, &SubalgebraSpec::BaseCx, &lo)?;
    let upper_strict = subalgebra_contains(cp, &SubalgebraSpec::FullCommutant, &hi)? && !subalgebra_contains(cp, b, &hi)?;
    Ok(InclusionWitnesses { in_b_not_base: lo, in_commutant_not_b: hi, lower_strict, upper_strict })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MellanCase {
    /// Topologically free: `C(X) = C(X)′` and there is nothing in between.
    TopologicallyFree,
    /// Some intermediate subalgebra has the intersection property and some does not.
    NotTopologicallyFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MellanBranch {
    IsolatedOrbit,
    NonIsolatedPoint,
}

/// A constructed subalgebra with its inclusion witnesses and intersection results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubalgebraVerdict<T: Real> {
    pub spec: SubalgebraSpec,
    pub strictly_above_base: bool,
    pub strictly_below_commutant: bool,
    pub witness_in_b: String,
    pub witness_outside_b: String,
    pub outcomes: Vec<IntersectionOutcome<T>>,
}

impl<T: Real> SubalgebraVerdict<T> {
    pub fn all_witnessed(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(IntersectionOutcome::is_witness)
    }

    pub fn certified_empty(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(IntersectionOutcome::is_certified_empty)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MellanReport<T: Real> {
    pub case: MellanCase,
    pub branch: Option<MellanBranch>,
    /// Only degree zero admits commutant elements (checked up to degree and trig degree 6).
    pub commutant_equals_base: Option<bool>,
    /// Has the intersection property against the battery.
    pub b1: Option<SubalgebraVerdict<T>>,
    /// Misses a nonzero ideal, certified.
    pub b2: Option<SubalgebraVerdict<T>>,
}

impl<T: Real> MellanReport<T> {
    /// The report agrees with the dichotomy: case (i) with `C(X) = C(X)′`, or
    /// case (ii) with both constructions verified.
    pub fn consistent(&self) -> bool {
        match self.case {
            MellanCase::TopologicallyFree => self.commutant_equals_base == Some(true),
            MellanCase::NotTopologicallyFree => {
                let strict = |v: &SubalgebraVerdict<T>| v.strictly_above_base && v.strictly_below_commutant;
                self.b1.as_ref().is_some_and(|v| strict(v) && v.all_witnessed())
                    && self.b2.as_ref().is_some_and(|v| strict(v) && v.certified_empty())
            }
        }
    }
}

fn verdict<T: Real>(
    cp: &CrossedProduct<T>,
    spec: SubalgebraSpec,
    ideals: &[IdealSpec<T>],
    opts: &IntersectOptions,
) -> Result<SubalgebraVerdict<T>> {
    let w = inclusion_witnesses(cp, &spec)?;
    let outcomes = ideals
        .iter()
        .map(|i| intersect_with_subalgebra(cp, i, &spec, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubalgebraVerdict {
        spec,
        strictly_above_base: w.lower_strict,
        strictly_below_commutant: w.upper_strict,
        witness_in_b: w.in_b_not_base.describe(),
        witness_outside_b: w.in_commutant_not_b.describe(),
        outcomes,
    })
}

/// Classifies the system and, when it is not topologically free, builds a
/// subalgebra with the intersection property (checked against `battery`)
/// and one without it (with a certified-empty intersection).
pub fn mellankompl_report<T: Real>(
    cp: &CrossedProduct<T>,
    battery: &[IdealSpec<T>],
    opts: &IntersectOptions,
) -> Result<MellanReport<T>> {
    if cp.system().is_topologically_free() {
        let degrees = trig_commutant_degrees(cp, 6, 6)?;
        return Ok(MellanReport {
            case: MellanCase::TopologicallyFree,
            branch: None,
            commutant_equals_base: Some(degrees == [0]),
            b1: None,
            b2: None,
        });
    }
    match cp.system() {
        DynSystem::Finite(fs) => {
            let base = fs.orbits()[0].base();
            let c1 = ArcSet::arc(Turn::from_integer(0), Turn::new(1, 2))?;
            let iso = build_isolbana(cp, base, Turn::new(1, 4), Turn::new(3, 4), c1, None)?;
            let b1 = verdict(cp, iso.b1, battery, opts)?;
            let b2 = verdict(cp, iso.b2, std::slice::from_ref(&iso.ideal), opts)?;
            Ok(MellanReport {
                case: MellanCase::NotTopologicallyFree,
                branch: Some(MellanBranch::IsolatedOrbit),
                commutant_equals_base: Some(false),
                b1: Some(b1),
                b2: Some(b2),
            })
        }
        DynSystem::RationalRotation { q, .. } => {
            let q = *q as i64;
            let mut raw = Vec::new();
            for j in 0..q {
                raw.push((Turn::new(j, q), Turn::new(3 * j + 1, 3 * q)));
            }
            let u1 = ArcSet::from_arcs(&raw)?;
            let b1 = verdict(cp, build_intp(cp, Turn::from_integer(0))?, battery, opts)?;
            let ej = build_ejintp(cp, q, Region::Arcs(u1))?;
            let b2 = verdict(cp, ej.b, std::slice::from_ref(&ej.ideal), opts)?;
            Ok(MellanReport {
                case: MellanCase::NotTopologicallyFree,
                branch: Some(MellanBranch::NonIsolatedPoint),
                commutant_equals_base: Some(false),
                b1: Some(b1),
                b2: Some(b2),
            })
        }
        DynSystem::IrrationalRotation { .. } => unreachable!("irrational rotations are topologically free"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycles() -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(vec![1, 0, 3, 2]).unwrap())
    }

    #[test]
    fn ejintp_on_two_cycles() {
        let cp = two_cycles();
        let ej = build_ejintp(&cp, 2, Region::Indices([0, 1].into())).unwrap();
        assert_eq!(ej.u2, Region::Indices([2, 3].into()));
        let out = intersect_with_subalgebra(&cp, &ej.ideal, &ej.b, &Default::default()).unwrap();
        assert!(out.is_certified_empty(), "{out:?}");
        let w = inclusion_witnesses(&cp, &ej.b).unwrap();
        assert!(w.lower_strict && w.upper_strict);
        assert!(build_ejintp(&cp, 1, Region::Indices([0, 1].into())).is_err());
    }

    #[test]
    fn isolbana_on_swap() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 0]).unwrap());
        let c1 = ArcSet::arc(Turn::from_integer(0), Turn::new(1, 2)).unwrap();
        let iso = build_isolbana(&cp, 0, Turn::new(1, 4), Turn::new(3, 4), c1.clone(), None).unwrap();
        let out = intersect_with_subalgebra(&cp, &iso.ideal, &iso.b2, &Default::default()).unwrap();
        assert!(out.is_certified_empty(), "{out:?}");
        for b in [&iso.b1, &iso.b2] {
            let w = inclusion_witnesses(&cp, b).unwrap();
            assert!(w.lower_strict && w.upper_strict, "{b:?}");
        }
        let disjoint = ArcSet::arc(Turn::new(3, 4), Turn::new(7, 8)).unwrap();
        assert!(build_isolbana(&cp, 0, Turn::new(1, 4), Turn::new(3, 4), c1, Some(disjoint)).is_err());
    }

    #[test]
    fn rotation_constructions() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 2).unwrap());
        let report = mellankompl_report(&cp, &[IdealSpec::Generated(vec![cp.delta(1).add(&cp.one()).unwrap()])], &Default::default()).unwrap();
        assert_eq!(report.branch, Some(MellanBranch::NonIsolatedPoint));
        assert!(report.consistent(), "{report:?}");
        assert!(build_intp(&cp, Turn::new(1, 3)).is_ok());
    }

    #[test]
    fn irrational_is_case_one() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::irrational(std::f64::consts::SQRT_2 - 1.0).unwrap());
        let report = mellankompl_report(&cp, &[], &Default::default()).unwrap();
        assert_eq!(report.case, MellanCase::TopologicallyFree);
        assert!(report.consistent());
    }
}
