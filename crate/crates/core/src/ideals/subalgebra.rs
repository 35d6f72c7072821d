//! Intermediate subalgebras `C(X) ⊆ B ⊆ C(X)′` and the elements used to
//! witness intersections with ideals.
//!
//! Besides generalized polynomials, elements may be given symbolically when
//! no polynomial exists: a function with compact support in an open arc of
//! the circle is never a trigonometric polynomial.

use std::collections::BTreeSet;

use num_complex::Complex;
use serde::Serialize;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly};
use crate::arcs::{turn_to_f64, ArcSet, OpenArc, Turn};
use crate::commutant::in_commutant;
use crate::dynsys::{DynSystem, FiniteSystem, Point};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::reps::orbit_symbolic;
use crate::scalar::{cpow, czero, unit, Real};

use super::hull::{orbit_diag_poly, vanishing_laurent, FiberZeros};

/// Relative tolerance for pointwise equalities of coefficient data.
const EQ_TOL: f64 = 1e-10;

/// An invariant subset of `X` with nonempty interior: a set of indices, or
/// the interior of a closed arc set on the circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Region {
    Indices(BTreeSet<usize>),
    Arcs(ArcSet),
}

impl Region {
    pub fn validate<T: Real>(&self, sys: &DynSystem<T>) -> Result<()> {
        match (self, sys) {
            (Region::Indices(s), DynSystem::Finite(fs)) => {
                if let Some(&x) = s.iter().find(|&&x| x >= fs.len()) {
                    return Err(Error::Precondition(format!("point {x} is outside the system")));
                }
                Ok(())
            }
            (Region::Arcs(_), DynSystem::RationalRotation { .. }) => Ok(()),
            _ => Err(Error::Precondition("region does not match the system".into())),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Indices(s) => s.is_empty(),
            Region::Arcs(a) => !a.has_interior(),
        }
    }

    pub fn is_invariant<T: Real>(&self, sys: &DynSystem<T>) -> bool {
        match (self, sys) {
            (Region::Indices(s), DynSystem::Finite(fs)) => fs.is_invariant(s),
            (Region::Arcs(a), DynSystem::RationalRotation { p, q }) => {
                a.translate(Turn::new(*p as i64, *q as i64)) == *a
            }
            _ => false,
        }
    }

    /// Whether the region lies in `Per^n(σ)`.
    pub fn within_per<T: Real>(&self, sys: &DynSystem<T>, n: i64) -> bool {
        match (self, sys) {
            (Region::Indices(s), DynSystem::Finite(fs)) => {
                let per = fs.periods();
                s.iter().all(|&x| n.rem_euclid(per[x] as i64) == 0)
            }
            (Region::Arcs(_), DynSystem::RationalRotation { q, .. }) => n.rem_euclid(*q as i64) == 0,
            _ => false,
        }
    }

    pub fn subset_of(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Indices(a), Region::Indices(b)) => a.is_subset(b),
            (Region::Arcs(a), Region::Arcs(b)) => b.contains_set(a),
            _ => false,
        }
    }

    pub fn interiors_disjoint(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Indices(a), Region::Indices(b)) => a.is_disjoint(b),
            (Region::Arcs(a), Region::Arcs(b)) => !a.overlaps_interior(b),
            _ => false,
        }
    }

    /// Membership of a point in the (open) region.
    pub fn contains_point<T: Real>(&self, x: Point<T>) -> bool {
        match (self, x) {
            (Region::Indices(s), Point::Index(i)) => s.contains(&i),
            (Region::Arcs(a), Point::Circle(y)) => {
                let scale = 1i64 << 40;
                a.interior_contains(Turn::new((y.as_f64() * scale as f64).round() as i64, scale))
            }
            _ => false,
        }
    }

    pub fn contains_turn(&self, x: Turn) -> bool {
        match self {
            Region::Arcs(a) => a.interior_contains(x),
            Region::Indices(_) => false,
        }
    }
}

/// A continuous function on the parameter circle of one orbit.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleFunction<T> {
    Laurent(LaurentPoly<T>),
    /// Nonnegative, positive exactly on the union of the open arcs: the sum of
    /// unit-height tents over them.
    Tent(Vec<OpenArc>),
    /// Values in `[0, 1]`, equal to `1` on `one_on` and to `0` on `zero_arcs`
    /// and at `zero_points` (turns); the two sets are disjoint.
    Urysohn { one_on: ArcSet, zero_arcs: ArcSet, zero_points: Vec<f64> },
}

impl<T: Real> CircleFunction<T> {
    pub fn describe(&self) -> String {
        match self {
            CircleFunction::Laurent(h) => {
                let terms: Vec<String> = h
                    .terms()
                    .map(|(k, c)| format!("({:.6}{:+.6}i)z^{k}", c.re.as_f64(), c.im.as_f64()))
                    .collect();
                if terms.is_empty() { "0".into() } else { terms.join(" + ") }
            }
            CircleFunction::Tent(arcs) => {
                let parts: Vec<String> = arcs.iter().map(|a| format!("({}, {})", a.start, a.end)).collect();
                format!("tent on {}", parts.join(" ∪ "))
            }
            CircleFunction::Urysohn { one_on, zero_arcs, zero_points } => {
                format!("urysohn: 1 on {one_on}, 0 on {zero_arcs} and at {zero_points:?}")
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CircleFunction::Laurent(h) => h.is_zero(T::tau_zero()),
            CircleFunction::Tent(arcs) => arcs.is_empty(),
            CircleFunction::Urysohn { one_on, .. } => one_on.is_empty(),
        }
    }

    /// `sup |h|`; exact for tents and Urysohn functions, sampled for polynomials.
    pub fn sup(&self) -> T {
        match self {
            CircleFunction::Laurent(h) => (0..512)
                .map(|i| h.eval_turns(T::from_usize(i) / T::lit(512.0)).norm())
                .fold(T::zero(), T::max),
            _ if self.is_zero() => T::zero(),
            _ => T::one(),
        }
    }

    fn equal_at(&self, x1: Turn, x2: Turn) -> bool {
        match self {
            CircleFunction::Laurent(h) => {
                let d = h.eval_turns(T::lit(turn_to_f64(x1))) - h.eval_turns(T::lit(turn_to_f64(x2)));
                d.norm().as_f64() <= EQ_TOL * (1.0 + h.l1().as_f64())
            }
            CircleFunction::Tent(arcs) => !arcs.iter().any(|a| a.contains(x1) || a.contains(x2)),
            CircleFunction::Urysohn { one_on, zero_arcs, zero_points } => {
                let zero = |x: Turn| {
                    zero_arcs.contains(x)
                        || zero_points.iter().any(|&p| (p - turn_to_f64(x)).abs() < 1e-12)
                };
                (one_on.contains(x1) && one_on.contains(x2)) || (zero(x1) && zero(x2))
            }
        }
    }

    fn constant_on(&self, c: &ArcSet) -> bool {
        match self {
            CircleFunction::Laurent(h) => {
                if c.has_interior() {
                    h.terms().all(|(k, v)| k == 0 || v.norm() <= T::tau_zero())
                } else {
                    let vals: Vec<Complex<T>> =
                        c.intervals().iter().map(|&(a, _)| h.eval_turns(T::lit(turn_to_f64(a)))).collect();
                    vals.windows(2)
                        .all(|w| (w[0] - w[1]).norm().as_f64() <= EQ_TOL * (1.0 + h.l1().as_f64()))
                }
            }
            CircleFunction::Tent(arcs) => arcs.iter().all(|a| !open_arc_meets(a, c)),
            CircleFunction::Urysohn { one_on, zero_arcs, .. } => one_on.contains_set(c) || zero_arcs.contains_set(c),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            CircleFunction::Laurent(h) => h.terms().all(|(k, v)| k == 0 || v.norm() <= T::tau_zero()),
            _ => self.is_zero(),
        }
    }
}

fn open_arc_meets(a: &OpenArc, c: &ArcSet) -> bool {
    let closed = ArcSet::arc(a.start, a.end).expect("open arc length in (0, 1]");
    closed.intersection(c).intervals().iter().any(|&(lo, hi)| lo < hi || a.contains(lo))
}

/// An element of `C(X)′`.
#[derive(Debug, Clone, PartialEq)]
pub enum Element<T> {
    Poly(GenPoly<T>),
    /// `f · Σ cₙ δⁿ` with `f` a unit-height bump, positive exactly on the
    /// interior of `support`; every `n` is a multiple of the periods there.
    Bump { support: Region, coeffs: Vec<(i64, T)> },
    /// Acts as `diag(h, …, h)` on the orbit of `base` and as zero elsewhere.
    OrbitDiag { base: usize, h: CircleFunction<T> },
}

impl<T: Real> Element<T> {
    pub fn describe(&self) -> String {
        match self {
            Element::Poly(a) => {
                let degs: Vec<i64> = a.degrees().collect();
                format!("generalized polynomial with degrees {degs:?}")
            }
            Element::Bump { support, coeffs } => {
                let terms: Vec<String> = coeffs.iter().map(|(n, c)| format!("{:+}·δ^{n}", c.as_f64())).collect();
                let sup = match support {
                    Region::Indices(s) => format!("{s:?}"),
                    Region::Arcs(a) => a.to_string(),
                };
                format!("bump on {sup} times ({})", terms.join(" "))
            }
            Element::OrbitDiag { base, h } => format!("diag({}) on the orbit of {base}", h.describe()),
        }
    }

    /// A generalized polynomial equal to the element, when one exists.
    pub fn to_poly(&self, cp: &CrossedProduct<T>) -> Result<Option<GenPoly<T>>> {
        Ok(match (self, cp.system()) {
            (Element::Poly(a), _) => Some(a.clone()),
            (Element::OrbitDiag { base, h: CircleFunction::Laurent(h) }, DynSystem::Finite(fs)) => {
                Some(orbit_diag_poly(fs, *base, h)?)
            }
            (Element::Bump { support: Region::Indices(s), coeffs }, DynSystem::Finite(fs)) => {
                let f = CoefficientFunction::indicator(fs.len(), s.iter().copied());
                Some(GenPoly::from_terms(
                    cp.model(),
                    coeffs.iter().map(|&(n, c)| (n, f.scale(Complex::new(c, T::zero())))),
                )?)
            }
            _ => None,
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Poly(a) => a.is_zero(),
            Element::Bump { support, coeffs } => support.is_empty() || coeffs.iter().all(|(_, c)| c.abs() <= T::tau_zero()),
            Element::OrbitDiag { h, .. } => h.is_zero(),
        }
    }

    /// Lower bound for the norm; exact up to sampling for symbolic elements.
    pub fn norm_lower(&self, cp: &CrossedProduct<T>) -> Result<T> {
        if let Some(a) = self.to_poly(cp)? {
            let opts = crate::norm::NormOptions { tol: 1e-6, ..crate::norm::NormOptions::quick() };
            return Ok(crate::norm::operator_norm(cp, &a, &opts)?.estimate);
        }
        Ok(match self {
            Element::Poly(_) => unreachable!("converted above"),
            Element::Bump { support, coeffs } => {
                let period = match (support, cp.system()) {
                    (_, DynSystem::RationalRotation { q, .. }) => *q as i64,
                    _ => 1,
                };
                if support.is_empty() {
                    T::zero()
                } else {
                    (0..512)
                        .map(|i| {
                            let t = unit(T::from_usize(i) / T::lit(512.0));
                            coeffs
                                .iter()
                                .fold(czero::<T>(), |acc, &(n, c)| acc + cpow(t, n / period) * c)
                                .norm()
                        })
                        .fold(T::zero(), T::max)
                }
            }
            Element::OrbitDiag { h, .. } => h.sup(),
        })
    }
}

/// An intermediate subalgebra `C(X) ⊆ B ⊆ C(X)′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubalgebraSpec {
    FullCommutant,
    BaseCx,
    /// `{a : supp a(k) ⊆ U₁ ∩ Per^k(σ) for k ≠ 0}`.
    EjIntp { n: i64, u1: Region },
    /// `{a ∈ C(X)′ : a(k)(x₀) = 0 for k ≠ 0}` on a rational rotation.
    Intp {
        #[serde(serialize_with = "ser_turn")]
        x0: Turn,
    },
    /// Commutant off the orbit of `base`, `diag(f)` with `f(x₁) = f(x₂)` on it.
    IsolB1 {
        base: usize,
        #[serde(serialize_with = "ser_turn")]
        x1: Turn,
        #[serde(serialize_with = "ser_turn")]
        x2: Turn,
    },
    /// Commutant off the orbit of `base`, `diag(f)` with `f` constant on `C₁` on it.
    IsolB2 { base: usize, c1: ArcSet },
}

fn ser_turn<S: serde::Serializer>(x: &Turn, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The per-orbit image of a subalgebra on a finite system, inside
/// `C(X)′|_O ≅ C(𝕋)^p` (diagonal matrices).
#[derive(Debug, Clone, PartialEq)]
pub enum LocalAlgebra {
    Full,
    /// Constant diagonals.
    Scalars,
    /// `diag(f, …, f)` with `f(x₁) = f(x₂)`.
    EqualAt(Turn, Turn),
    /// `diag(f, …, f)` with `f` constant on the set.
    ConstantOn(ArcSet),
}

impl SubalgebraSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SubalgebraSpec::FullCommutant => "full-commutant",
            SubalgebraSpec::BaseCx => "base-cx",
            SubalgebraSpec::EjIntp { .. } => "ejintp",
            SubalgebraSpec::Intp { .. } => "intp",
            SubalgebraSpec::IsolB1 { .. } => "isol-b1",
            SubalgebraSpec::IsolB2 { .. } => "isol-b2",
        }
    }

    pub fn validate<T: Real>(&self, sys: &DynSystem<T>) -> Result<()> {
        match self {
            SubalgebraSpec::FullCommutant | SubalgebraSpec::BaseCx => Ok(()),
            SubalgebraSpec::EjIntp { n, u1 } => {
                if *n <= 0 {
                    return Err(Error::Hypothesis("degree n must be positive".into()));
                }
                u1.validate(sys)?;
                if !u1.is_invariant(sys) {
                    return Err(Error::Hypothesis("U₁ is not invariant".into()));
                }
                if !u1.within_per(sys, *n) {
                    return Err(Error::Hypothesis(format!("U₁ is not inside Per^{n}")));
                }
                Ok(())
            }
            SubalgebraSpec::Intp { .. } => match sys {
                DynSystem::RationalRotation { .. } => Ok(()),
                _ => Err(Error::Hypothesis("x₀ must be a non-isolated point of a rational rotation".into())),
            },
            SubalgebraSpec::IsolB1 { base, x1, x2 } => {
                orbit_of(sys, *base)?;
                if x1 == x2 {
                    return Err(Error::Hypothesis("x₁ and x₂ must differ".into()));
                }
                Ok(())
            }
            SubalgebraSpec::IsolB2 { base, c1 } => {
                orbit_of(sys, *base)?;
                if !c1.is_proper() {
                    return Err(Error::Hypothesis("C₁ must be a proper nonempty closed set".into()));
                }
                Ok(())
            }
        }
    }

    /// The local algebra over the orbit with the given base point.
    pub fn local_algebra(&self, fs: &FiniteSystem, base: usize) -> LocalAlgebra {
        let same_orbit = |b: usize| fs.orbits().iter().any(|o| o.points.contains(&b) && o.points.contains(&base));
        match self {
            SubalgebraSpec::FullCommutant | SubalgebraSpec::Intp { .. } => LocalAlgebra::Full,
            SubalgebraSpec::BaseCx => LocalAlgebra::Scalars,
            SubalgebraSpec::EjIntp { u1, .. } => {
                if matches!(u1, Region::Indices(s) if s.contains(&base)) {
                    LocalAlgebra::Full
                } else {
                    LocalAlgebra::Scalars
                }
            }
            SubalgebraSpec::IsolB1 { base: b, x1, x2 } if same_orbit(*b) => LocalAlgebra::EqualAt(*x1, *x2),
            SubalgebraSpec::IsolB2 { base: b, c1 } if same_orbit(*b) => LocalAlgebra::ConstantOn(c1.clone()),
            _ => LocalAlgebra::Full,
        }
    }
}

fn orbit_of<T: Real>(sys: &DynSystem<T>, x: usize) -> Result<crate::dynsys::Orbit> {
    let fs = sys.as_finite().ok_or_else(|| Error::Hypothesis("isolated orbits need a finite system".into()))?;
    fs.orbits()
        .into_iter()
        .find(|o| o.points.contains(&x))
        .ok_or_else(|| Error::Precondition(format!("point {x} is outside the system")))
}

/// Whether `a ∈ B`.
pub fn subalgebra_contains<T: Real>(cp: &CrossedProduct<T>, b: &SubalgebraSpec, a: &Element<T>) -> Result<bool> {
    b.validate(cp.system())?;
    match a {
        Element::Poly(a) => poly_in(cp, b, a),
        Element::Bump { support, coeffs } => {
            support.validate(cp.system())?;
            let shifts: Vec<i64> = coeffs.iter().filter(|(n, c)| *n != 0 && c.abs() > T::tau_zero()).map(|(n, _)| *n).collect();
            if !support.is_invariant(cp.system()) || !shifts.iter().all(|&n| support.within_per(cp.system(), n)) {
                return Err(Error::Precondition("bump element is not in the commutant".into()));
            }
            if shifts.is_empty() || support.is_empty() {
                return Ok(true);
            }
            Ok(match b {
                SubalgebraSpec::FullCommutant => true,
                SubalgebraSpec::BaseCx => false,
                SubalgebraSpec::EjIntp { u1, .. } => support.subset_of(u1),
                SubalgebraSpec::Intp { x0 } => !support.contains_turn(*x0),
                SubalgebraSpec::IsolB1 { .. } | SubalgebraSpec::IsolB2 { .. } => match a.to_poly(cp)? {
                    Some(p) => poly_in(cp, b, &p)?,
                    None => false,
                },
            })
        }
        Element::OrbitDiag { base, h } => {
            let fs = cp.system().require_finite("orbit-diagonal element")?;
            Ok(match b.local_algebra(fs, *base) {
                _ if h.is_zero() => true,
                LocalAlgebra::Full => true,
                LocalAlgebra::Scalars => h.is_constant(),
                LocalAlgebra::EqualAt(x1, x2) => h.equal_at(x1, x2),
                LocalAlgebra::ConstantOn(c) => h.constant_on(&c),
            })
        }
    }
}

fn poly_in<T: Real>(cp: &CrossedProduct<T>, b: &SubalgebraSpec, a: &GenPoly<T>) -> Result<bool> {
    cp.check(a)?;
    if a.degrees().all(|k| k == 0) {
        return Ok(true);
    }
    if matches!(b, SubalgebraSpec::BaseCx) || !in_commutant(cp, a)? {
        return Ok(false);
    }
    match (b, cp.system()) {
        (SubalgebraSpec::FullCommutant, _) => Ok(true),
        (SubalgebraSpec::EjIntp { u1, .. }, DynSystem::Finite(fs)) => {
            let Region::Indices(u1) = u1 else { return Ok(false) };
            let per = fs.periods();
            Ok(a.terms().filter(|(k, _)| *k != 0).all(|(k, f)| {
                let CoefficientFunction::Discrete(v) = f else { return false };
                v.iter().enumerate().all(|(x, c)| {
                    c.norm() <= T::tau_zero() || (u1.contains(&x) && k.rem_euclid(per[x] as i64) == 0)
                })
            }))
        }
        (SubalgebraSpec::EjIntp { u1, .. }, DynSystem::RationalRotation { q, .. }) => {
            let full = matches!(u1, Region::Arcs(a) if a.covers_circle());
            Ok(full && a.degrees().all(|k| k.rem_euclid(*q as i64) == 0))
        }
        (SubalgebraSpec::Intp { x0 }, _) => {
            let x = Point::Circle(T::lit(turn_to_f64(*x0)));
            Ok(a.terms().filter(|(k, _)| *k != 0).all(|(_, f)| {
                f.eval(x).norm().as_f64() <= EQ_TOL * (1.0 + f.sup_bound().as_f64())
            }))
        }
        (SubalgebraSpec::IsolB1 { base, .. } | SubalgebraSpec::IsolB2 { base, .. }, DynSystem::Finite(fs)) => {
            let m = orbit_symbolic(fs, *base, a)?;
            let d = m.diagonal();
            let scalar = d.windows(2).all(|w| (&w[0] - &w[1]).is_zero(T::tau_zero()));
            if !scalar {
                return Ok(false);
            }
            let h = CircleFunction::Laurent(d[0].clone());
            Ok(match b.local_algebra(fs, *base) {
                LocalAlgebra::EqualAt(x1, x2) => h.equal_at(x1, x2),
                LocalAlgebra::ConstantOn(c) => h.constant_on(&c),
                _ => true,
            })
        }
        _ => Ok(false),
    }
}

/// A nonzero element of the local algebra vanishing on `K`, if one exists.
pub fn local_witness<T: Real>(alg: &LocalAlgebra, k: &FiberZeros<T>) -> Option<CircleFunction<T>> {
    let one = || CircleFunction::Laurent(LaurentPoly::constant(Complex::new(T::one(), T::zero())));
    match (alg, k) {
        (_, FiberZeros::Whole) => None,
        (_, FiberZeros::Empty) => Some(one()),
        (LocalAlgebra::Scalars, _) => None,
        (LocalAlgebra::Full, FiberZeros::Points(p)) => Some(CircleFunction::Laurent(vanishing_laurent(p))),
        (LocalAlgebra::Full, FiberZeros::Arcs(a)) => Some(CircleFunction::Tent(a.gaps())),
        (LocalAlgebra::EqualAt(x1, x2), FiberZeros::Points(p)) => {
            let mut pts = p.clone();
            pts.push(unit(T::lit(turn_to_f64(*x1))));
            pts.push(unit(T::lit(turn_to_f64(*x2))));
            Some(CircleFunction::Laurent(vanishing_laurent(&pts)))
        }
        (LocalAlgebra::EqualAt(x1, x2), FiberZeros::Arcs(a)) => {
            Some(CircleFunction::Tent(a.gaps().iter().flat_map(|g| g.split_at(&[*x1, *x2])).collect()))
        }
        (LocalAlgebra::ConstantOn(c), k) => {
            if !k.meets(c) {
                let (zero_arcs, zero_points) = match k {
                    FiberZeros::Arcs(a) => (a.clone(), Vec::new()),
                    _ => (ArcSet::empty(), k.point_turns()),
                };
                return Some(CircleFunction::Urysohn { one_on: c.clone(), zero_arcs, zero_points });
            }
            let dead = match k {
                FiberZeros::Arcs(a) => c.union(a),
                _ => c.clone(),
            };
            let cuts: Vec<Turn> = k
                .point_turns()
                .iter()
                .filter_map(|&x| crate::arcs::turn_from_f64((x * 1e9).round() / 1e9).ok())
                .collect();
            let arcs: Vec<OpenArc> = dead.gaps().iter().flat_map(|g| g.split_at(&cuts)).collect();
            (!arcs.is_empty()).then_some(CircleFunction::Tent(arcs))
        }
    }
}
