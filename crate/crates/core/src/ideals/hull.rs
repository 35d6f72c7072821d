//! Closed ideals through their hulls: the representation parameters on which
//! every element of the ideal vanishes.
//!
//! On a finite system `C*(Σ) ≅ ⊕_orbits C(𝕋, M_p)`, so a closed ideal is
//! determined by one closed set `K ⊆ 𝕋` per orbit, and `b` lies in it iff
//! `π_{y,t}(b) = 0` for every `t ∈ K`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use serde::Serialize;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly};
use crate::arcs::{turn_to_f64, ArcSet, Turn};
use crate::dynsys::{DynSystem, FiniteSystem, Point};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::poly_roots;
use crate::reps::{orbit_symbolic, rep_periodic, SampleGrid};
use crate::scalar::{cone, czero, unit, Real};

use super::subalgebra::Region;

/// Residual below which a polynomial counts as vanishing at a root.
const ROOT_RESIDUAL: f64 = 1e-8;
/// Distance from the unit circle accepted for roots.
const ROOT_RADIUS: f64 = 1e-6;

/// A closed ideal of `C*(Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum IdealSpec<T> {
    /// The closed ideal generated by finitely many generalized polynomials.
    Generated(Vec<GenPoly<T>>),
    /// Finite systems: the elements vanishing on `K` over the orbit with the
    /// given base point. Every orbit must be listed.
    Hull(BTreeMap<usize, ArcSet>),
    /// The closed ideal generated by `f − f δⁿ` with `f ≥ 0` positive exactly
    /// on the interior of an invariant region inside `Per^n(σ)`.
    BumpShift { n: i64, support: Region },
}

impl<T: Real> IdealSpec<T> {
    /// Rewrites bump generators on finite systems as indicator polynomials.
    pub fn normalized(&self, cp: &CrossedProduct<T>) -> Result<Self> {
        match (self, cp.system()) {
            (IdealSpec::BumpShift { n, support: Region::Indices(s) }, DynSystem::Finite(fs)) => {
                let f = CoefficientFunction::indicator(fs.len(), s.iter().copied());
                let g = cp.func(f.clone()).sub(&GenPoly::monomial(*n, f))?;
                Ok(IdealSpec::Generated(vec![g]))
            }
            _ => Ok(self.clone()),
        }
    }

    pub fn validate(&self, cp: &CrossedProduct<T>) -> Result<()> {
        match self {
            IdealSpec::Generated(gens) => {
                if gens.is_empty() {
                    return Err(Error::Precondition("an ideal needs at least one generator".into()));
                }
                for g in gens {
                    cp.check(g)?;
                }
            }
            IdealSpec::Hull(fibers) => {
                let fs = cp.system().require_finite("hull ideal")?;
                let bases: BTreeSet<usize> = fs.orbits().iter().map(|o| o.base()).collect();
                let keys: BTreeSet<usize> = fibers.keys().copied().collect();
                if bases != keys {
                    return Err(Error::Precondition("hull must list every orbit by its base point".into()));
                }
            }
            IdealSpec::BumpShift { n, support } => {
                if *n <= 0 {
                    return Err(Error::Precondition("shift degree must be positive".into()));
                }
                support.validate(cp.system())?;
                if !support.is_invariant(cp.system()) {
                    return Err(Error::Hypothesis("generator support is not invariant".into()));
                }
                if !support.within_per(cp.system(), *n) {
                    return Err(Error::Hypothesis(format!("generator support is not inside Per^{n}")));
                }
            }
        }
        Ok(())
    }
}

/// Zero set of a family of matrix-valued Laurent polynomials on `𝕋`.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberZeros<T> {
    Empty,
    Whole,
    Points(Vec<Complex<T>>),
    Arcs(ArcSet),
}

impl<T: Real> FiberZeros<T> {
    pub fn from_arcs(k: &ArcSet) -> Self {
        if k.is_empty() {
            FiberZeros::Empty
        } else if k.covers_circle() {
            FiberZeros::Whole
        } else {
            FiberZeros::Arcs(k.clone())
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, FiberZeros::Whole)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FiberZeros::Empty)
    }

    /// Point turns of a finite zero set.
    pub fn point_turns(&self) -> Vec<f64> {
        match self {
            FiberZeros::Points(p) => p
                .iter()
                .map(|z| {
                    let x = z.im.as_f64().atan2(z.re.as_f64()) / std::f64::consts::TAU;
                    x - x.floor()
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn contains_turn(&self, x: f64) -> bool {
        match self {
            FiberZeros::Empty => false,
            FiberZeros::Whole => true,
            FiberZeros::Points(_) => self.point_turns().iter().any(|&p| {
                let d = (p - x).abs();
                d.min(1.0 - d) <= 1e-9
            }),
            FiberZeros::Arcs(a) => a.contains_f64(x, 1e-12),
        }
    }

    /// Whether the zero set meets a closed arc set.
    pub fn meets(&self, c: &ArcSet) -> bool {
        match self {
            FiberZeros::Empty => false,
            FiberZeros::Whole => !c.is_empty(),
            FiberZeros::Points(_) => self.point_turns().iter().any(|&p| c.contains_f64(p, 1e-9)),
            FiberZeros::Arcs(a) => !a.intersection(c).is_empty(),
        }
    }
}

impl<T: Real> Serialize for FiberZeros<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        match self {
            FiberZeros::Empty => m.serialize_entry("empty", &true)?,
            FiberZeros::Whole => m.serialize_entry("whole", &true)?,
            FiberZeros::Points(_) => m.serialize_entry("points", &self.point_turns())?,
            FiberZeros::Arcs(a) => m.serialize_entry("arcs", &a.to_f64_pairs())?,
        }
        m.end()
    }
}

/// Common zeros on the unit circle of a family of Laurent polynomials.
pub fn common_circle_zeros<T: Real>(entries: &[LaurentPoly<T>]) -> FiberZeros<T> {
    let nonzero: Vec<&LaurentPoly<T>> = entries.iter().filter(|e| !e.is_zero(T::tau_zero())).collect();
    let Some(pivot) = nonzero
        .iter()
        .min_by_key(|e| e.max_degree().unwrap_or(0) - e.min_degree().unwrap_or(0))
        .copied()
    else {
        return FiberZeros::Whole;
    };
    let lo = pivot.min_degree().unwrap_or(0);
    let hi = pivot.max_degree().unwrap_or(0);
    if lo == hi {
        return FiberZeros::Empty;
    }
    let coeffs: Vec<Complex<T>> = (lo..=hi).map(|k| pivot.coeff(k)).collect();
    let mut found: Vec<Complex<T>> = Vec::new();
    for r in poly_roots(&coeffs) {
        if (r.norm() - T::one()).abs().as_f64() > ROOT_RADIUS {
            continue;
        }
        let z = r / r.norm();
        let vanishes = nonzero.iter().all(|e| {
            let scale = T::one() + e.l1();
            (e.eval(z).norm() / scale).as_f64() <= ROOT_RESIDUAL
        });
        if vanishes && !found.iter().any(|w| (*w - z).norm().as_f64() < 1e-7) {
            found.push(z);
        }
    }
    if found.is_empty() {
        FiberZeros::Empty
    } else {
        found.sort_by(|a, b| turn_of(*a).total_cmp(&turn_of(*b)));
        FiberZeros::Points(found)
    }
}

fn turn_of<T: Real>(z: Complex<T>) -> f64 {
    let x = z.im.as_f64().atan2(z.re.as_f64()) / std::f64::consts::TAU;
    x - x.floor()
}

/// Zero set over one orbit of a finite system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitFiber<T: Real> {
    pub base: usize,
    pub period: usize,
    pub zeros: FiberZeros<T>,
}

/// The hull of a closed ideal.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingSet<T: Real> {
    /// Exact per-orbit description on finite systems.
    Orbits(Vec<OrbitFiber<T>>),
    /// Rational rotations: sampled `(y, t)` parameters, both in turns, on a
    /// transversal `y` grid.
    Sampled { y_points: usize, t_points: usize, zeros: Vec<(T, T)> },
    /// Rational rotations, `f − f δⁿ` with `f` positive on `U`: every `t` off
    /// `U`, and `t^{n/q} = 1` over `U`.
    Shift { n: i64, q: u64, support: ArcSet },
}

impl<T: Real> VanishingSet<T> {
    /// Everything vanishes: the ideal is zero.
    pub fn is_improper(&self) -> bool {
        match self {
            VanishingSet::Orbits(o) => o.iter().all(|f| f.zeros.is_whole()),
            VanishingSet::Sampled { y_points, t_points, zeros } => zeros.len() == y_points * t_points,
            VanishingSet::Shift { support, .. } => support.is_empty() || !support.has_interior(),
        }
    }

    /// Nothing vanishes: the ideal is the whole algebra.
    pub fn is_empty(&self) -> bool {
        match self {
            VanishingSet::Orbits(o) => o.iter().all(|f| f.zeros.is_empty()),
            VanishingSet::Sampled { zeros, .. } => zeros.is_empty(),
            VanishingSet::Shift { .. } => false,
        }
    }

    pub fn fiber(&self, base: usize) -> Option<&FiberZeros<T>> {
        match self {
            VanishingSet::Orbits(o) => o.iter().find(|f| f.base == base).map(|f| &f.zeros),
            _ => None,
        }
    }
}

fn orbit_entries<T: Real>(fs: &FiniteSystem, base: usize, gens: &[GenPoly<T>]) -> Result<Vec<LaurentPoly<T>>> {
    let mut out = Vec::new();
    for g in gens {
        let m = orbit_symbolic(fs, base, g)?;
        for i in 0..m.size() {
            for j in 0..m.size() {
                out.push(m.entry(i, j).clone());
            }
        }
    }
    Ok(out)
}

pub fn vanishing_set<T: Real>(cp: &CrossedProduct<T>, ideal: &IdealSpec<T>, grid: &SampleGrid) -> Result<VanishingSet<T>> {
    ideal.validate(cp)?;
    let ideal = ideal.normalized(cp)?;
    match (cp.system(), &ideal) {
        (DynSystem::Finite(fs), IdealSpec::Generated(gens)) => {
            let mut out = Vec::new();
            for o in fs.orbits() {
                let zeros = common_circle_zeros(&orbit_entries(fs, o.base(), gens)?);
                out.push(OrbitFiber { base: o.base(), period: o.period, zeros });
            }
            Ok(VanishingSet::Orbits(out))
        }
        (DynSystem::Finite(fs), IdealSpec::Hull(k)) => Ok(VanishingSet::Orbits(
            fs.orbits()
                .iter()
                .map(|o| OrbitFiber { base: o.base(), period: o.period, zeros: FiberZeros::from_arcs(&k[&o.base()]) })
                .collect(),
        )),
        (DynSystem::RationalRotation { q, .. }, IdealSpec::Generated(gens)) => {
            let tol = T::tau_zero().max(T::lit(1e-12));
            let mut zeros = Vec::new();
            let span = T::one() / T::lit(*q as f64);
            for iy in 0..grid.y_points {
                let y = span * T::from_usize(iy) / T::from_usize(grid.y_points);
                for it in 0..grid.t_points {
                    let s = T::from_usize(it) / T::from_usize(grid.t_points);
                    let mut vanish = true;
                    for g in gens {
                        if rep_periodic(cp, Point::Circle(y), unit(s), g)?.max_abs() > tol {
                            vanish = false;
                            break;
                        }
                    }
                    if vanish {
                        zeros.push((y, s));
                    }
                }
            }
            Ok(VanishingSet::Sampled { y_points: grid.y_points, t_points: grid.t_points, zeros })
        }
        (DynSystem::RationalRotation { q, .. }, IdealSpec::BumpShift { n, support: Region::Arcs(u) }) => {
            Ok(VanishingSet::Shift { n: *n, q: *q, support: u.clone() })
        }
        (DynSystem::IrrationalRotation { .. }, _) => Err(Error::UnsupportedKind {
            kind: "irrational rotation",
            op: "vanishing set (the crossed product is simple)",
        }),
        _ => Err(Error::Precondition("ideal description does not match the system".into())),
    }
}

/// Outcome of a membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub contained: bool,
    /// Exact for finite systems; otherwise decided on sampled parameters.
    pub exact: bool,
    pub checked_points: usize,
}

/// Whether `b` lies in the closed ideal.
pub fn ideal_contains<T: Real>(
    cp: &CrossedProduct<T>,
    ideal: &IdealSpec<T>,
    b: &GenPoly<T>,
    grid: &SampleGrid,
) -> Result<Membership> {
    cp.check(b)?;
    let hull = vanishing_set(cp, ideal, grid)?;
    contains_in_hull(cp, &hull, b, grid)
}

pub(crate) fn contains_in_hull<T: Real>(
    cp: &CrossedProduct<T>,
    hull: &VanishingSet<T>,
    b: &GenPoly<T>,
    grid: &SampleGrid,
) -> Result<Membership> {
    let tol = T::lit(ROOT_RESIDUAL);
    let scale = T::one() + b.l1_bound();
    match hull {
        VanishingSet::Orbits(fibers) => {
            let fs = cp.system().require_finite("hull membership")?;
            let mut checked = 0;
            for f in fibers {
                let m = orbit_symbolic(fs, f.base, b)?;
                let ok = match &f.zeros {
                    FiberZeros::Empty => true,
                    FiberZeros::Whole => m.is_zero(T::tau_zero()),
                    FiberZeros::Points(pts) => {
                        checked += pts.len();
                        pts.iter().all(|&z| m.eval(z).max_abs() <= tol * scale)
                    }
                    FiberZeros::Arcs(k) => {
                        if k.has_interior() {
                            m.is_zero(T::tau_zero())
                        } else {
                            k.intervals().iter().all(|&(a, _)| {
                                checked += 1;
                                m.eval(unit(T::lit(turn_to_f64(a)))).max_abs() <= tol * scale
                            })
                        }
                    }
                };
                if !ok {
                    return Ok(Membership { contained: false, exact: true, checked_points: checked });
                }
            }
            Ok(Membership { contained: true, exact: true, checked_points: checked })
        }
        VanishingSet::Sampled { zeros, .. } => {
            for (i, &(y, s)) in zeros.iter().enumerate() {
                if rep_periodic(cp, Point::Circle(y), unit(s), b)?.max_abs() > tol * scale {
                    return Ok(Membership { contained: false, exact: false, checked_points: i + 1 });
                }
            }
            Ok(Membership { contained: true, exact: false, checked_points: zeros.len() })
        }
        VanishingSet::Shift { n, q, support } => {
            let span = T::one() / T::lit(*q as f64);
            let order = (*n / *q as i64).max(1) as usize;
            let mut checked = 0;
            for iy in 0..grid.y_points {
                let y = span * T::from_usize(iy) / T::from_usize(grid.y_points);
                let inside = support.gaps().iter().all(|g| !g.contains(approx_turn(y)))
                    && !on_boundary(support, y);
                let ts: Vec<Complex<T>> = if inside {
                    (0..order).map(|j| unit(T::from_usize(j) / T::from_usize(order))).collect()
                } else {
                    grid.t_values()
                };
                for t in ts {
                    checked += 1;
                    if rep_periodic(cp, Point::Circle(y), t, b)?.max_abs() > tol * scale {
                        return Ok(Membership { contained: false, exact: false, checked_points: checked });
                    }
                }
            }
            Ok(Membership { contained: true, exact: false, checked_points: checked })
        }
    }
}

fn approx_turn<T: Real>(y: T) -> Turn {
    let scale = 1i64 << 40;
    Turn::new((y.as_f64() * scale as f64).round() as i64, scale)
}

fn on_boundary<T: Real>(u: &ArcSet, y: T) -> bool {
    u.intervals().iter().any(|&(a, b)| {
        let y = y.as_f64();
        (turn_to_f64(a) - y).abs() < 1e-12 || (turn_to_f64(b) - y).abs() < 1e-12
    })
}

/// `Π (z − z_i)` over the given unit-circle points.
pub fn vanishing_laurent<T: Real>(points: &[Complex<T>]) -> LaurentPoly<T> {
    points.iter().fold(LaurentPoly::constant(cone()), |acc, &z| {
        let lin = LaurentPoly::from_coeffs([(1, cone()), (0, -z)]);
        &acc * &lin
    })
}

/// `Σ_k c_k 1_O δ^{kp}`: the element acting as `diag(h, …, h)` on the orbit
/// `O` of `base` and as zero elsewhere.
pub fn orbit_diag_poly<T: Real>(fs: &FiniteSystem, base: usize, h: &LaurentPoly<T>) -> Result<GenPoly<T>> {
    let p = fs.periods()[base] as i64;
    let orbit: Vec<usize> = (0..p).map(|i| fs.apply(base, i)).collect();
    GenPoly::from_terms(
        crate::algebra::Model::Discrete(fs.len()),
        h.terms().map(|(k, c)| {
            let mut v = vec![czero(); fs.len()];
            for &x in &orbit {
                v[x] = c;
            }
            (k * p, CoefficientFunction::Discrete(v))
        }),
    )
}
