//! Intersections `B ∩ I`, the spectral criterion, functional-calculus
//! witnesses in the Pedersen ideal, and the character-separation replay.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly, Model};
use crate::arcs::{turn_to_f64, ArcSet, Turn};
use crate::commutant::{commutant_part, SpectrumChar};
use crate::dynsys::{DynSystem, FiniteSystem, Point};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::reps::{orbit_symbolic, single_orbit_preimage, SampleGrid};
use crate::scalar::{cone, czero, unit, Real};

use super::hull::{contains_in_hull, ideal_contains, orbit_diag_poly, vanishing_set, IdealSpec, VanishingSet};
use super::subalgebra::{local_witness, subalgebra_contains, CircleFunction, Element, LocalAlgebra, Region, SubalgebraSpec};

/// Result of searching `B ∩ I` for a nonzero element.
#[derive(Debug, Clone, PartialEq)]
pub enum IntersectionOutcome<T> {
    Witness { element: Element<T>, construction: String, norm_lower: T },
    CertifiedEmpty { argument: String },
    NoneFound { reason: String },
}

impl<T: Real> IntersectionOutcome<T> {
    pub fn verdict(&self) -> &'static str {
        match self {
            IntersectionOutcome::Witness { .. } => "witness",
            IntersectionOutcome::CertifiedEmpty { .. } => "certified-empty",
            IntersectionOutcome::NoneFound { .. } => "none-found",
        }
    }

    pub fn is_witness(&self) -> bool {
        matches!(self, IntersectionOutcome::Witness { .. })
    }

    pub fn is_certified_empty(&self) -> bool {
        matches!(self, IntersectionOutcome::CertifiedEmpty { .. })
    }
}

impl<T: Real> Serialize for IntersectionOutcome<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("verdict", self.verdict())?;
        match self {
            IntersectionOutcome::Witness { element, construction, norm_lower } => {
                m.serialize_entry("element", &element.describe())?;
                m.serialize_entry("construction", construction)?;
                m.serialize_entry("norm_lower", &norm_lower.as_f64())?;
            }
            IntersectionOutcome::CertifiedEmpty { argument } => m.serialize_entry("argument", argument)?,
            IntersectionOutcome::NoneFound { reason } => m.serialize_entry("reason", reason)?,
        }
        m.end()
    }
}

/// `(1/K) Σ_m w_m a w_m*` over the unitaries `w_m = e^{2πimx/N}` (finite,
/// `K = N`) or `w_m = e^{2πimx}` (rotation by `p/q`, `K = q`).
pub fn averaging_projection<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<GenPoly<T>> {
    cp.check(a)?;
    let ws: Vec<CoefficientFunction<T>> = match cp.system() {
        DynSystem::Finite(fs) => {
            let n = fs.len();
            (0..n)
                .map(|m| {
                    CoefficientFunction::Discrete(
                        (0..n).map(|x| unit(T::from_usize(m * x % n) / T::from_usize(n))).collect(),
                    )
                })
                .collect()
        }
        DynSystem::RationalRotation { q, .. } => (0..*q as i64)
            .map(|m| CoefficientFunction::Trig(LaurentPoly::monomial(m, cone())))
            .collect(),
        DynSystem::IrrationalRotation { .. } => {
            return Err(Error::UnsupportedKind { kind: "irrational rotation", op: "finite averaging" })
        }
    };
    let k = T::from_usize(ws.len());
    let mut acc = GenPoly::zero(cp.model());
    for w in &ws {
        let wa = cp.mul(&cp.func(w.clone()), a)?;
        acc = acc.add(&cp.mul(&wa, &cp.func(w.conj()))?)?;
    }
    Ok(acc.scale_real(T::one() / k))
}

/// A nonzero element of `C(X)′ ∩ I` built from the generators: `g δ^{−k}`
/// averaged onto the commutant, with `g(k)` the largest coefficient.
pub fn averaged_ideal_element<T: Real>(cp: &CrossedProduct<T>, gens: &[GenPoly<T>]) -> Result<Option<GenPoly<T>>> {
    let Some(g) = gens.iter().filter(|g| !g.is_zero()).max_by(|a, b| a.max_abs_coeff().total_cmp_f(&b.max_abs_coeff()))
    else {
        return Ok(None);
    };
    let (k, _) = g
        .terms()
        .max_by(|a, b| a.1.max_abs_coeff().total_cmp_f(&b.1.max_abs_coeff()))
        .expect("nonzero generator");
    let h = cp.mul(g, &cp.delta(-k))?;
    let w = commutant_part(cp, &h)?;
    Ok((!w.is_zero()).then_some(w))
}

trait TotalCmp {
    fn total_cmp_f(&self, other: &Self) -> std::cmp::Ordering;
}

impl<T: Real> TotalCmp for T {
    fn total_cmp_f(&self, other: &Self) -> std::cmp::Ordering {
        self.as_f64().total_cmp(&other.as_f64())
    }
}

/// Search parameters for [`intersect_with_subalgebra`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectOptions {
    pub grid: SampleGrid,
}

impl Default for IntersectOptions {
    fn default() -> Self {
        Self { grid: SampleGrid::new(64, 16) }
    }
}

pub fn intersect_with_subalgebra<T: Real>(
    cp: &CrossedProduct<T>,
    ideal: &IdealSpec<T>,
    b: &SubalgebraSpec,
    opts: &IntersectOptions,
) -> Result<IntersectionOutcome<T>> {
    b.validate(cp.system())?;
    ideal.validate(cp)?;
    let ideal = ideal.normalized(cp)?;
    match cp.system() {
        DynSystem::Finite(fs) => finite_intersect(cp, fs, &ideal, b, opts),
        DynSystem::RationalRotation { .. } => rotation_intersect(cp, &ideal, b),
        DynSystem::IrrationalRotation { .. } => Err(Error::UnsupportedKind {
            kind: "irrational rotation",
            op: "ideal intersection (the crossed product is simple)",
        }),
    }
}

fn witness<T: Real>(cp: &CrossedProduct<T>, element: Element<T>, construction: &str) -> Result<IntersectionOutcome<T>> {
    let norm_lower = element.norm_lower(cp)?;
    Ok(IntersectionOutcome::Witness { element, construction: construction.into(), norm_lower })
}

fn local_name(alg: &LocalAlgebra) -> String {
    match alg {
        LocalAlgebra::Full => "all diagonals".into(),
        LocalAlgebra::Scalars => "constant diagonals".into(),
        LocalAlgebra::EqualAt(x1, x2) => format!("diag(f) with f({x1}) = f({x2})"),
        LocalAlgebra::ConstantOn(c) => format!("diag(f) with f constant on {c}"),
    }
}

fn finite_intersect<T: Real>(
    cp: &CrossedProduct<T>,
    fs: &FiniteSystem,
    ideal: &IdealSpec<T>,
    b: &SubalgebraSpec,
    opts: &IntersectOptions,
) -> Result<IntersectionOutcome<T>> {
    let hull = vanishing_set(cp, ideal, &opts.grid)?;
    if hull.is_improper() {
        return Err(Error::ImproperIdeal("every generator vanishes identically".into()));
    }
    let VanishingSet::Orbits(fibers) = &hull else { unreachable!("finite hulls are orbitwise") };
    let mut local = Vec::new();
    for f in fibers {
        let alg = b.local_algebra(fs, f.base);
        let w = local_witness(&alg, &f.zeros);
        local.push((f, alg, w));
    }
    if local.iter().all(|(_, _, w)| w.is_none()) {
        let parts: Vec<String> = local
            .iter()
            .map(|(f, alg, _)| {
                let why = match (&f.zeros, alg) {
                    (z, _) if z.is_whole() => "the ideal vanishes on the whole fiber".to_string(),
                    (_, LocalAlgebra::Scalars) => "a nonzero constant cannot vanish on the nonempty hull".to_string(),
                    (_, LocalAlgebra::ConstantOn(_)) => {
                        "f must vanish on the hull, which meets C₁, so f ≡ 0 on C₁ ∪ hull = 𝕋".to_string()
                    }
                    _ => "no nonzero function of the local algebra vanishes on the hull".to_string(),
                };
                format!("orbit of {} (period {}): local algebra {}; {why}", f.base, f.period, local_name(alg))
            })
            .collect();
        return Ok(IntersectionOutcome::CertifiedEmpty { argument: parts.join("; ") });
    }
    if let IdealSpec::Generated(gens) = ideal {
        if let Some((w, how)) = guided_candidate(cp, fs, gens, b)? {
            let el = Element::Poly(w.clone());
            if !w.is_zero()
                && subalgebra_contains(cp, b, &el)?
                && contains_in_hull(cp, &hull, &w, &opts.grid)?.contained
            {
                return witness(cp, el, how);
            }
        }
    }
    let (f, _, h) = local.into_iter().find(|(_, _, w)| w.is_some()).expect("some orbit admits a witness");
    let h = h.expect("checked");
    let el = match &h {
        CircleFunction::Laurent(l) => Element::Poly(orbit_diag_poly(fs, f.base, l)?),
        _ => Element::OrbitDiag { base: f.base, h },
    };
    witness(cp, el, "orbitwise: a function of the local algebra vanishing on the hull of that orbit")
}

/// The constructions of the intersection proofs, applied to the generators.
fn guided_candidate<T: Real>(
    cp: &CrossedProduct<T>,
    fs: &FiniteSystem,
    gens: &[GenPoly<T>],
    b: &SubalgebraSpec,
) -> Result<Option<(GenPoly<T>, &'static str)>> {
    let Some(w) = averaged_ideal_element(cp, gens)? else { return Ok(None) };
    Ok(match b {
        SubalgebraSpec::FullCommutant => Some((w, "averaging g·δ^{-k} over multiplication unitaries")),
        SubalgebraSpec::BaseCx => {
            let flat = w.degrees().all(|k| k == 0);
            flat.then_some((w, "averaged element already lies in C(X)"))
        }
        SubalgebraSpec::EjIntp { u1: Region::Indices(u1), .. } => {
            let cut = w.left_mul_fn(&CoefficientFunction::indicator(fs.len(), u1.iter().copied()))?;
            (!cut.is_zero()).then_some((cut, "averaged element cut down by the indicator of U₁"))
        }
        SubalgebraSpec::IsolB1 { base, x1, x2 } => {
            let orbit = fs.orbits().into_iter().find(|o| o.points.contains(base)).expect("validated");
            let m = orbit_symbolic(fs, orbit.base(), &w)?;
            if m.is_zero(T::tau_zero()) {
                Some((w, "averaged element vanishes on the chosen orbit"))
            } else {
                let j = (0..m.size()).find(|&j| !m.entry(j, j).is_zero(T::tau_zero())).expect("diagonal nonzero");
                let mut d = GenPoly::zero(cp.model());
                for i in 0..m.size() {
                    let uij: GenPoly<T> = single_orbit_preimage(fs, fs.apply(orbit.base(), i as i64), fs.apply(orbit.base(), j as i64), 0);
                    let uji: GenPoly<T> = single_orbit_preimage(fs, fs.apply(orbit.base(), j as i64), fs.apply(orbit.base(), i as i64), 0);
                    d = d.add(&cp.mul(&cp.mul(&uij, &w)?, &uji)?)?;
                }
                let zs = [unit(T::lit(turn_to_f64(*x1))), unit(T::lit(turn_to_f64(*x2)))];
                let mpoly = orbit_diag_poly(fs, orbit.base(), &super::hull::vanishing_laurent(&zs))?;
                Some((cp.mul(&mpoly, &d)?, "matrix units spread one diagonal entry, then diag(m) with m(x₁) = m(x₂) = 0"))
            }
        }
        SubalgebraSpec::IsolB2 { base, .. } => {
            let m = orbit_symbolic(fs, *base, &w)?;
            m.is_zero(T::tau_zero()).then_some((w, "averaged element vanishes on the chosen orbit"))
        }
        _ => None,
    })
}

fn rotation_intersect<T: Real>(
    cp: &CrossedProduct<T>,
    ideal: &IdealSpec<T>,
    b: &SubalgebraSpec,
) -> Result<IntersectionOutcome<T>> {
    match ideal {
        IdealSpec::Generated(gens) => {
            if gens.iter().all(GenPoly::is_zero) {
                return Err(Error::ImproperIdeal("every generator vanishes identically".into()));
            }
            if matches!(b, SubalgebraSpec::BaseCx) && gens.iter().all(|g| vanishes_on_t_one(cp, g)) {
                return Ok(IntersectionOutcome::CertifiedEmpty {
                    argument: "for every generator and residue r mod q, Σ_k g(kq + r) = 0, so π_{y,1}(g) = 0 for all y; \
                               the hull contains X × {1} and an element of C(X) in I vanishes everywhere"
                        .into(),
                });
            }
            let Some(w) = averaged_ideal_element(cp, gens)? else {
                return Ok(IntersectionOutcome::NoneFound { reason: "averaging produced zero".into() });
            };
            match b {
                SubalgebraSpec::FullCommutant => witness(cp, Element::Poly(w), "averaging g·δ^{-k} over e^{2πimx}"),
                SubalgebraSpec::Intp { x0 } => {
                    if subalgebra_contains(cp, b, &Element::Poly(w.clone()))? {
                        return witness(cp, Element::Poly(w), "averaged element already vanishes at x₀");
                    }
                    let x0 = T::lit(turn_to_f64(*x0));
                    let half = Complex::new(T::lit(-0.5), T::zero());
                    let g = CoefficientFunction::Trig(LaurentPoly::from_coeffs([
                        (0, cone()),
                        (1, half * unit(-x0)),
                        (-1, half * unit(x0)),
                    ]));
                    let gw = w.left_mul_fn(&g)?;
                    if !gw.is_zero() && subalgebra_contains(cp, b, &Element::Poly(gw.clone()))? {
                        witness(cp, Element::Poly(gw), "averaged element times 1 − cos 2π(x − x₀)")
                    } else {
                        Ok(IntersectionOutcome::NoneFound { reason: "cutoff product left B".into() })
                    }
                }
                _ if w.degrees().all(|k| k == 0) => witness(cp, Element::Poly(w), "averaged element lies in C(X)"),
                _ => Ok(IntersectionOutcome::NoneFound {
                    reason: "no polynomial element of B ∩ I produced by the averaging construction".into(),
                }),
            }
        }
        IdealSpec::BumpShift { n, support } => {
            let Region::Arcs(u2) = support else { unreachable!("validated") };
            if support.is_empty() {
                return Err(Error::ImproperIdeal("generator support has empty interior".into()));
            }
            let generator = Element::Bump { support: support.clone(), coeffs: vec![(0, T::one()), (*n, -T::one())] };
            let t_one = format!(
                "the generator f − fδ^{n} vanishes at every (y, 1) because δ^{n} acts as t^{n}/q·1 there; \
                 so the hull contains X × {{1}} and an element of C(X) in I vanishes everywhere"
            );
            match b {
                SubalgebraSpec::FullCommutant => witness(cp, generator, "the generator lies in the commutant"),
                SubalgebraSpec::BaseCx => Ok(IntersectionOutcome::CertifiedEmpty { argument: t_one }),
                SubalgebraSpec::EjIntp { u1, .. } => {
                    if u1.interiors_disjoint(support) {
                        Ok(IntersectionOutcome::CertifiedEmpty {
                            argument: format!(
                                "b ∈ B has b(k) supported in U₁ = {} for k ≠ 0; off U₂ = {u2} the hull contains every t, \
                                 so b(k) = 0 on U₁ for all k; the remaining b(0) ∈ C(X): {t_one}",
                                match u1 {
                                    Region::Arcs(a) => a.to_string(),
                                    Region::Indices(s) => format!("{s:?}"),
                                }
                            ),
                        })
                    } else {
                        Ok(IntersectionOutcome::NoneFound { reason: "U₁ and U₂ overlap".into() })
                    }
                }
                SubalgebraSpec::Intp { x0 } if !u2.interior_contains(*x0) => {
                    witness(cp, generator, "the generator's coefficients vanish at x₀")
                }
                _ => Ok(IntersectionOutcome::NoneFound { reason: "no construction for this pair".into() }),
            }
        }
        IdealSpec::Hull(_) => Err(Error::Precondition("hull ideals need a finite system".into())),
    }
}

/// `π_{y,1}(g) = 0` for every `y` on a rational rotation: `δ^q` acts as the
/// identity at `t = 1`, so each residue class of degrees must sum to zero.
fn vanishes_on_t_one<T: Real>(cp: &CrossedProduct<T>, g: &GenPoly<T>) -> bool {
    let DynSystem::RationalRotation { q, .. } = cp.system() else { return false };
    let q = *q as i64;
    let mut sums: BTreeMap<i64, CoefficientFunction<T>> = BTreeMap::new();
    for (n, f) in g.terms() {
        let r = n.rem_euclid(q);
        let next = match sums.get(&r) {
            Some(acc) => acc.add(f).expect("one model"),
            None => f.clone(),
        };
        sums.insert(r, next);
    }
    let tol = T::lit(1e-12) * (T::one() + g.l1_bound());
    sums.values().all(|f| f.is_zero(tol))
}

/// A closed `σ̃`-invariant set of characters of `C(X)′`.
#[derive(Debug, Clone, PartialEq)]
pub enum CharSubset {
    /// Finite systems: the `t`-set over each listed point; unlisted orbits contribute nothing.
    Orbitwise(BTreeMap<usize, ArcSet>),
    /// Rational rotations: every `y` with the same `t`-set.
    Product(ArcSet),
}

/// Whether the restriction of `S` to `B`'s characters is a proper subset,
/// decided by the existence of a nonzero `b ∈ B` vanishing on `S`.
pub fn specint_check<T: Real>(cp: &CrossedProduct<T>, b: &SubalgebraSpec, s: &CharSubset) -> Result<bool> {
    b.validate(cp.system())?;
    match (s, cp.system()) {
        (CharSubset::Orbitwise(pieces), DynSystem::Finite(fs)) => {
            let mut per_orbit: BTreeMap<usize, ArcSet> = BTreeMap::new();
            for (&x, set) in pieces {
                if x >= fs.len() {
                    return Err(Error::Precondition(format!("point {x} is outside the system")));
                }
                let base = fs.orbits().into_iter().find(|o| o.points.contains(&x)).expect("in range").base();
                if let Some(prev) = per_orbit.get(&base) {
                    if prev != set {
                        return Err(Error::Precondition("the character set is not σ̃-invariant".into()));
                    }
                }
                per_orbit.insert(base, set.clone());
            }
            if per_orbit.values().all(ArcSet::is_empty) {
                return Err(Error::Precondition("S is empty; it must be the hull of a proper ideal".into()));
            }
            Ok(fs.orbits().iter().any(|o| {
                let k = per_orbit.get(&o.base()).cloned().unwrap_or_default();
                local_witness::<T>(&b.local_algebra(fs, o.base()), &super::hull::FiberZeros::from_arcs(&k)).is_some()
            }))
        }
        (CharSubset::Product(a), DynSystem::RationalRotation { .. }) => {
            if a.is_empty() {
                return Err(Error::Precondition("S is empty; it must be the hull of a proper ideal".into()));
            }
            Ok(match b {
                SubalgebraSpec::BaseCx => false,
                SubalgebraSpec::EjIntp { u1, .. } => !u1.is_empty() && !a.covers_circle(),
                _ => !a.covers_circle(),
            })
        }
        (_, DynSystem::IrrationalRotation { .. }) => Err(Error::UnsupportedKind {
            kind: "irrational rotation",
            op: "spectral intersection criterion",
        }),
        _ => Err(Error::Precondition("character set does not match the system".into())),
    }
}

/// Options for [`pedersen_witness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PedersenOptions {
    pub grid: SampleGrid,
    /// Divide `g` by its largest character value first.
    pub normalize: bool,
}

impl Default for PedersenOptions {
    fn default() -> Self {
        Self { grid: SampleGrid::new(64, 16), normalize: true }
    }
}

/// `f(g)` for the cutoff `f(s) = clamp(2s − 1, 0, 1)`, with the cofactor
/// `k(g)` such that `f(g) = g·k(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PedersenWitness<T> {
    pub element: GenPoly<T>,
    pub cofactor: GenPoly<T>,
    pub scale: T,
    pub peak_value: T,
    /// `max |γ(element) − f(γ(g))|` over the sampled characters.
    pub approximation_error: T,
    /// `max |γ(g·cofactor) − γ(element)|` over the sampled characters.
    pub factorization_defect: T,
    /// `max |γ(element)|` over sampled characters where `γ(g) = 0`.
    pub hull_residual: T,
    pub nodes: usize,
}

fn cutoff<T: Real>(s: T) -> T {
    (T::lit(2.0) * s - T::one()).max(T::zero()).min(T::one())
}

pub fn pedersen_witness<T: Real>(
    cp: &CrossedProduct<T>,
    b: &SubalgebraSpec,
    ideal: &IdealSpec<T>,
    g: &GenPoly<T>,
    opts: &PedersenOptions,
) -> Result<PedersenWitness<T>> {
    if g.is_zero() {
        return Err(Error::Precondition("g is zero".into()));
    }
    if !subalgebra_contains(cp, b, &Element::Poly(g.clone()))? {
        return Err(Error::Precondition("g is not in B".into()));
    }
    if !cp.positivity_check(g, &opts.grid)? {
        return Err(Error::Precondition("g is not positive".into()));
    }
    if !ideal_contains(cp, ideal, g, &opts.grid)?.contained {
        return Err(Error::Precondition("g is not in the closed ideal".into()));
    }
    let (chars, fibers) = char_lattice(cp, &opts.grid)?;
    let values: Vec<T> = chars.iter().map(|c| c.eval(g).re).collect();
    let top = values.iter().copied().fold(T::zero(), T::max);
    let scale = if opts.normalize { top } else { T::one() };
    if top <= T::zero() || top / scale <= T::lit(0.5) {
        return Err(Error::Precondition("all character values are at most 1/2; the cutoff annihilates g".into()));
    }
    let f_vals: Vec<T> = values.iter().map(|&v| cutoff(v / scale)).collect();
    let k_vals: Vec<T> = values
        .iter()
        .zip(&f_vals)
        .map(|(&v, &f)| if v > T::zero() { f / v } else { T::zero() })
        .collect();
    let element = synthesize(cp, &fibers, &f_vals, opts.grid.t_points)?;
    let cofactor = synthesize(cp, &fibers, &k_vals, opts.grid.t_points)?;
    let product = cp.mul(g, &cofactor)?;
    let mut approximation_error = T::zero();
    let mut factorization_defect = T::zero();
    let mut hull_residual = T::zero();
    let mut peak_value = T::zero();
    for (i, c) in chars.iter().enumerate() {
        let e = c.eval(&element);
        approximation_error = approximation_error.max((e - Complex::new(f_vals[i], T::zero())).norm());
        factorization_defect = factorization_defect.max((c.eval(&product) - e).norm());
        if values[i].abs() <= T::tau_zero() {
            hull_residual = hull_residual.max(e.norm());
        }
        if values[i] == top {
            peak_value = e.re;
        }
    }
    Ok(PedersenWitness {
        element,
        cofactor,
        scale,
        peak_value,
        approximation_error,
        factorization_defect,
        hull_residual,
        nodes: chars.len(),
    })
}

/// A fiber of the character lattice: a point of `X` with its period.
struct Fiber<T> {
    point: Point<T>,
    period: usize,
}

/// Characters `(y, t_j)` over every point of a finite system, or over an
/// equispaced grid of `q·Y` points of a rotation.
fn char_lattice<T: Real>(cp: &CrossedProduct<T>, grid: &SampleGrid) -> Result<(Vec<SpectrumChar<T>>, Vec<Fiber<T>>)> {
    let fibers: Vec<Fiber<T>> = match cp.system() {
        DynSystem::Finite(fs) => {
            let per = fs.periods();
            (0..fs.len()).map(|x| Fiber { point: Point::Index(x), period: per[x] }).collect()
        }
        DynSystem::RationalRotation { q, .. } => {
            let ny = grid.y_points * *q as usize;
            (0..ny)
                .map(|i| Fiber { point: Point::Circle(T::from_usize(i) / T::from_usize(ny)), period: *q as usize })
                .collect()
        }
        DynSystem::IrrationalRotation { .. } => {
            return Err(Error::UnsupportedKind { kind: "irrational rotation", op: "functional calculus on C(X)′" })
        }
    };
    let ts: Vec<Complex<T>> = grid.t_values();
    let chars = fibers
        .iter()
        .flat_map(|f| ts.iter().map(move |&t| SpectrumChar::periodic(f.point, t, f.period)))
        .collect();
    Ok((chars, fibers))
}

/// The commutant element whose characters interpolate `vals` on the lattice.
fn synthesize<T: Real>(cp: &CrossedProduct<T>, fibers: &[Fiber<T>], vals: &[T], m: usize) -> Result<GenPoly<T>> {
    let half = (m / 2) as i64;
    let lrange = -half..(m as i64 - half);
    let mut per_degree: BTreeMap<i64, Vec<Complex<T>>> = BTreeMap::new();
    let mf = T::from_usize(m);
    let coeff = |row: &[T], l: i64| {
        row.iter().enumerate().fold(czero::<T>(), |acc, (j, &v)| {
            acc + unit(-T::from_i64(l * j as i64) / mf) * v
        }) / mf
    };
    match cp.model() {
        Model::Discrete(n) => {
            for (x, f) in fibers.iter().enumerate() {
                let row = &vals[x * m..(x + 1) * m];
                for l in lrange.clone() {
                    let c = coeff(row, l);
                    if c.norm() > T::tau_zero() {
                        per_degree.entry(l * f.period as i64).or_insert_with(|| vec![czero(); n])[x] = c;
                    }
                }
            }
            GenPoly::from_terms(
                cp.model(),
                per_degree.into_iter().map(|(d, v)| (d, CoefficientFunction::Discrete(v))),
            )
        }
        Model::Trig => {
            let ny = fibers.len();
            let q = fibers.first().map_or(1, |f| f.period) as i64;
            let yhalf = (ny / 2) as i64;
            let mut terms = Vec::new();
            for l in lrange {
                let col: Vec<Complex<T>> = (0..ny).map(|i| coeff(&vals[i * m..(i + 1) * m], l)).collect();
                let mut lp = LaurentPoly::zero();
                for k in -yhalf..(ny as i64 - yhalf) {
                    let c = col.iter().enumerate().fold(czero::<T>(), |acc, (i, &v)| {
                        acc + v * unit(-T::from_i64(k * i as i64) / T::from_usize(ny))
                    }) / T::from_usize(ny);
                    if c.norm() > T::tau_zero() {
                        lp.add_term(k, c);
                    }
                }
                if !lp.is_zero(T::tau_zero()) {
                    terms.push((l * q, CoefficientFunction::Trig(lp)));
                }
            }
            GenPoly::from_terms(cp.model(), terms)
        }
    }
}

/// Replay of the character-separation argument: for `y` of period `l`, the
/// closed invariant set `S = X × {1}` restricts onto all of `X` for `B = C(X)`,
/// while `f δ^k` with `k = r·l` takes the value `s^r f(y) = i` at `γ(y, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReplay<T: Real> {
    pub k: i64,
    pub l: usize,
    pub r: i64,
    pub s_turns: T,
    pub value: [T; 2],
    pub value_error: T,
    /// `S` restricted to `C(X)` is all of `X` (no nonzero `f ∈ C(X)` vanishes on `S`).
    pub restriction_onto_base: bool,
    /// Every sampled character in `S` takes a real value on `f δ^k`.
    pub s_values_real: bool,
}

pub fn separation_replay<T: Real>(cp: &CrossedProduct<T>, grid: &SampleGrid) -> Result<SeparationReplay<T>> {
    let (y, l, f) = match cp.system() {
        DynSystem::Finite(fs) => {
            let o = fs.orbits().into_iter().next().expect("nonempty system");
            let ind = CoefficientFunction::indicator(fs.len(), o.points.iter().copied());
            (Point::Index(o.base()), o.period, ind)
        }
        DynSystem::RationalRotation { q, .. } => (Point::Circle(T::zero()), *q as usize, cp.one_fn()),
        DynSystem::IrrationalRotation { .. } => {
            return Err(Error::UnsupportedKind { kind: "irrational rotation", op: "separation replay (no periodic points)" })
        }
    };
    let r = 2i64;
    let k = r * l as i64;
    let s_turns = T::one() / T::lit(4.0 * r as f64);
    let a = GenPoly::monomial(k, f);
    let value = SpectrumChar::periodic(y, unit(s_turns), l).eval(&a);
    let value_error = (value - Complex::new(T::zero(), T::one())).norm();
    let s = match cp.system() {
        DynSystem::Finite(fs) => {
            CharSubset::Orbitwise(fs.orbits().iter().map(|o| (o.base(), ArcSet::point(Turn::from_integer(0)))).collect())
        }
        _ => CharSubset::Product(ArcSet::point(Turn::from_integer(0))),
    };
    let restriction_onto_base = !specint_check(cp, &SubalgebraSpec::BaseCx, &s)?;
    let s_values_real = crate::commutant::spectrum_gamma(cp, &SampleGrid::new(1, grid.y_points))?
        .iter()
        .all(|c| c.eval(&a).im.abs() <= T::tau_zero());
    Ok(SeparationReplay {
        k,
        l,
        r,
        s_turns,
        value: [value.re, value.im],
        value_error,
        restriction_onto_base,
        s_values_real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::Turn;
    use crate::ideals::hull::FiberZeros;

    fn swap() -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(vec![1, 0]).unwrap())
    }

    fn shift_ideal(cp: &CrossedProduct<f64>, f: &[f64], n: i64) -> IdealSpec<f64> {
        let f = CoefficientFunction::from_real(f);
        IdealSpec::Generated(vec![cp.func(f.clone()).sub(&GenPoly::monomial(n, f)).unwrap()])
    }

    #[test]
    fn averaging_matches_commutant_part() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 2, 0, 3]).unwrap());
        let a = GenPoly::from_terms(
            cp.model(),
            [(1, CoefficientFunction::from_real(&[1.0, 2.0, 3.0, 4.0])), (3, CoefficientFunction::from_real(&[1.0, 0.0, 1.0, 5.0]))],
        )
        .unwrap();
        let avg = averaging_projection(&cp, &a).unwrap();
        assert!(avg.sub(&commutant_part(&cp, &a).unwrap()).unwrap().max_abs_coeff() < 1e-12);
        let rot: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 3).unwrap());
        let b = rot.delta(1).add(&rot.delta(3)).unwrap();
        let avg = averaging_projection(&rot, &b).unwrap();
        assert!(avg.sub(&rot.delta(3)).unwrap().max_abs_coeff() < 1e-12);
    }

    #[test]
    fn base_cx_misses_shift_ideal() {
        let cp = swap();
        let out = intersect_with_subalgebra(&cp, &shift_ideal(&cp, &[1.0, 1.0], 2), &SubalgebraSpec::BaseCx, &Default::default()).unwrap();
        assert!(out.is_certified_empty(), "{out:?}");
        let full = intersect_with_subalgebra(&cp, &shift_ideal(&cp, &[1.0, 1.0], 2), &SubalgebraSpec::FullCommutant, &Default::default()).unwrap();
        assert!(full.is_witness());

        let rot: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 2).unwrap());
        let gen = IdealSpec::Generated(vec![rot.one().sub(&rot.delta(2)).unwrap()]);
        let out = intersect_with_subalgebra(&rot, &gen, &SubalgebraSpec::BaseCx, &Default::default()).unwrap();
        assert!(out.is_certified_empty(), "{out:?}");
        assert!(!vanishes_on_t_one(&rot, &rot.one().sub(&rot.delta(1)).unwrap()));
    }

    #[test]
    fn improper_ideal_is_an_error() {
        let cp = swap();
        let zero = IdealSpec::Generated(vec![GenPoly::zero(cp.model())]);
        assert!(matches!(
            intersect_with_subalgebra(&cp, &zero, &SubalgebraSpec::FullCommutant, &Default::default()),
            Err(Error::ImproperIdeal(_))
        ));
    }

    #[test]
    fn isol_b1_gets_polynomial_witness() {
        let cp = swap();
        let b1 = SubalgebraSpec::IsolB1 { base: 0, x1: Turn::new(1, 4), x2: Turn::new(3, 4) };
        let ideal = shift_ideal(&cp, &[1.0, 1.0], 2);
        let out = intersect_with_subalgebra(&cp, &ideal, &b1, &Default::default()).unwrap();
        let IntersectionOutcome::Witness { element: Element::Poly(w), norm_lower, .. } = out else { panic!("{out:?}") };
        assert!(norm_lower > 1e-6);
        assert!(ideal_contains(&cp, &ideal, &w, &SampleGrid::new(16, 4)).unwrap().contained);
    }

    #[test]
    fn specint_examples() {
        let cp = swap();
        let all = CharSubset::Orbitwise([(0, ArcSet::full())].into());
        assert!(!specint_check(&cp, &SubalgebraSpec::FullCommutant, &all).unwrap());
        let empty = CharSubset::Orbitwise([(0, ArcSet::empty())].into());
        assert!(specint_check(&cp, &SubalgebraSpec::FullCommutant, &empty).is_err());
        let t1 = CharSubset::Orbitwise([(0, ArcSet::point(Turn::from_integer(0)))].into());
        assert!(!specint_check(&cp, &SubalgebraSpec::BaseCx, &t1).unwrap());
        assert!(specint_check(&cp, &SubalgebraSpec::FullCommutant, &t1).unwrap());
        let bad = CharSubset::Orbitwise([(0, ArcSet::full()), (1, ArcSet::empty())].into());
        assert!(specint_check(&cp, &SubalgebraSpec::FullCommutant, &bad).is_err());
    }

    #[test]
    fn pedersen_projection_on_swap() {
        let cp = swap();
        // g = 1 + (δ² + δ⁻²)/2 ≥ 0, characters 1 + cos 2πs.
        let half = CoefficientFunction::from_real(&[0.5, 0.5]);
        let g = GenPoly::from_terms(cp.model(), [(0, cp.one_fn()), (2, half.clone()), (-2, half)]).unwrap();
        let ideal = IdealSpec::Generated(vec![cp.one()]);
        let w = pedersen_witness(&cp, &SubalgebraSpec::FullCommutant, &ideal, &g, &Default::default()).unwrap();
        assert!((w.peak_value - 1.0).abs() < 1e-9);
        assert!(w.approximation_error < 1e-9);
        assert!(w.factorization_defect < 1e-9);
        let small = g.scale_real(0.25);
        let opts = PedersenOptions { normalize: false, ..Default::default() };
        assert!(pedersen_witness(&cp, &SubalgebraSpec::FullCommutant, &ideal, &small, &opts).is_err());
        let neg = g.scale_real(-1.0);
        assert!(pedersen_witness(&cp, &SubalgebraSpec::FullCommutant, &ideal, &neg, &Default::default()).is_err());
    }

    #[test]
    fn separation_on_half_rotation() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 2).unwrap());
        let r = separation_replay(&cp, &SampleGrid::new(8, 8)).unwrap();
        assert_eq!((r.k, r.l, r.r), (4, 2, 2));
        assert!(r.value_error < 1e-12);
        assert!(r.restriction_onto_base && r.s_values_real);
        let _ = FiberZeros::<f64>::Empty;
    }
}
