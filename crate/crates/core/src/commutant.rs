//! The commutant `C(X)′` of `C(X)` inside `C*(Σ)`: membership, bases,
//! maximal commutativity, its character space `Γ` with the induced map `σ̃`,
//! and the projection `E₀`.
//!
//! `a ∈ C(X)′` iff `supp a(n) ⊆ Per^n(σ)` for every `n`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly, Model};
use crate::dynsys::{DynSystem, Point, PointSet};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{rational_nullspace, supported_in, Rational};
use crate::norm::{operator_norm, NormEstimate, NormOptions};
use crate::reps::SampleGrid;
use crate::scalar::{cone, cpow, czero, Real};

pub fn in_commutant<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<bool> {
    cp.check(a)?;
    let tol = T::tau_zero();
    for (n, f) in a.terms() {
        let ok = match (cp.system().per_signed(n), f) {
            (PointSet::Whole, _) => true,
            (PointSet::Empty, f) => f.is_zero(tol),
            (PointSet::Indices(s), CoefficientFunction::Discrete(v)) => {
                v.iter().enumerate().all(|(x, c)| s.contains(&x) || c.norm() <= tol)
            }
            (PointSet::Indices(_), CoefficientFunction::Trig(_)) => unreachable!(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of every coefficient `a(n)` to `Per^n(σ)`.
///
/// On finite systems this is the conditional expectation onto `C(X)′`.
pub fn commutant_part<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<GenPoly<T>> {
    cp.check(a)?;
    GenPoly::from_terms(
        a.model(),
        a.terms().filter_map(|(n, f)| match (cp.system().per_signed(n), f) {
            (PointSet::Whole, f) => Some((n, f.clone())),
            (PointSet::Empty, _) => None,
            (PointSet::Indices(s), CoefficientFunction::Discrete(v)) => Some((
                n,
                CoefficientFunction::Discrete(
                    v.iter().enumerate().map(|(x, &c)| if s.contains(&x) { c } else { czero() }).collect(),
                ),
            )),
            (PointSet::Indices(_), CoefficientFunction::Trig(_)) => unreachable!(),
        }),
    )
}

/// `a f − f a`.
pub fn commutator<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>, f: &CoefficientFunction<T>) -> Result<GenPoly<T>> {
    let g = cp.func(f.clone());
    cp.mul(a, &g)?.sub(&cp.mul(&g, a)?)
}

/// `‖a f − f a‖` with its enclosure.
pub fn commutator_norm<T: Real>(
    cp: &CrossedProduct<T>,
    a: &GenPoly<T>,
    f: &CoefficientFunction<T>,
    opts: &NormOptions,
) -> Result<NormEstimate<T>> {
    operator_norm(cp, &commutator(cp, a, f)?, opts)
}

/// Functions generating `C(X)` as a C*-algebra: point indicators on finite
/// systems, `e^{±2πix}` on the circle.
pub fn generating_functions<T: Real>(cp: &CrossedProduct<T>) -> Vec<CoefficientFunction<T>> {
    match cp.model() {
        Model::Discrete(n) => (0..n).map(|x| CoefficientFunction::indicator(n, [x])).collect(),
        Model::Trig => [1, -1]
            .into_iter()
            .map(|k| CoefficientFunction::Trig(LaurentPoly::monomial(k, cone())))
            .collect(),
    }
}

/// Monomials `1_x δⁿ` with `x ∈ Per^n(σ)`, `|n| ≤ cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutantBasis {
    pub cutoff: u64,
    #[serde(flatten)]
    pub per_degree: BTreeMap<i64, Vec<usize>>,
    #[serde(skip)]
    n_points: usize,
}

impl CommutantBasis {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.per_degree.iter().map(|(&n, v)| (n, v.len())).collect()
    }

    pub fn dimension(&self) -> usize {
        self.per_degree.values().map(Vec::len).sum()
    }

    pub fn elements<T: Real>(&self) -> Vec<GenPoly<T>> {
        self.per_degree
            .iter()
            .flat_map(|(&n, pts)| {
                pts.iter().map(move |&x| GenPoly::monomial(n, CoefficientFunction::indicator(self.n_points, [x])))
            })
            .collect()
    }
}

pub fn commutant_basis<T: Real>(cp: &CrossedProduct<T>, cutoff: u64) -> Result<CommutantBasis> {
    let fs = cp.system().require_finite("commutant basis")?;
    let c = cutoff as i64;
    let per_degree = (-c..=c)
        .map(|n| (n, (0..fs.len()).filter(|&x| fs.apply(x, n) == x).collect()))
        .collect();
    Ok(CommutantBasis { cutoff, per_degree, n_points: fs.len() })
}

/// Evidence for maximal commutativity of `C(X)′` up to a degree cutoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalAbelianCertificate {
    pub maximal: bool,
    pub cutoff: u64,
    /// Basis elements pairwise commute under exact symbolic multiplication.
    pub pairwise_commute: bool,
    /// `|Per^n(σ)|` per degree.
    pub basis_dims: BTreeMap<i64, usize>,
    /// Dimension of the space of degree-`n` elements commuting with the whole basis.
    pub centralizer_dims: BTreeMap<i64, usize>,
    /// A degree and point where a commuting element escapes the support condition.
    pub violation: Option<(i64, usize)>,
}

/// Checks that `C(X)′` is abelian and that anything of degree `≤ cutoff`
/// commuting with it already lies in it. The centralizer is computed by
/// exact rational elimination; the equations decouple by degree since
/// `(1_x δⁿ)(1_z δ^m) = [x = σⁿz] 1_x δ^{n+m}` and
/// `(1_z δ^m)(1_x δⁿ) = [z = σ^m x] 1_z δ^{m+n}`.
pub fn is_maximal_abelian<T: Real>(cp: &CrossedProduct<T>, cutoff: u64) -> Result<MaximalAbelianCertificate> {
    let fs = cp.system().require_finite("maximal-abelian check")?;
    let basis = commutant_basis(cp, cutoff)?;
    let pairwise_commute = basis_commutes(cp, &basis)?;
    let n_pts = fs.len();
    let mut centralizer_dims = BTreeMap::new();
    let mut violation = None;
    let c = cutoff as i64;
    for n in -c..=c {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (&m, pts) in &basis.per_degree {
            for &z in pts {
                for w in 0..n_pts {
                    let mut row = vec![Rational::zero(); n_pts];
                    if w == fs.apply(z, n) {
                        row[w] += Rational::from_integer(1);
                    }
                    if w == z {
                        row[fs.apply(z, -m)] -= Rational::from_integer(1);
                    }
                    if row.iter().any(|x| !x.is_zero()) && !rows.contains(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        let null = rational_nullspace(rows, n_pts);
        let allowed: Vec<bool> = (0..n_pts).map(|x| fs.apply(x, n) == x).collect();
        if violation.is_none() {
            if let Some(v) = null.iter().find(|v| !supported_in(v, &allowed)) {
                let x = (0..n_pts).find(|&x| !allowed[x] && !v[x].is_zero()).expect("unsupported entry");
                violation = Some((n, x));
            }
        }
        centralizer_dims.insert(n, null.len());
    }
    let basis_dims = basis.dims();
    let maximal = pairwise_commute && violation.is_none() && centralizer_dims == basis_dims;
    Ok(MaximalAbelianCertificate { maximal, cutoff, pairwise_commute, basis_dims, centralizer_dims, violation })
}

fn basis_commutes<T: Real>(cp: &CrossedProduct<T>, basis: &CommutantBasis) -> Result<bool> {
    let elems: Vec<GenPoly<T>> = basis.elements();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if cp.mul(a, b)? != cp.mul(b, a)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `δ a δ*`, coefficientwise `a(n) ↦ a(n)∘σ⁻¹`.
pub fn ad_delta<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<GenPoly<T>> {
    cp.check(a)?;
    GenPoly::from_terms(a.model(), a.terms().map(|(n, f)| (n, cp.compose(f, -1))))
}

/// `δ* a δ`, the inverse of [`ad_delta`].
pub fn ad_delta_inv<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<GenPoly<T>> {
    cp.check(a)?;
    GenPoly::from_terms(a.model(), a.terms().map(|(n, f)| (n, cp.compose(f, 1))))
}

/// A character of `C(X)′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpectrumChar<T> {
    /// `γ(x)`: evaluation of `a(0)` at an aperiodic point.
    Aperiodic(T),
    /// `γ(y, t)`: `Σ_{p | k} a(k)(y) t^{k/p}` with `p` the period of `y`.
    Periodic { y: CharPoint<T>, t: [T; 2], period: usize },
}

/// Serializable mirror of [`Point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CharPoint<T> {
    Index(usize),
    Circle(T),
}

impl<T: Real> From<Point<T>> for CharPoint<T> {
    fn from(p: Point<T>) -> Self {
        match p {
            Point::Index(i) => CharPoint::Index(i),
            Point::Circle(x) => CharPoint::Circle(x),
        }
    }
}

impl<T: Real> From<CharPoint<T>> for Point<T> {
    fn from(p: CharPoint<T>) -> Self {
        match p {
            CharPoint::Index(i) => Point::Index(i),
            CharPoint::Circle(x) => Point::Circle(x),
        }
    }
}

impl<T: Real> SpectrumChar<T> {
    pub fn periodic(y: Point<T>, t: Complex<T>, period: usize) -> Self {
        SpectrumChar::Periodic { y: y.into(), t: [t.re, t.im], period }
    }

    pub fn point(&self) -> Point<T> {
        match *self {
            SpectrumChar::Aperiodic(x) => Point::Circle(x),
            SpectrumChar::Periodic { y, .. } => y.into(),
        }
    }

    pub fn parameter(&self) -> Option<Complex<T>> {
        match *self {
            SpectrumChar::Aperiodic(_) => None,
            SpectrumChar::Periodic { t, .. } => Some(Complex::new(t[0], t[1])),
        }
    }

    /// Value on a commutant element; meaningful (and multiplicative) on `C(X)′` only.
    pub fn eval(&self, a: &GenPoly<T>) -> Complex<T> {
        match *self {
            SpectrumChar::Aperiodic(x) => a.fourier(0).eval(Point::Circle(x)),
            SpectrumChar::Periodic { y, t, period } => {
                let p = period as i64;
                let t = Complex::new(t[0], t[1]);
                let y: Point<T> = y.into();
                a.terms()
                    .filter(|(k, _)| k.rem_euclid(p) == 0)
                    .fold(czero(), |acc, (k, f)| acc + f.eval(y) * cpow(t, k / p))
            }
        }
    }

    /// The induced homeomorphism `σ̃`: `(y, t) ↦ (σ(y), t)`.
    pub fn sigma_tilde(&self, sys: &DynSystem<T>) -> Self {
        match *self {
            SpectrumChar::Aperiodic(x) => match sys.apply(Point::Circle(x), 1) {
                Point::Circle(z) => SpectrumChar::Aperiodic(z),
                Point::Index(_) => unreachable!(),
            },
            SpectrumChar::Periodic { y, t, period } => {
                SpectrumChar::Periodic { y: sys.apply(y.into(), 1).into(), t, period }
            }
        }
    }
}

/// Sampled characters of `C(X)′`: every point of a finite system, or the
/// orbits of a transversal grid of a rotation, each paired with the `t` grid.
/// The returned set is closed under `σ̃`.
pub fn spectrum_gamma<T: Real>(cp: &CrossedProduct<T>, grid: &SampleGrid) -> Result<Vec<SpectrumChar<T>>> {
    let sys = cp.system();
    let ts: Vec<Complex<T>> = grid.t_values();
    let mut out = Vec::new();
    match sys {
        DynSystem::Finite(fs) => {
            let per = fs.periods();
            for y in 0..fs.len() {
                for &t in &ts {
                    out.push(SpectrumChar::periodic(Point::Index(y), t, per[y]));
                }
            }
        }
        DynSystem::RationalRotation { q, .. } => {
            for base in grid.base_points(sys) {
                for i in 0..*q as i64 {
                    let y = sys.apply(base, i);
                    for &t in &ts {
                        out.push(SpectrumChar::periodic(y, t, *q as usize));
                    }
                }
            }
        }
        DynSystem::IrrationalRotation { .. } => {
            for base in grid.base_points(sys) {
                let Point::Circle(x) = base else { unreachable!() };
                out.push(SpectrumChar::Aperiodic(x));
            }
        }
    }
    Ok(out)
}

/// The common period `q` when `X = Per_q(σ)`.
pub fn uniform_period<T: Real>(sys: &DynSystem<T>) -> Option<u64> {
    match sys {
        DynSystem::Finite(fs) => {
            let per = fs.periods();
            per.iter().all(|&p| p == per[0]).then_some(per[0] as u64)
        }
        DynSystem::RationalRotation { q, .. } => Some(*q),
        DynSystem::IrrationalRotation { .. } => None,
    }
}

/// `E₀(Σ f_k δ^k) = Σ_l f_{lq} δ^{lq}` on systems with `X = Per_q(σ)`.
pub fn e0_projection<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<GenPoly<T>> {
    cp.check(a)?;
    let q = uniform_period(cp.system()).ok_or_else(|| {
        Error::Precondition("E₀ requires every point to have the same exact period".into())
    })? as i64;
    Ok(a.filter_degrees(|n| n.rem_euclid(q) == 0))
}

/// Closedness of `Per_k(σ)⁰` for each `k`, which decides existence of `E₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E0Existence {
    pub exists: bool,
    /// `Per_k(σ)⁰` per `k` and whether it is closed.
    pub interiors: BTreeMap<u64, (PointSet, bool)>,
}

pub fn e0_exists<T: Real>(sys: &DynSystem<T>) -> Result<E0Existence> {
    let profile = sys.periodicity_profile(sys.default_max_n())?;
    // Finite systems are discrete, and the circle models only have empty or
    // full exact-period sets; all of these are open and closed.
    let interiors: BTreeMap<u64, (PointSet, bool)> =
        profile.per_exact.into_iter().map(|(k, s)| (k, (s, true))).collect();
    let exists = interiors.values().all(|(_, closed)| *closed);
    Ok(E0Existence { exists, interiors })
}

/// An element of `C(X)′ \ C(X)`, which exists iff the system is not
/// topologically free: `1_x δ^p` for a point of period `p`, or `δ^q` on a
/// rational rotation.
pub fn nontrivial_commutant_element<T: Real>(cp: &CrossedProduct<T>) -> Option<GenPoly<T>> {
    match cp.system() {
        DynSystem::Finite(fs) => {
            let o = &fs.orbits()[0];
            Some(GenPoly::monomial(o.period as i64, CoefficientFunction::indicator(fs.len(), [o.base()])))
        }
        DynSystem::RationalRotation { q, .. } => Some(cp.delta(*q as i64)),
        DynSystem::IrrationalRotation { .. } => None,
    }
}

/// Degrees `n` with `|n| ≤ max_degree` admitting a nonzero trigonometric
/// coefficient `g` of degree `≤ trig_degree` such that `g δⁿ` commutes with
/// `e^{±2πix}`.
pub fn trig_commutant_degrees<T: Real>(cp: &CrossedProduct<T>, max_degree: u64, trig_degree: u64) -> Result<Vec<i64>> {
    let d = max_degree as i64;
    let mut out = Vec::new();
    for n in -d..=d {
        if trig_centralizer_dim(cp, n, trig_degree)? > 0 {
            out.push(n);
        }
    }
    Ok(out)
}

/// Dimension of `{g : [g δⁿ, e_{±1}] = 0}` among trigonometric polynomials
/// of degree `≤ trig_degree`.
///
/// `[e_c δⁿ, e_j] = (e^{−2πijnθ} − 1) e_{c+j} δⁿ` sends distinct monomials to
/// distinct monomials, so the linear system is diagonal in the basis `e_c`
/// and its kernel is spanned by the monomials with vanishing multiplier.
pub fn trig_centralizer_dim<T: Real>(cp: &CrossedProduct<T>, n: i64, trig_degree: u64) -> Result<usize> {
    if !matches!(cp.model(), Model::Trig) {
        return Err(Error::UnsupportedKind { kind: cp.system().kind().name(), op: "trigonometric centralizer" });
    }
    let k = trig_degree as i64;
    let mut dim = 0;
    for c in -k..=k {
        let g = CoefficientFunction::Trig(LaurentPoly::monomial(c, cone()));
        let a = GenPoly::monomial(n, g);
        let mut commutes = true;
        for f in generating_functions(cp) {
            if !commutator(cp, &a, &f)?.terms().all(|(_, h)| h.is_zero(T::tau_zero())) {
                commutes = false;
            }
        }
        if commutes {
            dim += 1;
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(sigma: Vec<usize>) -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(sigma).unwrap())
    }

    fn rot(p: u64, q: u64) -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::rotation(p, q).unwrap())
    }

    #[test]
    fn membership_examples() {
        let s = cp(vec![1, 0]);
        let f = CoefficientFunction::from_real(&[3.0, -1.0]);
        assert!(in_commutant(&s, &GenPoly::monomial(2, f)).unwrap());
        let g = CoefficientFunction::from_real(&[1.0, 0.0]);
        assert!(!in_commutant(&s, &GenPoly::monomial(1, g)).unwrap());
        let r = rot(1, 3);
        let t = CoefficientFunction::Trig(LaurentPoly::from_coeffs([(2, Complex::new(1.0, 1.0))]));
        assert!(in_commutant(&r, &GenPoly::monomial(3, t.clone())).unwrap());
        assert!(!in_commutant(&r, &GenPoly::monomial(1, t)).unwrap());
    }

    #[test]
    fn commutator_norm_of_delta() {
        let s = cp(vec![1, 0]);
        let f = CoefficientFunction::from_real(&[1.0, 0.0]);
        let opts = NormOptions { grid: SampleGrid::new(16, 4), tol: 1e-9, ..Default::default() };
        let n = commutator_norm(&s, &s.delta(1), &f, &opts).unwrap();
        assert!((n.estimate - 1.0).abs() < 1e-12);
        let id = commutator_norm(&s, &s.func(f.clone()), &f, &opts).unwrap();
        assert_eq!(id.estimate, 0.0);
    }

    #[test]
    fn basis_dimensions() {
        let b = commutant_basis(&cp(vec![1, 0]), 2).unwrap();
        assert_eq!(b.dims().into_values().collect::<Vec<_>>(), vec![2, 0, 2, 0, 2]);
        assert_eq!(b.dimension(), 6);
        let b = commutant_basis(&cp(vec![1, 0, 2]), 1).unwrap();
        assert_eq!(b.per_degree[&-1], vec![2]);
        assert_eq!(b.per_degree[&1], vec![2]);
        assert_eq!(b.dimension(), 5);
        assert_eq!(commutant_basis(&cp(vec![1, 2, 0]), 0).unwrap().dimension(), 3);
        assert!(commutant_basis(&rot(1, 3), 2).is_err());
    }

    #[test]
    fn maximal_abelian_examples() {
        for sigma in [vec![1, 0], vec![1, 0, 2], vec![0], vec![1, 0, 3, 2]] {
            let s = cp(sigma);
            let cutoff = 2 * s.system().as_finite().unwrap().period_lcm() as u64;
            let cert = is_maximal_abelian(&s, cutoff).unwrap();
            assert!(cert.maximal, "{cert:?}");
            assert_eq!(cert.basis_dims, cert.centralizer_dims);
        }
    }

    #[test]
    fn ad_delta_examples() {
        let s = cp(vec![1, 2, 0]);
        let f = CoefficientFunction::from_real(&[1.0, 2.0, 3.0]);
        let a = ad_delta(&s, &s.func(f.clone())).unwrap();
        assert_eq!(a, s.func(s.compose(&f, -1)));
        let direct = s.mul(&s.mul(&s.delta(1), &s.func(f.clone())).unwrap(), &s.delta(-1)).unwrap();
        assert_eq!(a, direct);
        assert_eq!(ad_delta(&s, &s.delta(2)).unwrap(), s.delta(2));
        assert_eq!(ad_delta_inv(&s, &a).unwrap(), s.func(f));
    }

    #[test]
    fn characters() {
        let s = cp(vec![1, 0]);
        let chars = spectrum_gamma(&s, &SampleGrid::new(16, 4)).unwrap();
        assert_eq!(chars.len(), 32);
        let f = CoefficientFunction::from_real(&[2.0, 5.0]);
        let a = GenPoly::monomial(2, f);
        for ch in &chars {
            let t = ch.parameter().unwrap();
            let Point::Index(y) = ch.point() else { panic!() };
            let expect = t * [2.0, 5.0][y];
            assert!((ch.eval(&a) - expect).norm() < 1e-15);
            let moved = ch.sigma_tilde(s.system());
            assert_eq!(moved.point(), Point::Index(1 - y));
            assert_eq!(moved.parameter(), ch.parameter());
        }
    }

    #[test]
    fn e0_examples() {
        let r = rot(1, 3);
        let g = |k: i64| CoefficientFunction::Trig(LaurentPoly::monomial(k, Complex::new(1.0, 0.0)));
        let a = GenPoly::from_terms(Model::Trig, [(0, g(0)), (1, g(1)), (3, g(2))]).unwrap();
        let e = e0_projection(&r, &a).unwrap();
        assert_eq!(e, GenPoly::from_terms(Model::Trig, [(0, g(0)), (3, g(2))]).unwrap());
        assert_eq!(e0_projection(&r, &e).unwrap(), e);
        let s = cp(vec![1, 0]);
        let f = CoefficientFunction::from_real(&[1.0, 2.0]);
        assert!(e0_projection(&s, &GenPoly::monomial(1, f)).unwrap().is_zero());
        assert!(e0_projection(&cp(vec![1, 0, 2]), &cp(vec![1, 0, 2]).one()).is_err());
        assert!(e0_exists(s.system()).unwrap().exists);
        assert!(e0_exists(rot(2, 5).system()).unwrap().exists);
        assert!(e0_exists(&DynSystem::<f64>::irrational(0.3).unwrap()).unwrap().exists);
    }

    #[test]
    fn dichotomy() {
        let irr: CrossedProduct<f64> = CrossedProduct::new(DynSystem::irrational(2f64.sqrt() - 1.0).unwrap());
        assert_eq!(trig_commutant_degrees(&irr, 12, 6).unwrap(), vec![0]);
        for n in -4..=4 {
            let dim = trig_centralizer_dim(&irr, n, 6).unwrap();
            assert_eq!(dim, if n == 0 { 13 } else { 0 });
        }
        assert!(nontrivial_commutant_element(&irr).is_none());
        assert_eq!(trig_commutant_degrees(&rot(1, 3), 6, 6).unwrap(), vec![-6, -3, 0, 3, 6]);
        for s in [cp(vec![1, 0]), cp(vec![1, 0, 2]), rot(1, 3)] {
            let w = nontrivial_commutant_element(&s).unwrap();
            assert!(in_commutant(&s, &w).unwrap());
            assert!(w.terms().any(|(n, _)| n != 0));
        }
    }
}
