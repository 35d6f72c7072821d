//! Explicit irreducible representations of `C*(Σ)` and the pure states they carry.
//!
//! For a point `y` of exact period `p` and `t ∈ 𝕋`, `π_{y,t}` acts on `ℂ^p` by
//! `π(f) e_i = f(σ^i y) e_i`, `π(δ) e_j = e_{j+1}` for `j < p−1` and
//! `π(δ) e_{p−1} = t·e_0`. Consequently `π(f δⁿ) e_j = f(σ^m y)·t^k e_m`
//! with `j + n = k p + m`, `0 ≤ m < p`.
//!
//! For an aperiodic `x`, `π_x` acts on `ℓ²(ℤ)` by `π(f) e_i = f(σ^i x) e_i`
//! and `π(δ) e_i = e_{i+1}`; only finite windows of it are materialized.

use std::collections::BTreeSet;

use num_complex::Complex;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly, Model};
use crate::dynsys::{DynSystem, FiniteSystem, Point};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::scalar::{cpow, czero, unit, Real};

/// The value `π_{y,t}(a)`, a `p × p` matrix.
pub type RepMatrix<T> = CMatrix<T>;

/// Sampling resolution for parameters of the representation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleGrid {
    /// Equispaced points `t_j = e^{2πij/M}` on the circle.
    pub t_points: usize,
    /// Base points sampled on a transversal `[0, 1/q)` of a rational rotation.
    pub y_points: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self { t_points: 512, y_points: 64 }
    }
}

impl SampleGrid {
    pub fn new(t_points: usize, y_points: usize) -> Self {
        Self { t_points, y_points }
    }

    pub fn t_values<T: Real>(&self) -> Vec<Complex<T>> {
        (0..self.t_points)
            .map(|j| unit(T::from_usize(j) / T::from_usize(self.t_points)))
            .collect()
    }

    /// Base points whose orbits are enumerated: orbit representatives for
    /// finite systems, a transversal grid for rational rotations.
    pub fn base_points<T: Real>(&self, sys: &DynSystem<T>) -> Vec<Point<T>> {
        match sys {
            DynSystem::Finite(f) => f.orbits().iter().map(|o| Point::Index(o.base())).collect(),
            DynSystem::RationalRotation { q, .. } => {
                let span = T::one() / T::lit(*q as f64);
                (0..self.y_points)
                    .map(|j| Point::Circle(span * T::from_usize(j) / T::from_usize(self.y_points)))
                    .collect()
            }
            DynSystem::IrrationalRotation { .. } => {
                (0..self.y_points).map(|j| Point::Circle(T::from_usize(j) / T::from_usize(self.y_points))).collect()
            }
        }
    }
}

fn check_unit<T: Real>(t: Complex<T>) -> Result<()> {
    if (t.norm() - T::one()).abs() > T::tau_zero().max(T::epsilon() * T::lit(16.0)) {
        return Err(Error::Precondition(format!("|t| = {} is not 1", t.norm())));
    }
    Ok(())
}

/// Exact period of a periodic base point, or an error for aperiodic ones.
pub fn period<T: Real>(cp: &CrossedProduct<T>, y: Point<T>) -> Result<usize> {
    cp.system()
        .period_of(y)?
        .ok_or_else(|| Error::Aperiodic(format!("{y:?}")))
}

/// `π_{y,t}(a)`.
pub fn rep_periodic<T: Real>(
    cp: &CrossedProduct<T>,
    y: Point<T>,
    t: Complex<T>,
    a: &GenPoly<T>,
) -> Result<RepMatrix<T>> {
    cp.check(a)?;
    check_unit(t)?;
    let p = period(cp, y)?;
    let sys = cp.system();
    let orbit: Vec<Point<T>> = (0..p).map(|i| sys.apply(y, i as i64)).collect();
    let pi = p as i64;
    let mut m = CMatrix::zeros(p, p);
    for (n, f) in a.terms() {
        for j in 0..pi {
            let target = (j + n).rem_euclid(pi);
            let power = (j + n).div_euclid(pi);
            let v = f.eval(orbit[target as usize]);
            if v != czero() {
                m[(target as usize, j as usize)] += v * cpow(t, power);
            }
        }
    }
    Ok(m)
}

/// A `(2W+1) × (2W+1)` window of `π_x(a)` on `span{e_{−W}, …, e_W}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedRep<T> {
    pub half_width: usize,
    pub matrix: CMatrix<T>,
    /// Entries whose row and column are at least this far from the boundary are exact.
    pub safe_margin: u64,
}

impl<T: Real> TruncatedRep<T> {
    /// Index into the matrix for the basis vector `e_i`, `|i| ≤ W`.
    pub fn slot(&self, i: i64) -> usize {
        (i + self.half_width as i64) as usize
    }
}

/// Compression of `π_x(a)` to a finite window around `e_0`.
pub fn rep_aperiodic<T: Real>(
    cp: &CrossedProduct<T>,
    x: T,
    half_width: usize,
    a: &GenPoly<T>,
) -> Result<TruncatedRep<T>> {
    cp.check(a)?;
    if !matches!(cp.system(), DynSystem::IrrationalRotation { .. }) {
        return Err(Error::UnsupportedKind {
            kind: cp.system().kind().name(),
            op: "aperiodic representation",
        });
    }
    if (half_width as u64) < a.degree_bound() {
        return Err(Error::Precondition(format!(
            "window half-width {half_width} below degree bound {}",
            a.degree_bound()
        )));
    }
    let w = half_width as i64;
    let size = 2 * half_width + 1;
    let sys = cp.system();
    let mut m = CMatrix::zeros(size, size);
    for (n, f) in a.terms() {
        for i in -w..=w {
            let target = i + n;
            if target.abs() > w {
                continue;
            }
            let v = f.eval(sys.apply(Point::Circle(x), target));
            m[((target + w) as usize, (i + w) as usize)] += v;
        }
    }
    Ok(TruncatedRep { half_width, matrix: m, safe_margin: a.degree_bound() })
}

/// The pure state `φ_{y,t}(a) = ⟨π_{y,t}(a) e_0, e_0⟩ = Σ_{p | k} a(k)(y) t^{k/p}`.
pub fn pure_state<T: Real>(
    cp: &CrossedProduct<T>,
    y: Point<T>,
    t: Complex<T>,
    a: &GenPoly<T>,
) -> Result<Complex<T>> {
    cp.check(a)?;
    check_unit(t)?;
    let p = period(cp, y)? as i64;
    Ok(a.terms()
        .filter(|(k, _)| k.rem_euclid(p) == 0)
        .fold(czero(), |acc, (k, f)| acc + f.eval(y) * cpow(t, k / p)))
}

/// Smallest eigenvalue of the (Hermitian) representation matrices over the grid.
///
/// Aperiodic systems use windows of `π_x` at the sampled base points; a
/// compression of a positive operator is positive, so any negative value is
/// a genuine witness.
pub fn min_eigenvalue_over_grid<T: Real>(
    cp: &CrossedProduct<T>,
    a: &GenPoly<T>,
    grid: &SampleGrid,
) -> Result<T> {
    let mut min = T::infinity();
    match cp.system() {
        DynSystem::IrrationalRotation { .. } => {
            let w = (a.degree_bound() as usize * 4).max(16);
            for y in grid.base_points(cp.system()).into_iter().take(8) {
                let Point::Circle(x) = y else { unreachable!() };
                let tr = rep_aperiodic(cp, x, w, a)?;
                for ev in hermitian_eigenvalues(&tr.matrix) {
                    min = min.min(ev);
                }
            }
        }
        _ => {
            for y in grid.base_points(cp.system()) {
                for t in grid.t_values() {
                    let m = rep_periodic(cp, y, t, a)?;
                    min = min.min(hermitian_eigenvalues(&m)[0]);
                }
            }
        }
    }
    Ok(min)
}

/// An element of `C(𝕋, M_p)`: a `p × p` matrix of Laurent polynomials in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicRepMatrix<T> {
    p: usize,
    entries: Vec<LaurentPoly<T>>,
}

impl<T: Real> SymbolicRepMatrix<T> {
    pub fn zeros(p: usize) -> Self {
        Self { p, entries: vec![LaurentPoly::zero(); p * p] }
    }

    /// The unitary `u(z)`: ones on the subdiagonal and `z` in the top-right corner.
    pub fn shift(p: usize) -> Self {
        let mut m = Self::zeros(p);
        for j in 0..p {
            let target = (j + 1) % p;
            let power = if j + 1 == p { 1 } else { 0 };
            m.entries[target * p + j] = LaurentPoly::monomial(power, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// `diag(d_0, …, d_{p−1})`.
    pub fn diag(d: Vec<LaurentPoly<T>>) -> Self {
        let p = d.len();
        let mut m = Self::zeros(p);
        for (i, x) in d.into_iter().enumerate() {
            m.entries[i * p + i] = x;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly<T> {
        &self.entries[i * self.p + j]
    }

    pub fn eval(&self, z: Complex<T>) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.p, self.p);
        for i in 0..self.p {
            for j in 0..self.p {
                m[(i, j)] = self.entry(i, j).eval(z);
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for j in 0..p {
                let mut acc = LaurentPoly::zero();
                for k in 0..p {
                    acc = &acc + &(self.entry(i, k) * other.entry(k, j));
                }
                out.entries[i * p + j] = acc;
            }
        }
        out
    }

    /// Pointwise conjugate transpose on the circle.
    pub fn adjoint(&self) -> Self {
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for j in 0..p {
                out.entries[j * p + i] = self.entry(i, j).conj_on_circle();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = &*e - o;
        }
        out
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.entries.iter().all(|e| e.is_zero(tol))
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        (0..self.p).all(|i| (0..self.p).all(|j| i == j || self.entry(i, j).is_zero(tol)))
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<LaurentPoly<T>> {
        (0..self.p).map(|i| self.entry(i, i).clone()).collect()
    }

    /// Largest `max|k|` among the entries.
    pub fn degree_bound(&self) -> u64 {
        self.entries.iter().map(LaurentPoly::degree_bound).max().unwrap_or(0)
    }
}

/// The image of `a` in `C(𝕋, M_p)` for the orbit of `base`: `π_{base,z}(a)` with `z` symbolic.
pub fn orbit_symbolic<T: Real>(
    fs: &FiniteSystem,
    base: usize,
    a: &GenPoly<T>,
) -> Result<SymbolicRepMatrix<T>> {
    if a.model() != Model::Discrete(fs.len()) {
        return Err(Error::ModelMismatch("element does not live on this finite system".into()));
    }
    let p = fs.periods()[base];
    let pi = p as i64;
    let orbit: Vec<usize> = (0..p).map(|i| fs.apply(base, i as i64)).collect();
    let mut m = SymbolicRepMatrix::zeros(p);
    for (n, f) in a.terms() {
        let CoefficientFunction::Discrete(v) = f else { unreachable!() };
        for j in 0..pi {
            let target = (j + n).rem_euclid(pi);
            let power = (j + n).div_euclid(pi);
            let val = v[orbit[target as usize]];
            if val != czero() {
                m.entries[target as usize * p + j as usize].add_term(power, val);
            }
        }
    }
    Ok(m)
}

/// The isomorphism `C*(Σ) ≅ C(𝕋, M_p)` for a system consisting of one orbit,
/// based at the lowest-index point.
pub fn single_orbit_iso<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>) -> Result<SymbolicRepMatrix<T>> {
    let fs = cp.system().require_finite("single-orbit isomorphism")?;
    let orbits = fs.orbits();
    if orbits.len() != 1 {
        return Err(Error::Precondition(format!("system has {} orbits, expected one", orbits.len())));
    }
    orbit_symbolic(fs, orbits[0].base(), a)
}

/// Preimage of the matrix unit `E_{ij} z^k` under [`single_orbit_iso`]:
/// `1_{σ^i x} δ^{i−j+kp}`.
pub fn single_orbit_preimage<T: Real>(fs: &FiniteSystem, i: usize, j: usize, k: i64) -> GenPoly<T> {
    let orbit = &fs.orbits()[0];
    let p = orbit.period as i64;
    let f = CoefficientFunction::indicator(fs.len(), [orbit.points[i]]);
    GenPoly::monomial(i as i64 - j as i64 + k * p, f)
}

/// The *-isomorphism `C*(Σ) ≅ C*(Σ₁) ⊕ C*(Σ₂)` for a partition of a finite
/// system into two invariant pieces.
#[derive(Debug, Clone)]
pub struct DirectSumSplit<T> {
    pub parts: [CrossedProduct<T>; 2],
    /// `maps[k][i]` is the original index of point `i` of part `k`.
    pub maps: [Vec<usize>; 2],
    n: usize,
}

pub fn direct_sum_split<T: Real>(cp: &CrossedProduct<T>, first: &BTreeSet<usize>) -> Result<DirectSumSplit<T>> {
    let fs = cp.system().require_finite("direct-sum split")?;
    let n = fs.len();
    if first.is_empty() || first.len() >= n || first.iter().any(|&x| x >= n) {
        return Err(Error::Precondition("both parts of the partition must be nonempty".into()));
    }
    if !fs.is_invariant(first) {
        return Err(Error::Precondition("partition is not invariant under σ".into()));
    }
    let second: BTreeSet<usize> = (0..n).filter(|x| !first.contains(x)).collect();
    let (s1, m1) = fs.restrict(first)?;
    let (s2, m2) = fs.restrict(&second)?;
    Ok(DirectSumSplit {
        parts: [CrossedProduct::new(DynSystem::Finite(s1)), CrossedProduct::new(DynSystem::Finite(s2))],
        maps: [m1, m2],
        n,
    })
}

impl<T: Real> DirectSumSplit<T> {
    /// `f ↦ f↾A₁ ⊕ f↾A₂`, `δ ↦ δ₁ ⊕ δ₂`.
    pub fn split(&self, a: &GenPoly<T>) -> Result<(GenPoly<T>, GenPoly<T>)> {
        if a.model() != Model::Discrete(self.n) {
            return Err(Error::ModelMismatch("element does not live on the split system".into()));
        }
        let restrict = |k: usize| -> Result<GenPoly<T>> {
            let map = &self.maps[k];
            GenPoly::from_terms(
                Model::Discrete(map.len()),
                a.terms().map(|(deg, f)| {
                    let CoefficientFunction::Discrete(v) = f else { unreachable!() };
                    (deg, CoefficientFunction::Discrete(map.iter().map(|&x| v[x]).collect()))
                }),
            )
        };
        Ok((restrict(0)?, restrict(1)?))
    }

    /// Inverse of [`split`](Self::split).
    pub fn merge(&self, a1: &GenPoly<T>, a2: &GenPoly<T>) -> Result<GenPoly<T>> {
        let mut terms: Vec<(i64, CoefficientFunction<T>)> = Vec::new();
        for (k, part) in [a1, a2].into_iter().enumerate() {
            for (deg, f) in part.terms() {
                let CoefficientFunction::Discrete(v) = f else {
                    return Err(Error::ModelMismatch("direct-sum parts must be discrete".into()));
                };
                let mut full = vec![czero(); self.n];
                for (i, &x) in self.maps[k].iter().enumerate() {
                    full[x] = v[i];
                }
                terms.push((deg, CoefficientFunction::Discrete(full)));
            }
        }
        GenPoly::from_terms(Model::Discrete(self.n), terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cone;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn swap() -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(vec![1, 0]).unwrap())
    }

    #[test]
    fn delta_on_two_cycle() {
        let cp = swap();
        let t = unit(0.3);
        let m = rep_periodic(&cp, Point::Index(0), t, &cp.delta(1)).unwrap();
        let expect = CMatrix::from_rows(vec![vec![c(0.0, 0.0), t], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(m.sub(&expect).max_abs() < 1e-15);
        let m2 = rep_periodic(&cp, Point::Index(0), t, &cp.delta(2)).unwrap();
        assert!(m2.sub(&CMatrix::identity(2).scale(t)).max_abs() < 1e-15);
    }

    #[test]
    fn fixed_point_collapses_to_scalar() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 0, 2]).unwrap());
        let f = CoefficientFunction::from_real(&[1.0, 2.0, 7.0]);
        let t = unit(0.1);
        let m = rep_periodic(&cp, Point::Index(2), t, &GenPoly::monomial(1, f)).unwrap();
        assert_eq!(m.rows(), 1);
        assert!((m[(0, 0)] - t * 7.0).norm() < 1e-15);
    }

    #[test]
    fn aperiodic_window() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::irrational(2f64.sqrt() - 1.0).unwrap());
        let tr = rep_aperiodic(&cp, 0.0, 4, &cp.delta(1)).unwrap();
        for i in -4..4 {
            assert_eq!(tr.matrix[(tr.slot(i + 1), tr.slot(i))], cone());
        }
        let id = cp.mul(&cp.delta(-1), &cp.delta(1)).unwrap();
        let tr = rep_aperiodic(&cp, 0.0, 4, &id).unwrap();
        assert!(tr.matrix.sub(&CMatrix::identity(9)).max_abs() < 1e-15);
        let f = CoefficientFunction::Trig(LaurentPoly::monomial(1, c(1.0, 0.0)));
        let tr = rep_aperiodic(&cp, 0.25, 3, &cp.func(f.clone())).unwrap();
        for i in -3..=3 {
            let expect = f.eval(cp.system().apply(Point::Circle(0.25), i));
            assert!((tr.matrix[(tr.slot(i), tr.slot(i))] - expect).norm() < 1e-14);
        }
        assert!(rep_aperiodic(&swap(), 0.0, 4, &swap().delta(1)).is_err());
        assert!(rep_aperiodic(&cp, 0.0, 1, &cp.delta(2)).is_err());
    }

    #[test]
    fn pure_state_examples() {
        let cp = swap();
        let t = unit(0.37);
        let y = Point::Index(1);
        assert!((pure_state(&cp, y, t, &cp.delta(2)).unwrap() - t).norm() < 1e-15);
        assert_eq!(pure_state(&cp, y, t, &cp.delta(1)).unwrap(), czero());
        assert_eq!(pure_state(&cp, y, t, &cp.delta(3)).unwrap(), czero());
        let f = CoefficientFunction::from_real(&[4.0, 5.0]);
        assert_eq!(pure_state(&cp, y, t, &cp.func(f)).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn irrational_points_have_no_periodic_rep() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::irrational(0.3).unwrap());
        assert!(matches!(
            rep_periodic(&cp, Point::Circle(0.0), cone(), &cp.one()),
            Err(Error::Aperiodic(_))
        ));
    }

    #[test]
    fn non_unit_parameter_is_rejected() {
        let cp = swap();
        assert!(rep_periodic(&cp, Point::Index(0), c(2.0, 0.0), &cp.one()).is_err());
    }

    #[test]
    fn single_orbit_iso_matches_shift_and_diag() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 2, 0]).unwrap());
        assert_eq!(single_orbit_iso(&cp, &cp.delta(1)).unwrap(), SymbolicRepMatrix::shift(3));
        let f = CoefficientFunction::from_real(&[1.0, 2.0, 3.0]);
        let d = single_orbit_iso(&cp, &cp.func(f)).unwrap();
        let expect = SymbolicRepMatrix::diag(
            [1.0, 2.0, 3.0].iter().map(|&v| LaurentPoly::constant(c(v, 0.0))).collect(),
        );
        assert_eq!(d, expect);
        let cube = single_orbit_iso(&cp, &cp.delta(3)).unwrap();
        let z = LaurentPoly::monomial(1, c(1.0, 0.0));
        assert_eq!(cube, SymbolicRepMatrix::diag(vec![z.clone(), z.clone(), z]));
        assert!(single_orbit_iso(&swap_plus_fixed(), &swap_plus_fixed().one()).is_err());
    }

    fn swap_plus_fixed() -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(vec![1, 0, 2]).unwrap())
    }

    #[test]
    fn matrix_units_are_hit() {
        let fs = FiniteSystem::new(vec![1, 2, 0]).unwrap();
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::Finite(fs.clone()));
        for i in 0..3 {
            for j in 0..3 {
                for k in -2..=2 {
                    let m = single_orbit_iso(&cp, &single_orbit_preimage(&fs, i, j, k)).unwrap();
                    for r in 0..3 {
                        for s in 0..3 {
                            let e = m.entry(r, s);
                            if (r, s) == (i, j) {
                                assert_eq!(e, &LaurentPoly::monomial(k, c(1.0, 0.0)));
                            } else {
                                assert!(e.is_empty());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn direct_sum_split_example() {
        let cp = swap_plus_fixed();
        let split = direct_sum_split(&cp, &[0, 1].into_iter().collect()).unwrap();
        let f = CoefficientFunction::from_real(&[1.0, 2.0, 3.0]);
        let a = GenPoly::monomial(1, f);
        let (a1, a2) = split.split(&a).unwrap();
        assert_eq!(a1, GenPoly::monomial(1, CoefficientFunction::from_real(&[1.0, 2.0])));
        assert_eq!(a2, GenPoly::monomial(1, CoefficientFunction::from_real(&[3.0])));
        assert_eq!(split.merge(&a1, &a2).unwrap(), a);
        let (u1, u2) = split.split(&cp.one()).unwrap();
        assert_eq!(u1, split.parts[0].one());
        assert_eq!(u2, split.parts[1].one());
        assert!(direct_sum_split(&cp, &[0, 2].into_iter().collect()).is_err());
        assert!(direct_sum_split(&cp, &[0, 1, 2].into_iter().collect()).is_err());
    }
}
