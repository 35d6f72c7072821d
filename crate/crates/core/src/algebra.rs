//! Generalized polynomials `Σ f_n δⁿ`, the algebraic part of `C*(Σ)`.
//!
//! Multiplication follows the covariance rule `δⁿ f = (f∘σ⁻ⁿ) δⁿ`, so
//! `(f δ^m)(g δ^n) = f·(g∘σ^{−m}) δ^{m+n}`, and the involution is
//! `(f δⁿ)* = (f̄∘σⁿ) δ^{−n}`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::dynsys::{DynSystem, Point};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{cone, czero, unit, Real};

/// Which concrete representation of `C(X)` an element uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Functions on a finite set with this many points.
    Discrete(usize),
    /// Trigonometric polynomials on the circle.
    Trig,
}

/// An element of `C(X)`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientFunction<T> {
    Discrete(Vec<Complex<T>>),
    Trig(LaurentPoly<T>),
}

impl<T: Real> CoefficientFunction<T> {
    pub fn zero(model: Model) -> Self {
        match model {
            Model::Discrete(n) => Self::Discrete(vec![czero(); n]),
            Model::Trig => Self::Trig(LaurentPoly::zero()),
        }
    }

    pub fn constant(model: Model, c: Complex<T>) -> Self {
        match model {
            Model::Discrete(n) => Self::Discrete(vec![c; n]),
            Model::Trig => Self::Trig(LaurentPoly::constant(c)),
        }
    }

    pub fn one(model: Model) -> Self {
        Self::constant(model, cone())
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::Discrete(values.iter().map(|&v| Complex::new(T::lit(v), T::zero())).collect())
    }

    /// Indicator of a set of points of a finite system.
    pub fn indicator<I: IntoIterator<Item = usize>>(n: usize, points: I) -> Self {
        let mut v = vec![czero(); n];
        for x in points {
            v[x] = cone();
        }
        Self::Discrete(v)
    }

    pub fn model(&self) -> Model {
        match self {
            Self::Discrete(v) => Model::Discrete(v.len()),
            Self::Trig(_) => Model::Trig,
        }
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if self.model() != other.model() {
            return Err(Error::ModelMismatch(format!("{:?} vs {:?}", self.model(), other.model())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        Ok(match (self, other) {
            (Self::Discrete(a), Self::Discrete(b)) => {
                Self::Discrete(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Self::Trig(a), Self::Trig(b)) => Self::Trig(a + b),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-cone::<T>()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        match self {
            Self::Discrete(a) => Self::Discrete(a.iter().map(|x| x * s).collect()),
            Self::Trig(a) => Self::Trig(a.scale(s)),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        Ok(match (self, other) {
            (Self::Discrete(a), Self::Discrete(b)) => {
                Self::Discrete(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Self::Trig(a), Self::Trig(b)) => Self::Trig(a * b),
            _ => unreachable!(),
        })
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        match self {
            Self::Discrete(a) => Self::Discrete(a.iter().map(|x| x.conj()).collect()),
            Self::Trig(a) => Self::Trig(a.conj_on_circle()),
        }
    }

    pub fn eval(&self, x: Point<T>) -> Complex<T> {
        match (self, x) {
            (Self::Discrete(v), Point::Index(i)) => v[i],
            (Self::Trig(p), Point::Circle(c)) => p.eval_turns(c),
            _ => panic!("point type does not match coefficient model"),
        }
    }

    pub fn is_zero(&self, tol: T) -> bool {
        match self {
            Self::Discrete(v) => v.iter().all(|x| x.norm() <= tol),
            Self::Trig(p) => p.is_zero(tol),
        }
    }

    /// Upper bound of `sup |f|` (exact for discrete functions).
    pub fn sup_bound(&self) -> T {
        match self {
            Self::Discrete(v) => v.iter().fold(T::zero(), |m, x| m.max(x.norm())),
            Self::Trig(p) => p.l1(),
        }
    }

    /// Upper bound of `sup |f'|` with respect to the circle variable in turns.
    pub fn derivative_bound(&self) -> T {
        match self {
            Self::Discrete(_) => T::zero(),
            Self::Trig(p) => T::TAU() * p.weighted_l1(),
        }
    }

    /// Largest coefficient modulus, the quantity compared against `τ_zero`.
    pub fn max_abs_coeff(&self) -> T {
        match self {
            Self::Discrete(v) => v.iter().fold(T::zero(), |m, x| m.max(x.norm())),
            Self::Trig(p) => p.terms().fold(T::zero(), |m, (_, c)| m.max(c.norm())),
        }
    }

    fn pruned(self, tol: T) -> Self {
        match self {
            Self::Discrete(mut v) => {
                for x in v.iter_mut() {
                    if x.norm() <= tol {
                        *x = czero();
                    }
                }
                Self::Discrete(v)
            }
            Self::Trig(p) => Self::Trig(p.pruned(tol)),
        }
    }
}

/// A generalized polynomial: finitely many nonzero coefficients indexed by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GenPoly<T> {
    model: Model,
    terms: BTreeMap<i64, CoefficientFunction<T>>,
}

impl<T: Real> GenPoly<T> {
    pub fn zero(model: Model) -> Self {
        Self { model, terms: BTreeMap::new() }
    }

    /// `f δⁿ`.
    pub fn monomial(n: i64, f: CoefficientFunction<T>) -> Self {
        let mut p = Self::zero(f.model());
        p.insert(n, f);
        p
    }

    pub fn from_terms<I>(model: Model, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, CoefficientFunction<T>)>,
    {
        let mut p = Self::zero(model);
        for (n, f) in terms {
            if f.model() != model {
                return Err(Error::ModelMismatch(format!("term of degree {n}")));
            }
            let sum = match p.terms.remove(&n) {
                Some(g) => g.add(&f)?,
                None => f,
            };
            p.insert(n, sum);
        }
        Ok(p)
    }

    fn insert(&mut self, n: i64, f: CoefficientFunction<T>) {
        let f = f.pruned(T::tau_zero());
        if f.is_zero(T::tau_zero()) {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, f);
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Stored terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CoefficientFunction<T>)> {
        self.terms.iter().map(|(&n, f)| (n, f))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |n|` over stored terms.
    pub fn degree_bound(&self) -> u64 {
        self.terms.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    /// The generalized Fourier coefficient `a(j) = E(a δ^{−j})`.
    pub fn fourier(&self, j: i64) -> CoefficientFunction<T> {
        self.terms.get(&j).cloned().unwrap_or_else(|| CoefficientFunction::zero(self.model))
    }

    /// The canonical expectation onto `C(X)`: the degree-0 coefficient.
    pub fn expectation(&self) -> CoefficientFunction<T> {
        self.fourier(0)
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(format!("{:?} vs {:?}", self.model, other.model)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let mut out = self.clone();
        for (&n, g) in &other.terms {
            let sum = match out.terms.remove(&n) {
                Some(f) => f.add(g)?,
                None => g.clone(),
            };
            out.insert(n, sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-cone::<T>()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = Self::zero(self.model);
        for (&n, f) in &self.terms {
            out.insert(n, f.scale(s));
        }
        out
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Multiplies every coefficient on the left by a function: `f·a`.
    pub fn left_mul_fn(&self, f: &CoefficientFunction<T>) -> Result<Self> {
        let mut out = Self::zero(self.model);
        for (&n, g) in &self.terms {
            out.insert(n, f.mul(g)?);
        }
        Ok(out)
    }

    /// Keeps only the degrees for which `keep` returns true.
    pub fn filter_degrees<F: Fn(i64) -> bool>(&self, keep: F) -> Self {
        Self {
            model: self.model,
            terms: self.terms.iter().filter(|(&n, _)| keep(n)).map(|(&n, f)| (n, f.clone())).collect(),
        }
    }

    /// The Cesàro mean `Σ_{|i|≤n} (1 − |i|/(n+1)) a(i) δ^i`.
    pub fn cesaro(&self, n: u64) -> Self {
        let denom = T::lit((n + 1) as f64);
        let mut out = Self::zero(self.model);
        for (&i, f) in &self.terms {
            if i.unsigned_abs() <= n {
                let w = T::one() - T::lit(i.unsigned_abs() as f64) / denom;
                out.insert(i, f.scale(Complex::new(w, T::zero())));
            }
        }
        out
    }

    /// `Σ_i |i|/(n+1) · sup|a(i)|`, the Cesàro truncation bound (with `|i| > n` weighted 1).
    pub fn cesaro_error_bound(&self, n: u64) -> T {
        let denom = T::lit((n + 1) as f64);
        self.terms.iter().fold(T::zero(), |acc, (&i, f)| {
            let w = if i.unsigned_abs() <= n {
                T::lit(i.unsigned_abs() as f64) / denom
            } else {
                T::one()
            };
            acc + w * f.sup_bound()
        })
    }

    /// Largest coefficient modulus over all terms.
    pub fn max_abs_coeff(&self) -> T {
        self.terms.values().fold(T::zero(), |m, f| m.max(f.max_abs_coeff()))
    }

    /// `Σ_n sup|a(n)|`, an upper bound of the operator norm.
    pub fn l1_bound(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, f| acc + f.sup_bound())
    }
}

/// The crossed product `C*(Σ)`: a system plus the operations that need `σ`.
#[derive(Debug, Clone)]
pub struct CrossedProduct<T> {
    sys: DynSystem<T>,
    /// `e^{2πik/q}` for `k < q`, rational rotations only.
    roots: Vec<Complex<T>>,
}

impl<T: Real> CrossedProduct<T> {
    pub fn new(sys: DynSystem<T>) -> Self {
        let roots = match &sys {
            DynSystem::RationalRotation { q, .. } => (0..*q)
                .map(|k| unit(T::lit(k as f64) / T::lit(*q as f64)))
                .collect(),
            _ => Vec::new(),
        };
        Self { sys, roots }
    }

    pub fn system(&self) -> &DynSystem<T> {
        &self.sys
    }

    pub fn model(&self) -> Model {
        match &self.sys {
            DynSystem::Finite(f) => Model::Discrete(f.len()),
            _ => Model::Trig,
        }
    }

    pub fn check(&self, a: &GenPoly<T>) -> Result<()> {
        if a.model() != self.model() {
            return Err(Error::ModelMismatch(format!(
                "element model {:?} does not match system model {:?}",
                a.model(),
                self.model()
            )));
        }
        Ok(())
    }

    pub fn check_fn(&self, f: &CoefficientFunction<T>) -> Result<()> {
        if f.model() != self.model() {
            return Err(Error::ModelMismatch(format!(
                "function model {:?} does not match system model {:?}",
                f.model(),
                self.model()
            )));
        }
        Ok(())
    }

    pub fn one(&self) -> GenPoly<T> {
        GenPoly::monomial(0, CoefficientFunction::one(self.model()))
    }

    /// `δⁿ`.
    pub fn delta(&self, n: i64) -> GenPoly<T> {
        GenPoly::monomial(n, CoefficientFunction::one(self.model()))
    }

    /// A function placed at degree 0.
    pub fn func(&self, f: CoefficientFunction<T>) -> GenPoly<T> {
        GenPoly::monomial(0, f)
    }

    /// The constant function `1` of this system's model.
    pub fn one_fn(&self) -> CoefficientFunction<T> {
        CoefficientFunction::one(self.model())
    }

    /// `f∘σⁿ`.
    pub fn compose(&self, f: &CoefficientFunction<T>, n: i64) -> CoefficientFunction<T> {
        if n == 0 {
            return f.clone();
        }
        match (f, &self.sys) {
            (CoefficientFunction::Discrete(v), DynSystem::Finite(s)) => {
                CoefficientFunction::Discrete((0..v.len()).map(|x| v[s.apply(x, n)]).collect())
            }
            // f(x + nθ) = Σ c_k e^{2πik nθ} e^{2πikx}
            (CoefficientFunction::Trig(p), DynSystem::RationalRotation { p: num, q }) => {
                let q = *q as i64;
                let shift = (n.rem_euclid(q) * *num as i64).rem_euclid(q);
                CoefficientFunction::Trig(
                    p.map_phases(|k| self.roots[((k.rem_euclid(q) * shift).rem_euclid(q)) as usize]),
                )
            }
            (CoefficientFunction::Trig(p), DynSystem::IrrationalRotation { theta }) => {
                let t = *theta;
                CoefficientFunction::Trig(p.map_phases(|k| unit(T::from_i64(k) * T::from_i64(n) * t)))
            }
            _ => panic!("coefficient model does not match the system"),
        }
    }

    pub fn mul(&self, a: &GenPoly<T>, b: &GenPoly<T>) -> Result<GenPoly<T>> {
        self.check(a)?;
        self.check(b)?;
        let mut acc: BTreeMap<i64, CoefficientFunction<T>> = BTreeMap::new();
        for (&m, f) in &a.terms {
            for (&n, g) in &b.terms {
                let term = f.mul(&self.compose(g, -m))?;
                let slot = acc.remove(&(m + n));
                acc.insert(m + n, match slot {
                    Some(s) => s.add(&term)?,
                    None => term,
                });
            }
        }
        GenPoly::from_terms(self.model(), acc)
    }

    pub fn adjoint(&self, a: &GenPoly<T>) -> Result<GenPoly<T>> {
        self.check(a)?;
        GenPoly::from_terms(
            self.model(),
            a.terms.iter().map(|(&n, f)| (-n, self.compose(&f.conj(), n))),
        )
    }

    /// `a^k` for `k ≥ 0`.
    pub fn pow(&self, a: &GenPoly<T>, k: u32) -> Result<GenPoly<T>> {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// `a(j) = E(a δ^{−j})`, computed through the product.
    pub fn fourier_via_product(&self, a: &GenPoly<T>, j: i64) -> Result<CoefficientFunction<T>> {
        Ok(self.mul(a, &self.delta(-j))?.expectation())
    }

    /// Largest coefficient of `a − a*`.
    pub fn self_adjoint_defect(&self, a: &GenPoly<T>) -> Result<T> {
        Ok(a.sub(&self.adjoint(a)?)?.max_abs_coeff())
    }

    /// Whether every representation matrix `π_{y,t}(a)` on the sampling grid is
    /// positive semidefinite within `τ_psd`.
    pub fn positivity_check(&self, a: &GenPoly<T>, grid: &crate::reps::SampleGrid) -> Result<bool> {
        let defect = self.self_adjoint_defect(a)?;
        if defect > T::tau_zero() {
            return Err(Error::NotSelfAdjoint(defect.as_f64()));
        }
        let min = crate::reps::min_eigenvalue_over_grid(self, a, grid)?;
        Ok(min >= -T::tau_psd())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::SampleGrid;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn swap() -> CrossedProduct<f64> {
        CrossedProduct::new(DynSystem::finite(vec![1, 0]).unwrap())
    }

    fn d(v: &[f64]) -> CoefficientFunction<f64> {
        CoefficientFunction::from_real(v)
    }

    #[test]
    fn linear_structure() {
        let cp = swap();
        let f = GenPoly::monomial(1, d(&[1.0, 2.0]));
        assert!(f.add(&f.scale(c(-1.0, 0.0))).unwrap().is_zero());

        let s = cp.func(d(&[1.0, 2.0])).add(&GenPoly::monomial(1, d(&[3.0, 4.0]))).unwrap();
        assert_eq!(s.degrees().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(s.fourier(1), d(&[3.0, 4.0]));

        let f2 = GenPoly::monomial(2, d(&[1.0, -1.0])).scale(c(2.0, 0.0));
        assert_eq!(f2.fourier(2), d(&[2.0, -2.0]));
    }

    #[test]
    fn covariance_rule_on_swap() {
        let cp = swap();
        let a = GenPoly::monomial(1, d(&[1.0, 2.0]));
        let b = GenPoly::monomial(1, d(&[3.0, 4.0]));
        let ab = cp.mul(&a, &b).unwrap();
        // f·(g∘σ⁻¹) = (1·4, 2·3)
        assert_eq!(ab.fourier(2), d(&[4.0, 6.0]));
        assert_eq!(ab.degrees().count(), 1);
        assert_eq!(cp.fourier_via_product(&ab, 2).unwrap(), d(&[4.0, 6.0]));
    }

    #[test]
    fn delta_is_unitary() {
        let cp = swap();
        assert_eq!(cp.mul(&cp.delta(1), &cp.delta(-1)).unwrap(), cp.one());
        assert_eq!(cp.adjoint(&cp.delta(1)).unwrap(), cp.delta(-1));
    }

    #[test]
    fn degree_zero_is_pointwise() {
        let cp = swap();
        let p = cp.mul(&cp.func(d(&[1.0, 2.0])), &cp.func(d(&[3.0, 5.0]))).unwrap();
        assert_eq!(p, cp.func(d(&[3.0, 10.0])));
    }

    #[test]
    fn adjoint_on_swap() {
        let cp = swap();
        let f = CoefficientFunction::Discrete(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let a = GenPoly::monomial(1, f.clone());
        let adj = cp.adjoint(&a).unwrap();
        assert_eq!(adj.fourier(-1), CoefficientFunction::Discrete(vec![c(0.0, -2.0), c(1.0, 0.0)]));
        assert_eq!(cp.adjoint(&cp.func(f.clone())).unwrap(), cp.func(f.conj()));
    }

    #[test]
    fn expectation_examples() {
        let cp = swap();
        let f = d(&[1.0, 2.0]);
        let a = cp.func(f.clone()).add(&GenPoly::monomial(1, d(&[5.0, 6.0]))).unwrap();
        assert_eq!(a.expectation(), f);
        assert!(cp.delta(3).expectation().is_zero(0.0));

        let g = CoefficientFunction::Discrete(vec![c(1.0, 1.0), c(2.0, 0.0)]);
        let x = GenPoly::monomial(1, g);
        let e = cp.mul(&cp.adjoint(&x).unwrap(), &x).unwrap().expectation();
        // |f|²∘σ = (|f(1)|², |f(0)|²) = (4, 2)
        assert_eq!(e, d(&[4.0, 2.0]));
    }

    #[test]
    fn fourier_extraction() {
        let a = GenPoly::monomial(2, d(&[1.0, 3.0]));
        assert_eq!(a.fourier(2), d(&[1.0, 3.0]));
        assert!(a.fourier(1).is_zero(0.0));
    }

    #[test]
    fn cesaro_weights() {
        let f = d(&[1.0, 3.0]);
        let g = d(&[2.0, -1.0]);
        let a = GenPoly::monomial(1, f.clone());
        assert_eq!(a.cesaro(1).fourier(1), f.scale(c(0.5, 0.0)));

        let b = GenPoly::monomial(0, f.clone());
        for n in 0..5 {
            assert_eq!(b.cesaro(n), b);
        }

        let s = b.add(&GenPoly::monomial(2, g.clone())).unwrap().cesaro(2);
        assert_eq!(s.fourier(0), f);
        let w = s.fourier(2);
        let expect = g.scale(c(1.0 / 3.0, 0.0));
        assert!(w.sub(&expect).unwrap().is_zero(1e-15));
        // Degrees beyond n are dropped.
        assert!(GenPoly::monomial(3, g).cesaro(2).is_zero());
    }

    #[test]
    fn rotation_composition_uses_exact_roots() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 3).unwrap());
        let f = CoefficientFunction::Trig(LaurentPoly::from_coeffs([(1, c(1.0, 0.0)), (-2, c(0.5, 0.5))]));
        assert!(cp.compose(&f, 3).sub(&f).unwrap().is_zero(1e-15));
        assert!(cp.compose(&cp.compose(&f, 1), -1).sub(&f).unwrap().is_zero(1e-15));
        let x = 0.21;
        let lhs = cp.compose(&f, 1).eval(Point::Circle(x));
        let rhs = f.eval(Point::Circle(x + 1.0 / 3.0));
        assert!((lhs - rhs).norm() < 1e-14);
        // δ³ is central on the rotation by 1/3.
        let a = GenPoly::monomial(0, f.clone());
        assert_eq!(cp.mul(&cp.delta(3), &a).unwrap(), cp.mul(&a, &cp.delta(3)).unwrap());
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let cp = swap();
        let trig = GenPoly::monomial(0, CoefficientFunction::Trig(LaurentPoly::constant(c(1.0, 0.0))));
        assert!(matches!(cp.mul(&trig, &cp.one()), Err(Error::ModelMismatch(_))));
        assert!(cp.one().add(&trig).is_err());
        let three = GenPoly::monomial(0, d(&[1.0, 2.0, 3.0]));
        assert!(cp.one().add(&three).is_err());
    }

    #[test]
    fn positivity_examples() {
        let cp = swap();
        let grid = SampleGrid::default();
        let a = GenPoly::monomial(1, d(&[1.0, 2.0])).add(&cp.func(d(&[0.5, -1.0]))).unwrap();
        let aa = cp.mul(&cp.adjoint(&a).unwrap(), &a).unwrap();
        assert!(cp.positivity_check(&aa, &grid).unwrap());
        assert!(!cp.positivity_check(&cp.one().scale(c(-1.0, 0.0)), &grid).unwrap());
        assert!(!cp.positivity_check(&cp.func(d(&[1.0, -1.0])), &grid).unwrap());
        assert!(matches!(cp.positivity_check(&cp.delta(1), &grid), Err(Error::NotSelfAdjoint(_))));
    }
}
